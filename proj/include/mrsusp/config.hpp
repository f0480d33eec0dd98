#pragma once

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mrsusp/sim.hpp"
#include "mrsusp/tune.hpp"

namespace mrsusp {

using Json = nlohmann::ordered_json;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Gains for every strategy, so benchmark commands can run all five from
/// one config.
struct ControllerBank {
    double skyhook_c_sky = 17000.0;
    double groundhook_c_gr = 4000.0;
    double sg_c_sky = 25500.0;
    double sg_c_gr = 1150.0;
    double sg_c_passive = 0.0;
    PdGains pd{};

    ControllerSpec make(ControllerKind kind) const {
        switch (kind) {
            case ControllerKind::Passive: return ControllerSpec::passive();
            case ControllerKind::Skyhook: return ControllerSpec::skyhook(skyhook_c_sky);
            case ControllerKind::Groundhook: return ControllerSpec::groundhook(groundhook_c_gr);
            case ControllerKind::Skygroundhook:
                return ControllerSpec::skygroundhook(sg_c_sky, sg_c_gr, sg_c_passive);
            case ControllerKind::PdSkygroundhook:
                return ControllerSpec::pd_skygroundhook(pd);
        }
        return {};
    }
};

enum class RoadKind { Flat, Bump, SineSweep, Brownian, Csv };

struct RoadSection {
    RoadKind kind = RoadKind::Bump;
    BumpRoad bump{};
    SineSweepRoad sweep{};
    std::uint64_t seed = 1;
    int n_steps = 10000;
    double dt = 1e-3;
    double scale = 0.05;
    std::string csv_path;

    RoadProfile build() const {
        switch (kind) {
            case RoadKind::Flat: return FlatRoad{};
            case RoadKind::Bump: return bump;
            case RoadKind::SineSweep: return sweep;
            case RoadKind::Brownian: return brownian_road(dt, n_steps, seed, scale);
            case RoadKind::Csv: return load_road_csv(csv_path);
        }
        return FlatRoad{};
    }
};

/// The CLI's three run modes, flattened from (plant, actuation).
enum class RunMode { Explicit, Clamp, Implicit };

struct SimSection {
    RunMode mode = RunMode::Explicit;
    double dt = 0.0;        // 0 = auto: 2e-5 explicit/clamp, 1e-3 implicit
    double t_end = 5.0;
    int record_stride = 0;  // 0 = auto: ~1 kHz sampling
    double beta = 1.0;
    double c_max = 0.0;     // 0 = c_oa + c_ob v_max
    double skip = 0.0;

    double resolved_dt() const {
        if (dt > 0.0) return dt;
        return mode == RunMode::Implicit ? 1e-3 : 2e-5;
    }
    int resolved_stride() const {
        if (record_stride > 0) return record_stride;
        return std::max(1, int(std::llround(1e-3 / resolved_dt())));
    }
};

struct SweepSection {
    double f_lo = 0.8;   // Hz
    double f_hi = 14.0;  // Hz
    double df = 0.2;     // Hz
    double amplitude = 0.01;  // m
    int cycles_settle = 6;
    int cycles_measure = 4;

    std::vector<double> grid() const {
        if (!(f_lo > 0.0) || !(f_hi >= f_lo) || !(df > 0.0))
            throw ConfigError("sweep: need 0 < f_lo <= f_hi and df > 0");
        std::vector<double> freqs;
        for (int i = 0;; ++i) {
            const double f = f_lo + double(i) * df;
            if (f > f_hi + 1e-9) break;
            freqs.push_back(f);
        }
        return freqs;
    }
};

struct TuneSection {
    ControllerKind kind = ControllerKind::PdSkygroundhook;
    Theta theta0;  // empty = published gains
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    double lambda_s = 1.0;
    double lambda_u = 1.0;
    double road_dt = 1e-3;
    int road_steps = 10000;
    double road_scale = 0.05;
    double sim_dt = 1e-3;
    double t_end = 10.0;
    GdParams gd{50.0, 200, {10.0, 10.0, 1.0, 0.5}, 1e-4};
    GridParams grid{};
};

struct AppConfig {
    VehicleParams vehicle{};
    BoucWenParams damper{};
    ControllerKind controller_kind = ControllerKind::PdSkygroundhook;
    ControllerBank bank{};
    RoadSection road{};
    SimSection sim{};
    SweepSection sweep{};
    TuneSection tune{};

    /// Materialize the core SimConfig for the selected controller.
    SimConfig make_sim(ControllerKind kind) const {
        SimConfig cfg;
        cfg.dt = sim.resolved_dt();
        cfg.t_end = sim.t_end;
        cfg.plant_mode = sim.mode == RunMode::Implicit ? PlantMode::Implicit : PlantMode::Explicit;
        cfg.actuation =
            sim.mode == RunMode::Clamp ? ActuationMode::Clamp : ActuationMode::Inversion;
        cfg.controller = bank.make(kind);
        cfg.vehicle = vehicle;
        cfg.damper = damper;
        cfg.road = road.build();
        cfg.record_stride = sim.resolved_stride();
        cfg.beta = sim.beta;
        cfg.c_max = sim.c_max;
        cfg.metrics_skip = sim.skip;
        return cfg;
    }

    SimConfig make_sim() const { return make_sim(controller_kind); }

    TuneConfig make_tune() const {
        TuneConfig cfg;
        cfg.kind = tune.kind;
        cfg.theta0 = tune.theta0;
        cfg.seeds = tune.seeds;
        cfg.lambda_s = tune.lambda_s;
        cfg.lambda_u = tune.lambda_u;
        cfg.road_dt = tune.road_dt;
        cfg.road_steps = tune.road_steps;
        cfg.road_scale = tune.road_scale;
        cfg.sim_dt = tune.sim_dt;
        cfg.t_end = tune.t_end;
        cfg.gd = tune.gd;
        cfg.grid = tune.grid;
        cfg.vehicle = vehicle;
        cfg.damper = damper;
        return cfg;
    }
};

namespace detail {

inline double jnum(const Json& j, const std::string& section, const char* key, double dflt) {
    if (!j.contains(key)) return dflt;
    if (!j[key].is_number()) throw ConfigError(section + "." + key + ": expected a number");
    return j[key].get<double>();
}

inline int jint(const Json& j, const std::string& section, const char* key, int dflt) {
    if (!j.contains(key)) return dflt;
    if (!j[key].is_number_integer())
        throw ConfigError(section + "." + key + ": expected an integer");
    return j[key].get<int>();
}

inline std::string jstr(const Json& j, const std::string& section, const char* key,
                        const std::string& dflt) {
    if (!j.contains(key)) return dflt;
    if (!j[key].is_string()) throw ConfigError(section + "." + key + ": expected a string");
    return j[key].get<std::string>();
}

inline ControllerKind parse_kind(const std::string& s, const std::string& field) {
    if (s == "passive") return ControllerKind::Passive;
    if (s == "skyhook") return ControllerKind::Skyhook;
    if (s == "groundhook") return ControllerKind::Groundhook;
    if (s == "skygroundhook") return ControllerKind::Skygroundhook;
    if (s == "pd_skygroundhook") return ControllerKind::PdSkygroundhook;
    throw ConfigError(field + ": unknown controller kind '" + s + "'");
}

inline RunMode parse_mode(const std::string& s, const std::string& field) {
    if (s == "explicit") return RunMode::Explicit;
    if (s == "clamp") return RunMode::Clamp;
    if (s == "implicit") return RunMode::Implicit;
    throw ConfigError(field + ": unknown mode '" + s + "' (explicit|implicit|clamp)");
}

inline RoadKind parse_road_kind(const std::string& s, const std::string& field) {
    if (s == "flat") return RoadKind::Flat;
    if (s == "bump") return RoadKind::Bump;
    if (s == "sine_sweep") return RoadKind::SineSweep;
    if (s == "brownian") return RoadKind::Brownian;
    if (s == "csv") return RoadKind::Csv;
    throw ConfigError(field + ": unknown road kind '" + s + "'");
}

}  // namespace detail

inline AppConfig app_config_from_json(const Json& root) {
    using namespace detail;
    AppConfig cfg;

    if (root.contains("vehicle")) {
        const auto& j = root["vehicle"];
        cfg.vehicle.m_s = jnum(j, "vehicle", "m_s", cfg.vehicle.m_s);
        cfg.vehicle.m_u = jnum(j, "vehicle", "m_u", cfg.vehicle.m_u);
        cfg.vehicle.c_s = jnum(j, "vehicle", "c_s", cfg.vehicle.c_s);
        cfg.vehicle.k_s = jnum(j, "vehicle", "k_s", cfg.vehicle.k_s);
        cfg.vehicle.k_t = jnum(j, "vehicle", "k_t", cfg.vehicle.k_t);
    }
    if (root.contains("damper")) {
        const auto& j = root["damper"];
        cfg.damper.c_oa = jnum(j, "damper", "c_oa", cfg.damper.c_oa);
        cfg.damper.c_ob = jnum(j, "damper", "c_ob", cfg.damper.c_ob);
        cfg.damper.alpha_a = jnum(j, "damper", "alpha_a", cfg.damper.alpha_a);
        cfg.damper.alpha_b = jnum(j, "damper", "alpha_b", cfg.damper.alpha_b);
        cfg.damper.q = jnum(j, "damper", "q", cfg.damper.q);
        cfg.damper.b = jnum(j, "damper", "b", cfg.damper.b);
        cfg.damper.gamma = jnum(j, "damper", "gamma", cfg.damper.gamma);
        cfg.damper.k_0 = jnum(j, "damper", "k_0", cfg.damper.k_0);
        cfg.damper.v_max = jnum(j, "damper", "v_max", cfg.damper.v_max);
    }
    if (root.contains("controller")) {
        const auto& j = root["controller"];
        cfg.controller_kind =
            parse_kind(jstr(j, "controller", "kind", "pd_skygroundhook"), "controller.kind");
        if (j.contains("skyhook"))
            cfg.bank.skyhook_c_sky =
                jnum(j["skyhook"], "controller.skyhook", "c_sky", cfg.bank.skyhook_c_sky);
        if (j.contains("groundhook"))
            cfg.bank.groundhook_c_gr =
                jnum(j["groundhook"], "controller.groundhook", "c_gr", cfg.bank.groundhook_c_gr);
        if (j.contains("skygroundhook")) {
            const auto& sg = j["skygroundhook"];
            cfg.bank.sg_c_sky = jnum(sg, "controller.skygroundhook", "c_sky", cfg.bank.sg_c_sky);
            cfg.bank.sg_c_gr = jnum(sg, "controller.skygroundhook", "c_gr", cfg.bank.sg_c_gr);
            cfg.bank.sg_c_passive =
                jnum(sg, "controller.skygroundhook", "c_passive", cfg.bank.sg_c_passive);
        }
        if (j.contains("pd")) {
            const auto& pd = j["pd"];
            cfg.bank.pd.p_sky = jnum(pd, "controller.pd", "p_sky", cfg.bank.pd.p_sky);
            cfg.bank.pd.d_sky = jnum(pd, "controller.pd", "d_sky", cfg.bank.pd.d_sky);
            cfg.bank.pd.p_gr = jnum(pd, "controller.pd", "p_gr", cfg.bank.pd.p_gr);
            cfg.bank.pd.d_gr = jnum(pd, "controller.pd", "d_gr", cfg.bank.pd.d_gr);
        }
    }
    if (root.contains("road")) {
        const auto& j = root["road"];
        cfg.road.kind = parse_road_kind(jstr(j, "road", "kind", "bump"), "road.kind");
        cfg.road.bump.h_b = jnum(j, "road", "h_b", cfg.road.bump.h_b);
        cfg.road.bump.t1 = jnum(j, "road", "t1", cfg.road.bump.t1);
        cfg.road.bump.t2 = jnum(j, "road", "t2", cfg.road.bump.t2);
        cfg.road.sweep.f0 = jnum(j, "road", "f0", cfg.road.sweep.f0);
        cfg.road.sweep.f1 = jnum(j, "road", "f1", cfg.road.sweep.f1);
        cfg.road.sweep.duration = jnum(j, "road", "duration", cfg.road.sweep.duration);
        cfg.road.sweep.amplitude = jnum(j, "road", "amplitude", cfg.road.sweep.amplitude);
        cfg.road.seed = std::uint64_t(jint(j, "road", "seed", int(cfg.road.seed)));
        cfg.road.n_steps = jint(j, "road", "n_steps", cfg.road.n_steps);
        cfg.road.dt = jnum(j, "road", "dt", cfg.road.dt);
        cfg.road.scale = jnum(j, "road", "scale", cfg.road.scale);
        cfg.road.csv_path = jstr(j, "road", "csv_path", cfg.road.csv_path);
    }
    if (root.contains("sim")) {
        const auto& j = root["sim"];
        cfg.sim.mode = parse_mode(jstr(j, "sim", "mode", "explicit"), "sim.mode");
        cfg.sim.dt = jnum(j, "sim", "dt", cfg.sim.dt);
        cfg.sim.t_end = jnum(j, "sim", "t_end", cfg.sim.t_end);
        cfg.sim.record_stride = jint(j, "sim", "record_stride", cfg.sim.record_stride);
        cfg.sim.beta = jnum(j, "sim", "beta", cfg.sim.beta);
        cfg.sim.c_max = jnum(j, "sim", "c_max", cfg.sim.c_max);
        cfg.sim.skip = jnum(j, "sim", "skip", cfg.sim.skip);
    }
    if (root.contains("sweep")) {
        const auto& j = root["sweep"];
        cfg.sweep.f_lo = jnum(j, "sweep", "f_lo", cfg.sweep.f_lo);
        cfg.sweep.f_hi = jnum(j, "sweep", "f_hi", cfg.sweep.f_hi);
        cfg.sweep.df = jnum(j, "sweep", "df", cfg.sweep.df);
        cfg.sweep.amplitude = jnum(j, "sweep", "amplitude", cfg.sweep.amplitude);
        cfg.sweep.cycles_settle = jint(j, "sweep", "cycles_settle", cfg.sweep.cycles_settle);
        cfg.sweep.cycles_measure = jint(j, "sweep", "cycles_measure", cfg.sweep.cycles_measure);
    }
    if (root.contains("tune")) {
        const auto& j = root["tune"];
        cfg.tune.kind = parse_kind(jstr(j, "tune", "kind", "pd_skygroundhook"), "tune.kind");
        if (j.contains("theta0")) {
            if (!j["theta0"].is_array()) throw ConfigError("tune.theta0: expected an array");
            cfg.tune.theta0 = j["theta0"].get<std::vector<double>>();
        }
        if (j.contains("seeds")) {
            if (!j["seeds"].is_array()) throw ConfigError("tune.seeds: expected an array");
            cfg.tune.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
        }
        cfg.tune.lambda_s = jnum(j, "tune", "lambda_s", cfg.tune.lambda_s);
        cfg.tune.lambda_u = jnum(j, "tune", "lambda_u", cfg.tune.lambda_u);
        cfg.tune.road_dt = jnum(j, "tune", "road_dt", cfg.tune.road_dt);
        cfg.tune.road_steps = jint(j, "tune", "road_steps", cfg.tune.road_steps);
        cfg.tune.road_scale = jnum(j, "tune", "road_scale", cfg.tune.road_scale);
        cfg.tune.sim_dt = jnum(j, "tune", "sim_dt", cfg.tune.sim_dt);
        cfg.tune.t_end = jnum(j, "tune", "t_end", cfg.tune.t_end);
        if (j.contains("gd")) {
            const auto& gd = j["gd"];
            cfg.tune.gd.eta = jnum(gd, "tune.gd", "eta", cfg.tune.gd.eta);
            cfg.tune.gd.max_iters = jint(gd, "tune.gd", "max_iters", cfg.tune.gd.max_iters);
            cfg.tune.gd.tol = jnum(gd, "tune.gd", "tol", cfg.tune.gd.tol);
            if (gd.contains("fd_steps")) {
                if (!gd["fd_steps"].is_array())
                    throw ConfigError("tune.gd.fd_steps: expected an array");
                cfg.tune.gd.fd_steps = gd["fd_steps"].get<std::vector<double>>();
            }
        }
        if (j.contains("grid")) {
            const auto& g = j["grid"];
            cfg.tune.grid.radius_frac = jnum(g, "tune.grid", "radius_frac",
                                             cfg.tune.grid.radius_frac);
            cfg.tune.grid.points = jint(g, "tune.grid", "points", cfg.tune.grid.points);
            if (g.contains("radii")) {
                if (!g["radii"].is_array()) throw ConfigError("tune.grid.radii: expected an array");
                cfg.tune.grid.radii = g["radii"].get<std::vector<double>>();
            }
        }
    }
    return cfg;
}

inline const char* to_string(RunMode m) {
    switch (m) {
        case RunMode::Explicit: return "explicit";
        case RunMode::Clamp: return "clamp";
        case RunMode::Implicit: return "implicit";
    }
    return "?";
}

inline const char* to_string(RoadKind k) {
    switch (k) {
        case RoadKind::Flat: return "flat";
        case RoadKind::Bump: return "bump";
        case RoadKind::SineSweep: return "sine_sweep";
        case RoadKind::Brownian: return "brownian";
        case RoadKind::Csv: return "csv";
    }
    return "?";
}

/// Fully-resolved echo of a config; feeding it back reproduces the run.
inline Json app_config_to_json(const AppConfig& cfg) {
    Json j;
    j["vehicle"] = {{"m_s", cfg.vehicle.m_s},
                    {"m_u", cfg.vehicle.m_u},
                    {"c_s", cfg.vehicle.c_s},
                    {"k_s", cfg.vehicle.k_s},
                    {"k_t", cfg.vehicle.k_t}};
    j["damper"] = {{"c_oa", cfg.damper.c_oa},   {"c_ob", cfg.damper.c_ob},
                   {"alpha_a", cfg.damper.alpha_a}, {"alpha_b", cfg.damper.alpha_b},
                   {"q", cfg.damper.q},         {"b", cfg.damper.b},
                   {"gamma", cfg.damper.gamma}, {"k_0", cfg.damper.k_0},
                   {"v_max", cfg.damper.v_max}};
    j["controller"] = {
        {"kind", name(cfg.controller_kind)},
        {"skyhook", {{"c_sky", cfg.bank.skyhook_c_sky}}},
        {"groundhook", {{"c_gr", cfg.bank.groundhook_c_gr}}},
        {"skygroundhook",
         {{"c_sky", cfg.bank.sg_c_sky},
          {"c_gr", cfg.bank.sg_c_gr},
          {"c_passive", cfg.bank.sg_c_passive}}},
        {"pd",
         {{"p_sky", cfg.bank.pd.p_sky},
          {"d_sky", cfg.bank.pd.d_sky},
          {"p_gr", cfg.bank.pd.p_gr},
          {"d_gr", cfg.bank.pd.d_gr}}}};
    j["road"] = {{"kind", to_string(cfg.road.kind)},
                 {"h_b", cfg.road.bump.h_b},
                 {"t1", cfg.road.bump.t1},
                 {"t2", cfg.road.bump.t2},
                 {"f0", cfg.road.sweep.f0},
                 {"f1", cfg.road.sweep.f1},
                 {"duration", cfg.road.sweep.duration},
                 {"amplitude", cfg.road.sweep.amplitude},
                 {"seed", cfg.road.seed},
                 {"n_steps", cfg.road.n_steps},
                 {"dt", cfg.road.dt},
                 {"scale", cfg.road.scale},
                 {"csv_path", cfg.road.csv_path}};
    j["sim"] = {{"mode", to_string(cfg.sim.mode)},
                {"dt", cfg.sim.resolved_dt()},
                {"t_end", cfg.sim.t_end},
                {"record_stride", cfg.sim.resolved_stride()},
                {"beta", cfg.sim.beta},
                {"c_max", cfg.sim.c_max},
                {"skip", cfg.sim.skip}};
    j["sweep"] = {{"f_lo", cfg.sweep.f_lo},
                  {"f_hi", cfg.sweep.f_hi},
                  {"df", cfg.sweep.df},
                  {"amplitude", cfg.sweep.amplitude},
                  {"cycles_settle", cfg.sweep.cycles_settle},
                  {"cycles_measure", cfg.sweep.cycles_measure}};
    j["tune"] = {{"kind", name(cfg.tune.kind)},
                 {"theta0", cfg.tune.theta0},
                 {"seeds", cfg.tune.seeds},
                 {"lambda_s", cfg.tune.lambda_s},
                 {"lambda_u", cfg.tune.lambda_u},
                 {"road_dt", cfg.tune.road_dt},
                 {"road_steps", cfg.tune.road_steps},
                 {"road_scale", cfg.tune.road_scale},
                 {"sim_dt", cfg.tune.sim_dt},
                 {"t_end", cfg.tune.t_end},
                 {"gd",
                  {{"eta", cfg.tune.gd.eta},
                   {"max_iters", cfg.tune.gd.max_iters},
                   {"fd_steps", cfg.tune.gd.fd_steps},
                   {"tol", cfg.tune.gd.tol}}},
                 {"grid",
                  {{"radius_frac", cfg.tune.grid.radius_frac},
                   {"points", cfg.tune.grid.points},
                   {"radii", cfg.tune.grid.radii}}}};
    return j;
}

/// Parse a config file. A manifest written by a previous run (an object
/// with a "config_echo" key) is accepted directly.
inline AppConfig load_app_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    Json root;
    try {
        root = Json::parse(in);
    } catch (const std::exception& ex) {
        throw ConfigError("config: " + path + ": " + ex.what());
    }
    if (!root.is_object()) throw ConfigError("config: " + path + ": expected a JSON object");
    if (root.contains("config_echo")) root = root["config_echo"];
    return app_config_from_json(root);
}

/// Validate everything an AppConfig feeds into the toolkit.
inline void validate(const AppConfig& cfg) {
    validate(cfg.vehicle);
    validate(cfg.damper);
    validate(cfg.bank.make(ControllerKind::Skyhook));
    validate(cfg.bank.make(ControllerKind::Groundhook));
    validate(cfg.bank.make(ControllerKind::Skygroundhook));
    validate(cfg.bank.make(ControllerKind::PdSkygroundhook));
    if (cfg.road.kind == RoadKind::Bump && !(cfg.road.bump.t2 > cfg.road.bump.t1))
        throw ConfigError("road.t2: must be > road.t1");
    if (cfg.road.kind == RoadKind::Bump && cfg.road.bump.h_b < 0.0)
        throw ConfigError("road.h_b: must be >= 0");
    if (cfg.road.kind == RoadKind::Brownian && !(cfg.road.dt > 0.0))
        throw ConfigError("road.dt: must be > 0");
    if (cfg.road.kind == RoadKind::Brownian && cfg.road.n_steps < 1)
        throw ConfigError("road.n_steps: must be >= 1");
    if (!(cfg.sim.resolved_dt() > 0.0)) throw ConfigError("sim.dt: must be > 0");
    if (!(cfg.sim.t_end >= cfg.sim.resolved_dt())) throw ConfigError("sim.t_end: must be >= dt");
    if (cfg.sim.beta < 0.0) throw ConfigError("sim.beta: must be >= 0");
    if (cfg.sim.skip < 0.0) throw ConfigError("sim.skip: must be >= 0");
    if (cfg.sweep.cycles_settle < 0 || cfg.sweep.cycles_measure < 1)
        throw ConfigError("sweep.cycles: settle >= 0 and measure >= 1");
    (void)cfg.sweep.grid();
}

}  // namespace mrsusp
