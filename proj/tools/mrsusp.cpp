// mrsusp: quarter-car MR-damper suspension simulation and benchmarking.
//
// Exit codes: 0 success, 2 config/validation, 3 numerical divergence, 4 I/O.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mrsusp/bench.hpp"
#include "mrsusp/config.hpp"
#include "mrsusp/io.hpp"
#include "mrsusp/sim.hpp"
#include "mrsusp/tune.hpp"
#include "mrsusp/version.hpp"

namespace fs = std::filesystem;
using namespace mrsusp;

namespace {

struct Options {
    std::string config_path;
    std::string out_dir = "out";
    std::int64_t seed = -1;  // <0 = keep config value
    std::string mode;        // empty = keep config value
    std::vector<std::uint64_t> seeds;  // tune / road gen override
};

AppConfig load_config(const Options& opt) {
    AppConfig cfg;
    if (!opt.config_path.empty()) cfg = load_app_config(opt.config_path);
    if (!opt.mode.empty()) cfg.sim.mode = detail::parse_mode(opt.mode, "--mode");
    if (opt.seed >= 0) cfg.road.seed = std::uint64_t(opt.seed);
    if (!opt.seeds.empty()) cfg.tune.seeds = opt.seeds;
    validate(cfg);
    return cfg;
}

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

void print_warnings(const SimConfig& cfg) {
    for (const auto& w : config_warnings(cfg)) std::cerr << "warning: " << w << "\n";
}

std::vector<std::uint64_t> run_seeds(const AppConfig& cfg) {
    if (cfg.road.kind == RoadKind::Brownian) return {cfg.road.seed};
    return {};
}

int cmd_simulate(const Options& opt) {
    const AppConfig cfg = load_config(opt);
    const SimConfig sim_cfg = cfg.make_sim();
    validate(sim_cfg);
    print_warnings(sim_cfg);
    ensure_out_dir(opt.out_dir);
    write_json_file(opt.out_dir + "/manifest.json",
                    make_manifest("simulate", opt.config_path, opt.out_dir, run_seeds(cfg), cfg));
    const Trajectory traj = simulate(sim_cfg);
    write_trajectory_csv(opt.out_dir + "/trajectory.csv", traj);
    write_json_file(opt.out_dir + "/metrics.json",
                    metrics_to_json(compute_metrics(traj, sim_cfg.metrics_skip)));
    return 0;
}

int cmd_bump_bench(const Options& opt) {
    const AppConfig cfg = load_config(opt);
    print_warnings(cfg.make_sim());
    ensure_out_dir(opt.out_dir);
    write_json_file(opt.out_dir + "/manifest.json",
                    make_manifest("bump-bench", opt.config_path, opt.out_dir, {}, cfg));
    write_text_file(opt.out_dir + "/bump_bench.csv", bump_bench_csv(bump_bench(cfg)));
    return 0;
}

int cmd_sweep(const Options& opt) {
    const AppConfig cfg = load_config(opt);
    print_warnings(cfg.make_sim());
    ensure_out_dir(opt.out_dir);
    write_json_file(opt.out_dir + "/manifest.json",
                    make_manifest("sweep", opt.config_path, opt.out_dir, {}, cfg));
    const auto rows = sweep_bench(cfg);
    write_text_file(opt.out_dir + "/sweep_response.csv", sweep_response_csv(rows));
    write_text_file(opt.out_dir + "/sweep_peaks.csv", sweep_peaks_csv(rows));
    return 0;
}

Json tune_report_to_json(const TuneReport& report, const AppConfig& cfg) {
    Json history = Json::array();
    for (const auto& [theta, j] : report.history)
        history.push_back(Json{{"theta", theta}, {"j", j}});
    return Json{{"theta_star", report.theta_star},
                {"j_star", report.j_star},
                {"j_published", report.j_published},
                {"history", history},
                {"evaluations", report.evaluations},
                {"config_echo", app_config_to_json(cfg)}};
}

int cmd_tune(const Options& opt) {
    const AppConfig cfg = load_config(opt);
    const TuneConfig tune_cfg = cfg.make_tune();
    validate(tune_cfg);
    ensure_out_dir(opt.out_dir);
    write_json_file(opt.out_dir + "/manifest.json",
                    make_manifest("tune", opt.config_path, opt.out_dir, tune_cfg.seeds, cfg));
    for (const auto seed : tune_cfg.seeds) {
        const TabulatedRoad road =
            brownian_road(tune_cfg.road_dt, tune_cfg.road_steps, seed, tune_cfg.road_scale);
        write_road_csv(opt.out_dir + "/road_seed" + std::to_string(seed) + ".csv", road);
    }
    const TuneReport report = tune(tune_cfg);
    if (report.gd_all_rejected)
        std::cerr << "warning: every gradient-descent candidate diverged; "
                     "returning the initial gains\n";
    write_json_file(opt.out_dir + "/tune_report.json", tune_report_to_json(report, cfg));
    return 0;
}

int cmd_freqs(const Options& opt) {
    const AppConfig cfg = load_config(opt);
    const auto wn = natural_frequencies(cfg.vehicle);
    std::cout << "omega1_rad_s=" << fmt17(wn.omega1) << "\n"
              << "omega2_rad_s=" << fmt17(wn.omega2) << "\n"
              << "omega1_hz=" << fmt17(wn.omega1 / (2.0 * M_PI)) << "\n"
              << "omega2_hz=" << fmt17(wn.omega2 / (2.0 * M_PI)) << "\n";
    return 0;
}

int cmd_road_gen(const Options& opt) {
    const AppConfig cfg = load_config(opt);
    ensure_out_dir(opt.out_dir);
    std::vector<std::uint64_t> seeds;
    if (cfg.road.kind == RoadKind::Brownian)
        seeds = opt.seeds.empty() ? std::vector<std::uint64_t>{cfg.road.seed} : opt.seeds;
    write_json_file(opt.out_dir + "/manifest.json",
                    make_manifest("road gen", opt.config_path, opt.out_dir, seeds, cfg));
    if (cfg.road.kind == RoadKind::Brownian) {
        for (const auto seed : seeds) {
            const TabulatedRoad road =
                brownian_road(cfg.road.dt, cfg.road.n_steps, seed, cfg.road.scale);
            write_road_csv(opt.out_dir + "/road_seed" + std::to_string(seed) + ".csv", road);
        }
        return 0;
    }
    // Closed-form or loaded roads: sample over [0, t_end] at the road dt.
    const RoadProfile profile = cfg.road.build();
    TabulatedRoad sampled;
    sampled.dt = cfg.road.dt;
    const auto n = static_cast<std::size_t>(std::llround(cfg.sim.t_end / cfg.road.dt));
    sampled.z.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        sampled.z[i] = elevation(profile, double(i) * cfg.road.dt);
    write_road_csv(opt.out_dir + "/road.csv", sampled);
    return 0;
}

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const DivergenceError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 3;
    } catch (const IoError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 4;
    } catch (const fs::filesystem_error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    } catch (const std::runtime_error& ex) {
        // ConfigError, RoadFormatError, json parse issues.
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semi-active quarter-car suspension toolkit (MR damper)"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App* sub, bool with_seeds = false) {
        sub->add_option("--config", opt.config_path, "JSON config file (or a manifest)");
        sub->add_option("--out", opt.out_dir, "output directory")->capture_default_str();
        sub->add_option("--seed", opt.seed, "override road.seed");
        sub->add_option("--mode", opt.mode, "override sim.mode (explicit|implicit|clamp)");
        if (with_seeds)
            sub->add_option("--seeds", opt.seeds, "seed list override")->delimiter(',');
    };

    int rc = 0;
    auto* sim = app.add_subcommand("simulate", "run one closed-loop simulation");
    add_common(sim);
    sim->callback([&] { rc = guarded([&] { return cmd_simulate(opt); }); });

    auto* bench = app.add_subcommand("bump-bench", "compare all controllers on the bump");
    add_common(bench);
    bench->callback([&] { rc = guarded([&] { return cmd_bump_bench(opt); }); });

    auto* sweep = app.add_subcommand("sweep", "stepped-sine frequency response comparison");
    add_common(sweep);
    sweep->callback([&] { rc = guarded([&] { return cmd_sweep(opt); }); });

    auto* tune = app.add_subcommand("tune", "tune controller gains on the road ensemble");
    add_common(tune, true);
    tune->callback([&] { rc = guarded([&] { return cmd_tune(opt); }); });

    auto* freqs = app.add_subcommand("freqs", "print the undamped natural frequencies");
    add_common(freqs);
    freqs->callback([&] { rc = guarded([&] { return cmd_freqs(opt); }); });

    auto* road = app.add_subcommand("road", "road utilities");
    auto* gen = road->add_subcommand("gen", "generate the configured road as CSV");
    add_common(gen, true);
    gen->callback([&] { rc = guarded([&] { return cmd_road_gen(opt); }); });
    road->require_subcommand(1);

    CLI11_PARSE(app, argc, argv);
    return rc;
}
