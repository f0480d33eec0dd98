#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mrsusp/sim.hpp"

namespace mrsusp {

using Theta = std::vector<double>;
using Objective = std::function<double(const Theta&)>;

/// Memoizing wrapper around an objective; identical gain vectors are
/// evaluated at most once per tuning run.
class CachingObjective {
  public:
    explicit CachingObjective(Objective fn) : fn_(std::move(fn)) {}

    double operator()(const Theta& theta) {
        auto it = cache_.find(theta);
        if (it != cache_.end()) return it->second;
        const double j = fn_(theta);
        cache_.emplace(theta, j);
        return j;
    }

    std::size_t evaluations() const { return cache_.size(); }

  private:
    Objective fn_;
    std::map<Theta, double> cache_;
};

/// Published tuned gains per strategy.
inline Theta published_gains(ControllerKind kind) {
    switch (kind) {
        case ControllerKind::Skyhook: return {17000.0};
        case ControllerKind::Groundhook: return {4000.0};
        case ControllerKind::Skygroundhook: return {25500.0, 1150.0};
        case ControllerKind::PdSkygroundhook: return {7400.0, 5600.0, 440.0, 50.0};
        case ControllerKind::Passive: return {};
    }
    return {};
}

inline ControllerSpec controller_from_theta(ControllerKind kind, const Theta& theta) {
    auto need = [&](std::size_t n) {
        if (theta.size() != n)
            throw std::invalid_argument("controller_from_theta: expected " + std::to_string(n) +
                                        " gains for " + name(kind));
    };
    switch (kind) {
        case ControllerKind::Passive: need(0); return ControllerSpec::passive();
        case ControllerKind::Skyhook: need(1); return ControllerSpec::skyhook(theta[0]);
        case ControllerKind::Groundhook: need(1); return ControllerSpec::groundhook(theta[0]);
        case ControllerKind::Skygroundhook:
            need(2);
            return ControllerSpec::skygroundhook(theta[0], theta[1]);
        case ControllerKind::PdSkygroundhook:
            need(4);
            return ControllerSpec::pd_skygroundhook({theta[0], theta[1], theta[2], theta[3]});
    }
    return {};
}

/// One road of the tuning ensemble with its cached passive baseline.
struct RoadCase {
    SimConfig cfg;  // controller overwritten per candidate
    double baseline_rms_a_s = 0.0;
    double baseline_rms_a_u = 0.0;
};

/// Mean over roads of the weighted percent reductions. Roads whose passive
/// baseline is exactly zero (no excitation) contribute zero.
inline double aggregate_index(const std::vector<std::pair<double, double>>& baselines,
                              const std::vector<std::pair<double, double>>& candidates,
                              double lambda_s, double lambda_u) {
    if (baselines.size() != candidates.size() || baselines.empty())
        throw std::invalid_argument("aggregate_index: size mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < baselines.size(); ++i) {
        double contrib = 0.0;
        if (baselines[i].first > 0.0)
            contrib += lambda_s * percent_reduction(baselines[i].first, candidates[i].first);
        if (baselines[i].second > 0.0)
            contrib += lambda_u * percent_reduction(baselines[i].second, candidates[i].second);
        sum += contrib;
    }
    return sum / double(baselines.size());
}

/// Performance index of one gain vector over the road ensemble; divergence
/// on any road rejects the candidate with -inf.
inline double performance_index(const Theta& theta, ControllerKind kind,
                                const std::vector<RoadCase>& cases, double lambda_s,
                                double lambda_u) {
    if (cases.empty()) throw std::invalid_argument("performance_index: no roads");
    for (double g : theta)
        if (g < 0.0 || !std::isfinite(g))
            throw std::invalid_argument("performance_index: gains must be finite and >= 0");
    const ControllerSpec controller = controller_from_theta(kind, theta);
    std::vector<std::pair<double, double>> base, cand;
    base.reserve(cases.size());
    cand.reserve(cases.size());
    for (const auto& rc : cases) {
        SimConfig cfg = rc.cfg;
        cfg.controller = controller;
        try {
            const Metrics m = compute_metrics(simulate(cfg), cfg.metrics_skip);
            cand.emplace_back(m.rms_a_s, m.rms_a_u);
        } catch (const DivergenceError&) {
            return -std::numeric_limits<double>::infinity();
        }
        base.emplace_back(rc.baseline_rms_a_s, rc.baseline_rms_a_u);
    }
    return aggregate_index(base, cand, lambda_s, lambda_u);
}

struct GdParams {
    double eta = 50.0;            // step size (gain units per unit J)
    int max_iters = 200;
    std::vector<double> fd_steps; // finite-difference step per gain; empty = auto
    double tol = 1e-4;            // relative ||dtheta|| stop
};

struct GdResult {
    Theta theta;   // best-seen over every evaluation
    double j = -std::numeric_limits<double>::infinity();
    std::vector<std::pair<Theta, double>> history;  // iterate sequence
    bool all_rejected = false;
};

namespace detail {

inline double norm2(const Theta& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

inline std::vector<double> default_fd_steps(const Theta& theta0) {
    std::vector<double> h(theta0.size());
    for (std::size_t i = 0; i < theta0.size(); ++i) h[i] = std::max(0.01 * theta0[i], 1.0);
    return h;
}

}  // namespace detail

/// Projected gradient ascent with central differences, clamped to
/// nonnegative gains. Rejected (-inf) probes contribute a zero gradient
/// component. Returns the best-seen point.
template <typename Obj>
GdResult gradient_ascent(Obj& objective, const Theta& theta0, const GdParams& gd) {
    for (double g : theta0)
        if (g < 0.0) throw std::invalid_argument("gradient_ascent: theta0 must be >= 0");
    std::vector<double> h = gd.fd_steps.empty() ? detail::default_fd_steps(theta0) : gd.fd_steps;
    if (h.size() != theta0.size())
        throw std::invalid_argument("gradient_ascent: fd_steps size mismatch");

    GdResult res;
    bool any_finite = false;
    auto eval = [&](const Theta& th) {
        const double j = objective(th);
        if (std::isfinite(j)) {
            any_finite = true;
            if (j > res.j) {
                res.j = j;
                res.theta = th;
            }
        }
        return j;
    };

    Theta theta = theta0;
    double j = eval(theta);
    res.history.emplace_back(theta, j);

    for (int iter = 0; iter < gd.max_iters && gd.eta != 0.0; ++iter) {
        Theta grad(theta.size(), 0.0);
        for (std::size_t i = 0; i < theta.size(); ++i) {
            Theta up = theta, dn = theta;
            up[i] = theta[i] + h[i];
            dn[i] = std::max(0.0, theta[i] - h[i]);
            if (up[i] == dn[i]) continue;
            const double ju = eval(up);
            const double jd = eval(dn);
            if (std::isfinite(ju) && std::isfinite(jd)) grad[i] = (ju - jd) / (up[i] - dn[i]);
        }
        Theta next(theta.size());
        for (std::size_t i = 0; i < theta.size(); ++i)
            next[i] = std::max(0.0, theta[i] + gd.eta * grad[i]);
        const double j_next = eval(next);
        res.history.emplace_back(next, j_next);

        Theta delta(theta.size());
        for (std::size_t i = 0; i < theta.size(); ++i) delta[i] = next[i] - theta[i];
        const double rel = detail::norm2(delta) / std::max(detail::norm2(theta), 1e-12);
        theta = next;
        j = j_next;
        if (rel < gd.tol) break;
    }

    if (!any_finite) {
        res.theta = theta0;
        res.j = -std::numeric_limits<double>::infinity();
        res.all_rejected = true;
    }
    return res;
}

struct GridParams {
    std::vector<double> radii;  // absolute radius per gain; empty = radius_frac * center
    double radius_frac = 0.1;
    int points = 5;  // per axis, odd so the center is included
};

/// Full Cartesian grid around center, clipped to nonnegative gains;
/// argmax with lexicographically-smallest tie breaking.
template <typename Obj>
Theta grid_refine(Obj& objective, const Theta& center, const GridParams& grid) {
    if (grid.points < 3 || grid.points % 2 == 0)
        throw std::invalid_argument("grid_refine: points per axis must be odd and >= 3");
    std::vector<double> radii = grid.radii;
    if (radii.empty()) {
        radii.resize(center.size());
        for (std::size_t i = 0; i < center.size(); ++i) radii[i] = grid.radius_frac * center[i];
    }
    if (radii.size() != center.size())
        throw std::invalid_argument("grid_refine: radii size mismatch");

    const std::size_t dims = center.size();
    if (dims == 0) return center;

    std::vector<std::vector<double>> axes(dims);
    for (std::size_t i = 0; i < dims; ++i) {
        for (int k = 0; k < grid.points; ++k) {
            const double frac = double(2 * k) / double(grid.points - 1) - 1.0;
            axes[i].push_back(std::max(0.0, center[i] + radii[i] * frac));
        }
    }

    Theta best = center;
    double j_best = -std::numeric_limits<double>::infinity();
    std::vector<int> idx(dims, 0);
    // Lexicographic sweep; strict improvement keeps the smallest tied point.
    while (true) {
        Theta point(dims);
        for (std::size_t i = 0; i < dims; ++i) point[i] = axes[i][std::size_t(idx[i])];
        const double j = objective(point);
        if (j > j_best) {
            j_best = j;
            best = point;
        }
        std::size_t d = dims;
        while (d > 0) {
            --d;
            if (++idx[d] < grid.points) break;
            idx[d] = 0;
            if (d == 0) return best;
        }
    }
}

struct TuneConfig {
    ControllerKind kind = ControllerKind::PdSkygroundhook;
    Theta theta0;  // empty = published gains for the kind
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    double lambda_s = 1.0;
    double lambda_u = 1.0;
    double road_dt = 1e-3;   // s
    int road_steps = 10000;  // 10 s roads
    double road_scale = 0.05;
    double sim_dt = 1e-3;  // s; tuning runs in the implicit (ideal-force) plant
    double t_end = 10.0;   // s
    GdParams gd{50.0, 200, {10.0, 10.0, 1.0, 0.5}, 1e-4};
    GridParams grid{};
    VehicleParams vehicle{};
    BoucWenParams damper{};
};

inline void validate(const TuneConfig& cfg) {
    if (cfg.lambda_s < 0.0 || cfg.lambda_u < 0.0 || (cfg.lambda_s == 0.0 && cfg.lambda_u == 0.0))
        throw std::invalid_argument("tune.lambda: weights must be >= 0 and not both zero");
    if (cfg.seeds.empty()) throw std::invalid_argument("tune.seeds: must be non-empty");
    if (!(cfg.road_dt > 0.0)) throw std::invalid_argument("tune.road_dt: must be > 0");
    if (cfg.road_steps < 1) throw std::invalid_argument("tune.road_steps: must be >= 1");
    if (!(cfg.sim_dt > 0.0)) throw std::invalid_argument("tune.sim_dt: must be > 0");
    if (!(cfg.t_end >= cfg.sim_dt)) throw std::invalid_argument("tune.t_end: must be >= sim_dt");
    if (cfg.kind == ControllerKind::Passive)
        throw std::invalid_argument("tune.kind: passive has no gains to tune");
    validate(cfg.vehicle);
    validate(cfg.damper);
}

/// Build the seeded Brownian ensemble and cache the passive baselines.
inline std::vector<RoadCase> prepare_road_cases(const TuneConfig& cfg) {
    std::vector<RoadCase> cases;
    cases.reserve(cfg.seeds.size());
    for (const auto seed : cfg.seeds) {
        RoadCase rc;
        rc.cfg.plant_mode = PlantMode::Implicit;
        rc.cfg.dt = cfg.sim_dt;
        rc.cfg.t_end = cfg.t_end;
        rc.cfg.vehicle = cfg.vehicle;
        rc.cfg.damper = cfg.damper;
        rc.cfg.road = brownian_road(cfg.road_dt, cfg.road_steps, seed, cfg.road_scale);
        rc.cfg.controller = ControllerSpec::passive();
        const Metrics m = compute_metrics(simulate(rc.cfg));
        rc.baseline_rms_a_s = m.rms_a_s;
        rc.baseline_rms_a_u = m.rms_a_u;
        cases.push_back(std::move(rc));
    }
    return cases;
}

struct TuneReport {
    Theta theta_star;
    double j_star = 0.0;
    double j_published = 0.0;
    std::vector<std::pair<Theta, double>> history;
    std::size_t evaluations = 0;
    bool gd_all_rejected = false;
};

/// Gradient ascent from theta0, then a grid refinement around its result.
/// The published gains are evaluated in the same harness for comparison.
inline TuneReport tune(const TuneConfig& cfg) {
    validate(cfg);
    const auto cases = prepare_road_cases(cfg);
    CachingObjective objective([&](const Theta& th) {
        return performance_index(th, cfg.kind, cases, cfg.lambda_s, cfg.lambda_u);
    });

    const Theta theta0 = cfg.theta0.empty() ? published_gains(cfg.kind) : cfg.theta0;

    GdParams gd = cfg.gd;
    if (!gd.fd_steps.empty() && gd.fd_steps.size() != theta0.size()) gd.fd_steps.clear();

    TuneReport report;
    const GdResult coarse = gradient_ascent(objective, theta0, gd);
    report.history = coarse.history;
    report.gd_all_rejected = coarse.all_rejected;

    const Theta refined = grid_refine(objective, coarse.theta, cfg.grid);
    const double j_refined = objective(refined);

    // Ties keep the gradient result (and hence theta0 on flat objectives).
    report.theta_star = j_refined > coarse.j ? refined : coarse.theta;
    report.j_star = std::max(j_refined, coarse.j);
    report.history.emplace_back(report.theta_star, report.j_star);
    report.j_published = objective(published_gains(cfg.kind));
    report.evaluations = objective.evaluations();
    return report;
}

}  // namespace mrsusp
