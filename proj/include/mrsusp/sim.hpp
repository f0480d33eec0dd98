#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mrsusp/control.hpp"
#include "mrsusp/damper.hpp"
#include "mrsusp/integrator.hpp"
#include "mrsusp/model.hpp"
#include "mrsusp/road.hpp"

namespace mrsusp {

/// Explicit: plant driven by the MR damper at the commanded voltage.
/// Implicit: ideal actuator; the PD loop is resolved through the coupled
/// mass matrix and other controllers apply their force directly.
enum class PlantMode { Explicit, Implicit };

struct SimConfig {
    double dt = 2e-5;     // s; Explicit default resolves the hysteresis ODE
    double t_end = 5.0;   // s
    PlantMode plant_mode = PlantMode::Explicit;
    ActuationMode actuation = ActuationMode::Inversion;
    ControllerSpec controller{};
    VehicleParams vehicle{};
    BoucWenParams damper{};
    RoadProfile road = FlatRoad{};
    int record_stride = 1;    // steps per recorded sample
    double beta = 1.0;        // hysteresis weight of the energy monitor
    double c_max = 0.0;       // clamp ceiling (N·s/m); 0 = c_oa + c_ob v_max
    double metrics_skip = 0.0; // s discarded at the start of metric windows
    SimState initial{};
};

struct DivergenceError : std::runtime_error {
    DivergenceError(double t, double dt)
        : std::runtime_error("simulation diverged at t = " + std::to_string(t) +
                             " s (dt = " + std::to_string(dt) + " s)"),
          t(t),
          dt(dt) {}
    double t;
    double dt;
};

inline void validate(const SimConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("sim.dt: must be > 0");
    if (!(cfg.t_end >= cfg.dt)) throw std::invalid_argument("sim.t_end: must be >= dt");
    if (cfg.record_stride < 1) throw std::invalid_argument("sim.record_stride: must be >= 1");
    if (cfg.beta < 0.0) throw std::invalid_argument("sim.beta: must be >= 0");
    if (cfg.metrics_skip < 0.0) throw std::invalid_argument("sim.metrics_skip: must be >= 0");
    validate(cfg.vehicle);
    validate(cfg.damper);
    validate(cfg.controller);
    if (!finite(cfg.initial)) throw std::invalid_argument("sim.initial: must be finite");
}

/// Advisory notes that do not block a run.
inline std::vector<std::string> config_warnings(const SimConfig& cfg) {
    std::vector<std::string> out;
    if (cfg.plant_mode == PlantMode::Explicit) {
        // RK4 stability of dx/dt ~ -(q+b)|v_rel| x demands (q+b)|v_rel| dt < 2.5.
        const double bound = 2.5 / std::max(cfg.damper.q + cfg.damper.b, 1.0);
        if (cfg.dt > bound)
            out.push_back("sim.dt = " + std::to_string(cfg.dt) +
                          " may not resolve the hysteresis state for |v_rel| up to 1 m/s; "
                          "stability needs dt <= " + std::to_string(bound));
    }
    return out;
}

struct StepDiagnostics {
    double a_s = 0.0;
    double a_u = 0.0;
    double f_desired = 0.0;
    double f_realized = 0.0;
    double voltage = 0.0;
    bool saturated = false;
};

namespace detail {

inline std::array<double, 5> pack(const SimState& s) {
    return {s.z_s, s.z_u, s.v_s, s.v_u, s.x};
}

inline SimState unpack(const std::array<double, 5>& y) {
    return {y[0], y[1], y[2], y[3], y[4]};
}

}  // namespace detail

/// One fixed step of the closed loop. The controller output (voltage or
/// clamp coefficient) is computed once at the step start and held across
/// the RK4 substages; the damper force itself is re-evaluated per substage
/// from the substage state. prev_acc supplies the acceleration feedback of
/// the PD controller (previous step's plant accelerations).
inline std::pair<SimState, StepDiagnostics> step(const SimState& state, double t,
                                                 const SimConfig& cfg,
                                                 const Accelerations& prev_acc) {
    if (!finite(state)) throw DivergenceError(t, cfg.dt);

    const double z_r0 = elevation(cfg.road, t);
    const double f_des = desired_force(cfg.controller, state, prev_acc.a_s, prev_acc.a_u);

    StepDiagnostics diag;
    diag.f_desired = f_des;

    const bool passive = cfg.controller.kind == ControllerKind::Passive;
    double held_voltage = 0.0;  // Explicit/Inversion
    double held_coeff = 0.0;    // Explicit/Clamp

    if (cfg.plant_mode == PlantMode::Explicit) {
        if (passive) {
            diag.f_realized = mr_force(state.v_s - state.v_u, state.z_s - state.z_u, state.x,
                                       0.0, cfg.damper);
        } else {
            const ControlCommand cmd = actuate(f_des, state, cfg.damper, cfg.actuation, cfg.c_max);
            held_voltage = cmd.voltage;
            diag.voltage = cmd.voltage;
            diag.saturated = cmd.saturated;
            diag.f_realized = cmd.f_realized;
            if (cfg.actuation == ActuationMode::Clamp) {
                const double ceiling =
                    cfg.c_max > 0.0 ? cfg.c_max : max_viscous_coefficient(cfg.damper);
                held_coeff = semi_active_clamp(f_des, state.v_s - state.v_u, ceiling);
            }
        }
    }

    const bool pd = cfg.controller.kind == ControllerKind::PdSkygroundhook;

    auto rhs = [&](const std::array<double, 5>& y, double tt) -> std::array<double, 5> {
        const SimState s = detail::unpack(y);
        const double v_rel = s.v_s - s.v_u;
        const double z_r = elevation(cfg.road, tt);
        Accelerations acc;
        double x_rate = 0.0;
        if (cfg.plant_mode == PlantMode::Implicit) {
            // Ideal actuator; the hysteresis state is dormant and frozen.
            if (pd) {
                acc = coupled_accelerations(s, cfg.vehicle, cfg.controller.pd, z_r, 0.0);
            } else {
                acc = passive_accelerations(s, cfg.vehicle, z_r, passive ? 0.0 : f_des);
            }
        } else {
            double f;
            if (passive || cfg.actuation == ActuationMode::Inversion) {
                f = mr_force(v_rel, s.z_s - s.z_u, s.x, held_voltage, cfg.damper);
            } else {
                f = -held_coeff * v_rel;
            }
            acc = passive_accelerations(s, cfg.vehicle, z_r, f);
            x_rate = hysteresis_rate(s.x, v_rel, cfg.damper);
        }
        return {s.v_s, s.v_u, acc.a_s, acc.a_u, x_rate};
    };

    const auto y0 = detail::pack(state);
    const double dt = cfg.dt;
    const auto k1 = rhs(y0, t);

    // Step-start plant accelerations: feedback for the next step.
    diag.a_s = k1[2];
    diag.a_u = k1[3];
    if (cfg.plant_mode == PlantMode::Implicit) {
        if (pd) {
            // Commanded force reconstructed from the resolved accelerations.
            diag.f_desired = pd_skygroundhook_force(state.v_s, diag.a_s, state.v_u, diag.a_u,
                                                    cfg.controller.pd);
            diag.f_realized = diag.f_desired;
        } else {
            diag.f_realized = passive ? 0.0 : f_des;
        }
    }

    std::array<double, 5> tmp, y1;
    for (std::size_t i = 0; i < 5; ++i) tmp[i] = y0[i] + 0.5 * dt * k1[i];
    const auto k2 = rhs(tmp, t + 0.5 * dt);
    for (std::size_t i = 0; i < 5; ++i) tmp[i] = y0[i] + 0.5 * dt * k2[i];
    const auto k3 = rhs(tmp, t + 0.5 * dt);
    for (std::size_t i = 0; i < 5; ++i) tmp[i] = y0[i] + dt * k3[i];
    const auto k4 = rhs(tmp, t + dt);
    for (std::size_t i = 0; i < 5; ++i)
        y1[i] = y0[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

    const SimState next = detail::unpack(y1);
    if (!finite(next)) throw DivergenceError(t, cfg.dt);
    return {next, diag};
}

struct TrajectorySample {
    double t = 0.0;
    SimState state{};
    double a_s = 0.0;
    double a_u = 0.0;
    double f_desired = 0.0;
    double f_realized = 0.0;
    double voltage = 0.0;
    double z_r = 0.0;
};

struct Trajectory {
    VehicleParams vehicle{};
    double beta = 1.0;
    std::vector<TrajectorySample> samples;
};

/// Run the closed loop from cfg.initial over [0, t_end], recording every
/// record_stride-th step. Deterministic for a fixed config.
inline Trajectory simulate(const SimConfig& cfg) {
    validate(cfg);
    const auto n_steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
    const auto stride = static_cast<std::size_t>(cfg.record_stride);

    Trajectory traj;
    traj.vehicle = cfg.vehicle;
    traj.beta = cfg.beta;
    traj.samples.reserve(n_steps / stride + 1);

    SimState state = cfg.initial;
    Accelerations prev_acc{};
    for (std::size_t k = 0; k <= n_steps; ++k) {
        const double t = double(k) * cfg.dt;
        // Diagnostics of the step starting here (also computed at the final
        // state so the last sample carries consistent signals).
        const auto [next, diag] = step(state, t, cfg, prev_acc);
        if (k % stride == 0) {
            traj.samples.push_back({t, state, diag.a_s, diag.a_u, diag.f_desired,
                                    diag.f_realized, diag.voltage, elevation(cfg.road, t)});
        }
        if (k < n_steps) {
            state = next;
            prev_acc = {diag.a_s, diag.a_u};
        }
    }
    return traj;
}

struct Metrics {
    double rms_a_s = 0.0;            // m/s²
    double rms_a_u = 0.0;            // m/s²
    double peak_travel_mm = 0.0;     // max |z_s - z_u|
    double rms_travel_mm = 0.0;
    double peak_tire_load_n = 0.0;   // max |k_t (z_u - z_r)|
    double rms_tire_load_n = 0.0;
    double energy_monitor_max_rise_j = 0.0;
};

/// Lyapunov-style stored energy of one sample.
inline double lyapunov_value(const TrajectorySample& s, const VehicleParams& p, double beta) {
    const double travel = s.state.z_s - s.state.z_u;
    const double tire = s.state.z_u - s.z_r;
    return 0.5 * p.m_s * s.state.v_s * s.state.v_s + 0.5 * p.m_u * s.state.v_u * s.state.v_u +
           0.5 * p.k_s * travel * travel + 0.5 * p.k_t * tire * tire +
           0.5 * beta * s.state.x * s.state.x;
}

/// Largest single-interval rise of the Lyapunov value across consecutive
/// samples whose road elevation is unchanged (unforced segments).
inline double energy_monitor(const Trajectory& traj, const VehicleParams& p, double beta) {
    double max_rise = 0.0;
    for (std::size_t i = 0; i + 1 < traj.samples.size(); ++i) {
        if (traj.samples[i].z_r != traj.samples[i + 1].z_r) continue;
        const double rise = lyapunov_value(traj.samples[i + 1], p, beta) -
                            lyapunov_value(traj.samples[i], p, beta);
        max_rise = std::max(max_rise, rise);
    }
    return max_rise;
}

/// Ride metrics over samples with t >= skip.
inline Metrics compute_metrics(const Trajectory& traj, double skip = 0.0) {
    std::size_t first = 0;
    while (first < traj.samples.size() && traj.samples[first].t < skip) ++first;
    const std::size_t n = traj.samples.size() - first;
    if (n == 0) throw std::invalid_argument("compute_metrics: empty window");

    Metrics m;
    double ss_as = 0.0, ss_au = 0.0, ss_tr = 0.0, ss_tl = 0.0;
    for (std::size_t i = first; i < traj.samples.size(); ++i) {
        const auto& s = traj.samples[i];
        const double travel = s.state.z_s - s.state.z_u;
        const double tire = traj.vehicle.k_t * (s.state.z_u - s.z_r);
        ss_as += s.a_s * s.a_s;
        ss_au += s.a_u * s.a_u;
        ss_tr += travel * travel;
        ss_tl += tire * tire;
        m.peak_travel_mm = std::max(m.peak_travel_mm, std::abs(travel) * 1000.0);
        m.peak_tire_load_n = std::max(m.peak_tire_load_n, std::abs(tire));
    }
    m.rms_a_s = std::sqrt(ss_as / double(n));
    m.rms_a_u = std::sqrt(ss_au / double(n));
    m.rms_travel_mm = std::sqrt(ss_tr / double(n)) * 1000.0;
    m.rms_tire_load_n = std::sqrt(ss_tl / double(n));

    Trajectory window;
    window.vehicle = traj.vehicle;
    window.beta = traj.beta;
    window.samples.assign(traj.samples.begin() + long(first), traj.samples.end());
    m.energy_monitor_max_rise_j = energy_monitor(window, traj.vehicle, traj.beta);
    return m;
}

/// Percent improvement of candidate over baseline; negative = worsening.
inline double percent_reduction(double baseline, double candidate) {
    if (!(baseline > 0.0)) throw std::invalid_argument("percent_reduction: baseline must be > 0");
    return 100.0 * (baseline - candidate) / baseline;
}

struct FrequencyResponsePoint {
    double freq_hz = 0.0;
    double rms_a_s = 0.0;
    double rms_a_u = 0.0;
};

struct ModalPeak {
    double freq_hz = 0.0;
    double value = 0.0;
};

struct FrequencyResponse {
    std::vector<FrequencyResponsePoint> points;
    ModalPeak mode1;  // peak of rms_a_s on the body-mode side of the grid
    ModalPeak mode2;  // peak of rms_a_u on the wheel-hop side
};

/// Stepped-sine frequency response: at each frequency run a pure sine road,
/// discard cycles_settle cycles and report RMS accelerations over
/// cycles_measure cycles. The modal peaks are taken on either side of the
/// geometric midpoint of the two natural frequencies (sprung acceleration
/// for the body mode, unsprung for wheel hop).
inline FrequencyResponse frequency_response(SimConfig cfg, const std::vector<double>& freqs,
                                            double amplitude, int cycles_settle,
                                            int cycles_measure) {
    if (freqs.empty()) throw std::invalid_argument("frequency_response: empty grid");
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        if (!(freqs[i] > 0.0)) throw std::invalid_argument("frequency_response: freqs must be > 0");
        if (i > 0 && freqs[i] <= freqs[i - 1])
            throw std::invalid_argument("frequency_response: freqs must be ascending");
    }
    if (cycles_settle < 0 || cycles_measure < 1)
        throw std::invalid_argument("frequency_response: bad cycle counts");

    FrequencyResponse out;
    out.points.reserve(freqs.size());
    for (double f : freqs) {
        const double t_end = double(cycles_settle + cycles_measure) / f;
        cfg.road = SineSweepRoad{f, f, t_end, amplitude};
        cfg.t_end = t_end;
        // Sample finely enough for the waveform but no faster than 1 kHz.
        const double t_sample = std::min(1e-3, 1.0 / (200.0 * f));
        cfg.record_stride = std::max(1, int(std::floor(t_sample / cfg.dt)));
        cfg.metrics_skip = 0.0;
        const Trajectory traj = simulate(cfg);
        const Metrics m = compute_metrics(traj, double(cycles_settle) / f);
        out.points.push_back({f, m.rms_a_s, m.rms_a_u});
    }

    const auto wn = natural_frequencies(cfg.vehicle);
    const double split = std::sqrt(wn.omega1 * wn.omega2) / (2.0 * M_PI);
    for (const auto& p : out.points) {
        if (p.freq_hz <= split) {
            if (p.rms_a_s > out.mode1.value) out.mode1 = {p.freq_hz, p.rms_a_s};
        } else {
            if (p.rms_a_u > out.mode2.value) out.mode2 = {p.freq_hz, p.rms_a_u};
        }
    }
    return out;
}

}  // namespace mrsusp
