#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "mrsusp/damper.hpp"
#include "mrsusp/model.hpp"

namespace mrsusp {

enum class ControllerKind { Passive, Skyhook, Groundhook, Skygroundhook, PdSkygroundhook };

/// A control strategy plus its gains. Only the fields relevant to `kind`
/// are read. Factory defaults are the tuned gains per strategy.
struct ControllerSpec {
    ControllerKind kind = ControllerKind::Passive;
    double c_sky = 0.0;     // N·s/m (Skyhook / Skygroundhook)
    double c_gr = 0.0;      // N·s/m (Groundhook / Skygroundhook)
    double c_passive = 0.0; // N·s/m (Skygroundhook off-branch)
    PdGains pd{};

    static ControllerSpec passive() { return {}; }
    static ControllerSpec skyhook(double c_sky = 17000.0) {
        return {ControllerKind::Skyhook, c_sky, 0.0, 0.0, {}};
    }
    static ControllerSpec groundhook(double c_gr = 4000.0) {
        return {ControllerKind::Groundhook, 0.0, c_gr, 0.0, {}};
    }
    static ControllerSpec skygroundhook(double c_sky = 25500.0, double c_gr = 1150.0,
                                        double c_passive = 0.0) {
        return {ControllerKind::Skygroundhook, c_sky, c_gr, c_passive, {}};
    }
    static ControllerSpec pd_skygroundhook(PdGains g = {}) {
        return {ControllerKind::PdSkygroundhook, 0.0, 0.0, 0.0, g};
    }
};

inline const char* name(ControllerKind k) {
    switch (k) {
        case ControllerKind::Passive: return "passive";
        case ControllerKind::Skyhook: return "skyhook";
        case ControllerKind::Groundhook: return "groundhook";
        case ControllerKind::Skygroundhook: return "skygroundhook";
        case ControllerKind::PdSkygroundhook: return "pd_skygroundhook";
    }
    return "?";
}

inline void validate(const ControllerSpec& c, const std::string& prefix = "controller") {
    auto nonneg = [&](double v, const char* name) {
        if (v < 0.0 || !std::isfinite(v))
            throw std::invalid_argument(prefix + "." + name + ": must be finite and >= 0");
    };
    nonneg(c.c_sky, "c_sky");
    nonneg(c.c_gr, "c_gr");
    nonneg(c.c_passive, "c_passive");
    validate(c.pd, prefix + ".pd");
}

/// On-off skyhook: active while body and suspension velocities are in phase.
inline double skyhook_force(double v_s, double v_rel, double c_sky) {
    return (v_s * v_rel > 0.0) ? -c_sky * v_rel : 0.0;
}

/// On-off groundhook: active while wheel and suspension velocities oppose.
inline double groundhook_force(double v_u, double v_rel, double c_gr) {
    return (v_u * v_rel < 0.0) ? -c_gr * v_rel : 0.0;
}

/// Hybrid skygroundhook: absolute-velocity damping of both masses while the
/// skyhook condition holds, plain passive damping otherwise.
inline double skygroundhook_force(double v_s, double v_u, double v_rel, double c_sky, double c_gr,
                                  double c_passive) {
    return (v_s * v_rel > 0.0) ? -c_sky * v_s - c_gr * v_u : -c_passive * v_rel;
}

/// PD-Skygroundhook command. Accelerations are whatever feedback the caller
/// has (previous-step plant accelerations in the realizable pipeline).
inline double pd_skygroundhook_force(double v_s, double a_s, double v_u, double a_u,
                                     const PdGains& g) {
    return -g.p_sky * v_s - g.d_sky * a_s - g.p_gr * v_u - g.d_gr * a_u;
}

/// Desired force for one control step.
inline double desired_force(const ControllerSpec& c, const SimState& s, double prev_a_s,
                            double prev_a_u) {
    const double v_rel = s.v_s - s.v_u;
    switch (c.kind) {
        case ControllerKind::Passive: return 0.0;
        case ControllerKind::Skyhook: return skyhook_force(s.v_s, v_rel, c.c_sky);
        case ControllerKind::Groundhook: return groundhook_force(s.v_u, v_rel, c.c_gr);
        case ControllerKind::Skygroundhook:
            return skygroundhook_force(s.v_s, s.v_u, v_rel, c.c_sky, c.c_gr, c.c_passive);
        case ControllerKind::PdSkygroundhook:
            return pd_skygroundhook_force(s.v_s, prev_a_s, s.v_u, prev_a_u, c.pd);
    }
    return 0.0;
}

enum class ActuationMode { Inversion, Clamp };

/// Per-step actuation record. f_realized, not f_desired, enters the plant.
struct ControlCommand {
    double f_desired = 0.0;  // N
    double voltage = 0.0;    // V, in [0, v_max]
    bool saturated = false;
    double f_realized = 0.0; // N, what the damper actually produces
};

/// Map a desired force onto the damper.
/// Inversion: voltage from the inverse model, force re-evaluated from it.
/// Clamp: ideal dissipative element -C v_rel with C = semi_active_clamp;
/// the voltage is reported as the inversion of the realized force.
inline ControlCommand actuate(double f_desired, const SimState& s, const BoucWenParams& bw,
                              ActuationMode mode, double c_max = 0.0) {
    if (!finite(s)) throw std::invalid_argument("actuate: non-finite state");
    const double v_rel = s.v_s - s.v_u;
    const double z_rel = s.z_s - s.z_u;
    ControlCommand cmd;
    cmd.f_desired = f_desired;
    if (mode == ActuationMode::Inversion) {
        const auto v = required_voltage(f_desired, v_rel, s.x, bw);
        cmd.voltage = v.voltage;
        cmd.saturated = v.saturated;
        cmd.f_realized = mr_force(v_rel, z_rel, s.x, v.voltage, bw);
    } else {
        if (c_max <= 0.0) c_max = max_viscous_coefficient(bw);
        const double coeff = semi_active_clamp(f_desired, v_rel, c_max);
        cmd.f_realized = -coeff * v_rel;
        const double raw = (std::abs(v_rel) > kDenominatorEps) ? -f_desired / v_rel : 0.0;
        cmd.saturated = std::abs(v_rel) <= kDenominatorEps || raw < 0.0 || raw > c_max;
        cmd.voltage = required_voltage(cmd.f_realized, v_rel, s.x, bw).voltage;
    }
    return cmd;
}

}  // namespace mrsusp
