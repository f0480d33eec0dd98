#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mrsusp {

/// Simplified Bouc-Wen MR damper parameters. Defaults are the identified
/// damper set used by the benchmark suite.
struct BoucWenParams {
    double c_oa = 2100.0;     // base viscous coefficient (N·s/m)
    double c_ob = 3500.0;     // viscous slope wrt. voltage (N·s/(m·V))
    double alpha_a = 1400.0;  // base elastic term (N)
    double alpha_b = 69500.0; // elastic slope wrt. voltage (N/V)
    double q = 48000.0;       // hysteresis shape coefficient (1/m)
    double b = 48000.0;       // hysteresis shape coefficient (1/m)
    double gamma = 4.0;       // hysteresis drive coefficient
    double k_0 = 0.0;         // stiffness term (N/m); absent from the identified set
    double v_max = 5.0;       // maximum coil voltage (V)
};

/// Guard on the voltage-inversion denominator (units N/V). Typical
/// denominators are 1e2..1e3; below this the inversion is undefined.
inline constexpr double kDenominatorEps = 1e-6;

inline void validate(const BoucWenParams& bw, const std::string& prefix = "damper") {
    auto nonneg = [&](double v, const char* name) {
        if (v < 0.0 || !std::isfinite(v))
            throw std::invalid_argument(prefix + "." + name + ": must be finite and >= 0");
    };
    nonneg(bw.c_oa, "c_oa");
    nonneg(bw.c_ob, "c_ob");
    nonneg(bw.alpha_a, "alpha_a");
    nonneg(bw.alpha_b, "alpha_b");
    nonneg(bw.q, "q");
    nonneg(bw.b, "b");
    nonneg(bw.k_0, "k_0");
    if (!(bw.gamma > 0.0) || !std::isfinite(bw.gamma))
        throw std::invalid_argument(prefix + ".gamma: must be finite and > 0");
    if (!(bw.v_max > 0.0) || !std::isfinite(bw.v_max))
        throw std::invalid_argument(prefix + ".v_max: must be finite and > 0");
}

/// Physically attainable viscous ceiling c_oa + c_ob * v_max.
inline double max_viscous_coefficient(const BoucWenParams& bw) {
    return bw.c_oa + bw.c_ob * bw.v_max;
}

/// Damper force at a held voltage:
///   F = -(c_oa + c_ob V) v_rel - k_0 z_rel + (alpha_a + alpha_b V) x
/// Voltage must already be inside [0, v_max]; clamping is the caller's job.
inline double mr_force(double v_rel, double z_rel, double x, double voltage,
                       const BoucWenParams& bw) {
    if (!std::isfinite(v_rel) || !std::isfinite(z_rel) || !std::isfinite(x) ||
        !std::isfinite(voltage))
        throw std::invalid_argument("mr_force: non-finite input");
    if (voltage < 0.0 || voltage > bw.v_max)
        throw std::invalid_argument("mr_force: voltage outside [0, v_max]");
    return -(bw.c_oa + bw.c_ob * voltage) * v_rel - bw.k_0 * z_rel +
           (bw.alpha_a + bw.alpha_b * voltage) * x;
}

/// Evolution rate of the hysteresis variable:
///   dx/dt = -q |v_rel| x - b v_rel |x| + gamma v_rel
inline double hysteresis_rate(double x, double v_rel, const BoucWenParams& bw) {
    if (!std::isfinite(x) || !std::isfinite(v_rel))
        throw std::invalid_argument("hysteresis_rate: non-finite input");
    return -bw.q * std::abs(v_rel) * x - bw.b * v_rel * std::abs(x) + bw.gamma * v_rel;
}

struct VoltageCommand {
    double voltage = 0.0;   // in [0, v_max]
    bool saturated = false; // clamped, or the denominator guard fired
};

/// Inverse damper map: voltage that would make the damper produce f_d.
///   V = (-c_oa v_rel + alpha_a x - f_d) / (c_ob v_rel - alpha_b x)
/// Clamped to [0, v_max]. Near-zero denominators (no voltage authority)
/// return 0 V with the saturated flag set.
inline VoltageCommand required_voltage(double f_d, double v_rel, double x,
                                       const BoucWenParams& bw) {
    if (!std::isfinite(f_d) || !std::isfinite(v_rel) || !std::isfinite(x))
        throw std::invalid_argument("required_voltage: non-finite input");
    const double den = bw.c_ob * v_rel - bw.alpha_b * x;
    if (std::abs(den) < kDenominatorEps) return {0.0, true};
    const double raw = (-bw.c_oa * v_rel + bw.alpha_a * x - f_d) / den;
    if (raw < 0.0) return {0.0, true};
    if (raw > bw.v_max) return {bw.v_max, true};
    return {raw, false};
}

/// Effective viscous coefficient realizing f_d as closely as a purely
/// dissipative element allows: C = clamp(-f_d / v_rel, 0, c_max).
/// The realized force is then -C * v_rel. Zero relative velocity means
/// zero authority.
inline double semi_active_clamp(double f_d, double v_rel, double c_max) {
    if (!std::isfinite(f_d) || !std::isfinite(v_rel))
        throw std::invalid_argument("semi_active_clamp: non-finite input");
    if (!(c_max > 0.0)) throw std::invalid_argument("semi_active_clamp: c_max must be > 0");
    if (std::abs(v_rel) <= kDenominatorEps) return 0.0;
    return std::clamp(-f_d / v_rel, 0.0, c_max);
}

}  // namespace mrsusp
