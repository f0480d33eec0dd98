#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace mrsusp {

/// Quarter-car plant parameters. Defaults are the tuned passenger-car set
/// used throughout the benchmark suite.
struct VehicleParams {
    double m_s = 320.0;     // sprung mass (kg)
    double m_u = 45.0;      // unsprung mass (kg)
    double c_s = 1500.0;    // passive damping coefficient (N·s/m)
    double k_s = 22000.0;   // suspension spring constant (N/m)
    double k_t = 192000.0;  // tire stiffness (N/m)
};

/// Full simulation state: two displacements, two velocities, and the
/// damper's internal hysteresis variable.
struct SimState {
    double z_s = 0.0;  // sprung displacement (m)
    double z_u = 0.0;  // unsprung displacement (m)
    double v_s = 0.0;  // sprung velocity (m/s)
    double v_u = 0.0;  // unsprung velocity (m/s)
    double x = 0.0;    // hysteresis variable (dimensionless)
};

/// PD-Skygroundhook gains. Defaults are the tuned values.
struct PdGains {
    double p_sky = 7400.0;  // proportional sky gain (N·s/m)
    double d_sky = 5600.0;  // derivative sky gain (N·s²/m)
    double p_gr = 440.0;    // proportional ground gain (N·s/m)
    double d_gr = 50.0;     // derivative ground gain (N·s²/m)
};

struct Accelerations {
    double a_s = 0.0;  // sprung (m/s²)
    double a_u = 0.0;  // unsprung (m/s²)
};

inline bool finite(const SimState& s) {
    return std::isfinite(s.z_s) && std::isfinite(s.z_u) && std::isfinite(s.v_s) &&
           std::isfinite(s.v_u) && std::isfinite(s.x);
}

inline void validate(const VehicleParams& p, const std::string& prefix = "vehicle") {
    auto check = [&](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument(prefix + "." + name + ": must be finite and > 0");
    };
    check(p.m_s, "m_s");
    check(p.m_u, "m_u");
    check(p.c_s, "c_s");
    check(p.k_s, "k_s");
    check(p.k_t, "k_t");
}

inline void validate(const PdGains& g, const std::string& prefix = "pd") {
    auto check = [&](double v, const char* name) {
        if (v < 0.0 || !std::isfinite(v))
            throw std::invalid_argument(prefix + "." + name + ": must be finite and >= 0");
    };
    check(g.p_sky, "p_sky");
    check(g.d_sky, "d_sky");
    check(g.p_gr, "p_gr");
    check(g.d_gr, "d_gr");
}

/// Suspension force (spring + passive damper) acting on the sprung mass.
inline double suspension_force(const SimState& s, const VehicleParams& p) {
    return -p.k_s * (s.z_s - s.z_u) - p.c_s * (s.v_s - s.v_u);
}

/// Plant accelerations with the damper force f_mr applied internally:
/// +f_mr on the sprung mass, -f_mr (reaction) on the unsprung mass.
inline Accelerations passive_accelerations(const SimState& s, const VehicleParams& p, double z_r,
                                           double f_mr) {
    if (!finite(s) || !std::isfinite(z_r) || !std::isfinite(f_mr))
        throw std::invalid_argument("passive_accelerations: non-finite input");
    const double f_s = suspension_force(s, p);
    return {(f_s + f_mr) / p.m_s,
            (-f_s - p.k_t * (s.z_u - z_r) - f_mr) / p.m_u};
}

/// Accelerations of the ideal-actuator closed loop: the PD derivative gains
/// enter the mass matrix and the proportional gains the right-hand side,
/// so the acceleration feedback is resolved implicitly.
///   A = [[m_s + d_sky, -d_gr], [-d_sky, m_u + d_gr]]
///   B = [f_s + f_d - p_sky v_s + p_gr v_u,
///        k_t (z_r - z_u) - f_s - f_d + p_sky v_s - p_gr v_u]
inline Accelerations coupled_accelerations(const SimState& s, const VehicleParams& p,
                                           const PdGains& g, double z_r, double f_d) {
    if (!finite(s) || !std::isfinite(z_r) || !std::isfinite(f_d))
        throw std::invalid_argument("coupled_accelerations: non-finite input");
    const double a11 = p.m_s + g.d_sky;
    const double a12 = -g.d_gr;
    const double a21 = -g.d_sky;
    const double a22 = p.m_u + g.d_gr;
    const double det = a11 * a22 - a12 * a21;
    if (std::abs(det) < 1e-12 * (p.m_s * p.m_u))
        throw std::invalid_argument("coupled_accelerations: singular mass matrix");
    const double f_s = suspension_force(s, p);
    const double b1 = f_s + f_d - g.p_sky * s.v_s + g.p_gr * s.v_u;
    const double b2 = p.k_t * (z_r - s.z_u) - f_s - f_d + g.p_sky * s.v_s - g.p_gr * s.v_u;
    return {(a22 * b1 - a12 * b2) / det, (a11 * b2 - a21 * b1) / det};
}

struct NaturalFrequencies {
    double omega1 = 0.0;  // body mode (rad/s)
    double omega2 = 0.0;  // wheel-hop mode (rad/s)
};

/// Undamped natural frequencies from the characteristic quartic
///   w^4 m_s m_u - w^2 (k_s m_u + k_s m_s + k_t m_s) + k_s k_t = 0,
/// solved as a quadratic in w^2. Returned ascending.
inline NaturalFrequencies natural_frequencies(const VehicleParams& p) {
    if (!(p.m_s > 0.0) || !(p.m_u > 0.0) || p.k_s < 0.0 || p.k_t < 0.0 ||
        !std::isfinite(p.m_s + p.m_u + p.k_s + p.k_t))
        throw std::invalid_argument("natural_frequencies: invalid parameters");
    const double a = p.m_s * p.m_u;
    const double b = p.k_s * p.m_u + p.k_s * p.m_s + p.k_t * p.m_s;
    const double c = p.k_s * p.k_t;
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) throw std::invalid_argument("natural_frequencies: negative discriminant");
    const double root = std::sqrt(disc);
    const double w2_hi = (b + root) / (2.0 * a);
    const double w2_lo = (b - root) / (2.0 * a);
    return {std::sqrt(std::max(w2_lo, 0.0)), std::sqrt(w2_hi)};
}

}  // namespace mrsusp
