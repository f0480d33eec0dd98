#pragma once

#include <array>
#include <cstddef>

namespace mrsusp {

/// One classical 4th-order Runge-Kutta step for dy/dt = f(y, t).
/// F must be callable as std::array<double, N> f(const std::array<double, N>&, double).
template <std::size_t N, typename F>
std::array<double, N> rk4_step(const F& f, const std::array<double, N>& y, double t, double dt) {
    const auto k1 = f(y, t);

    std::array<double, N> tmp;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
    const auto k2 = f(tmp, t + 0.5 * dt);

    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
    const auto k3 = f(tmp, t + 0.5 * dt);

    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + dt * k3[i];
    const auto k4 = f(tmp, t + dt);

    std::array<double, N> out;
    for (std::size_t i = 0; i < N; ++i)
        out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

}  // namespace mrsusp
