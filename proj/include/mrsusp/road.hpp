#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace mrsusp {

struct RoadFormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Half-cosine bump elevation, zero outside [t1, t2].
inline double bump_elevation(double t, double h_b, double t1, double t2) {
    if (!(t2 > t1)) throw std::invalid_argument("bump: t2 must be > t1");
    if (h_b < 0.0) throw std::invalid_argument("bump: h_b must be >= 0");
    if (t < t1 || t > t2) return 0.0;
    return 0.5 * h_b * (1.0 - std::cos(2.0 * M_PI * (t - t1) / (t2 - t1)));
}

/// Linear-chirp phase in cycles: f0 t + (f1 - f0) t^2 / (2 duration).
inline double chirp_phase(double t, double f0, double f1, double duration) {
    return f0 * t + (f1 - f0) * t * t / (2.0 * duration);
}

/// Linear sine sweep, zero outside [0, duration].
inline double sine_sweep_elevation(double t, double f0, double f1, double duration,
                                   double amplitude) {
    if (!(f0 > 0.0) || !(f1 > 0.0)) throw std::invalid_argument("sine_sweep: f0, f1 must be > 0");
    if (!(duration > 0.0)) throw std::invalid_argument("sine_sweep: duration must be > 0");
    if (t < 0.0 || t > duration) return 0.0;
    return amplitude * std::sin(2.0 * M_PI * chirp_phase(t, f0, f1, duration));
}

struct FlatRoad {};

struct BumpRoad {
    double h_b = 0.05; // bump height (m)
    double t1 = 1.0;   // bump start (s)
    double t2 = 1.65;  // bump end (s); ~1.5 Hz fundamental, near the body mode
};

struct SineSweepRoad {
    double f0 = 0.5;        // Hz
    double f1 = 15.0;       // Hz
    double duration = 120.0; // s
    double amplitude = 0.01; // m
};

/// Uniformly sampled elevation; queries interpolate linearly and hold the
/// end values outside the sampled range.
struct TabulatedRoad {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<double> z;

    double at(double t) const {
        if (z.empty()) throw RoadFormatError("tabulated road: empty");
        if (z.size() == 1 || dt <= 0.0) return z.front();
        const double s = (t - t0) / dt;
        if (s <= 0.0) return z.front();
        if (s >= double(z.size() - 1)) return z.back();
        const auto i = static_cast<std::size_t>(s);
        const double w = s - double(i);
        return z[i] + w * (z[i + 1] - z[i]);
    }
};

using RoadProfile = std::variant<FlatRoad, BumpRoad, SineSweepRoad, TabulatedRoad>;

inline double elevation(const RoadProfile& road, double t) {
    return std::visit(
        [t](const auto& r) -> double {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, FlatRoad>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, BumpRoad>) {
                return bump_elevation(t, r.h_b, r.t1, r.t2);
            } else if constexpr (std::is_same_v<T, SineSweepRoad>) {
                return sine_sweep_elevation(t, r.f0, r.f1, r.duration, r.amplitude);
            } else {
                return r.at(t);
            }
        },
        road);
}

/// Deterministic standard-normal stream: mt19937_64 bits mapped to (0,1]
/// doubles and Box-Muller. std::normal_distribution is implementation-
/// defined, so it would break the cross-platform reproducibility contract.
class GaussianStream {
  public:
    explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    // (0, 1]: keeps log() finite.
    double uniform01() {
        const std::uint64_t bits = rng_() >> 11;
        return (double(bits) + 1.0) * 0x1.0p-53;
    }

    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Brownian road built from caller-supplied draws (test hook):
///   z_r(k dt) = dt * sum_{i=1..k} scale * g_i,  z_r(0) = 0.
inline TabulatedRoad brownian_road_from_draws(double dt, std::span<const double> draws,
                                              double scale = 0.05) {
    if (!(dt > 0.0)) throw std::invalid_argument("brownian_road: dt must be > 0");
    TabulatedRoad road;
    road.dt = dt;
    road.z.resize(draws.size() + 1);
    road.z[0] = 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < draws.size(); ++i) {
        sum += scale * draws[i];
        road.z[i + 1] = dt * sum;
    }
    return road;
}

/// Seeded Brownian road of n_steps increments.
inline TabulatedRoad brownian_road(double dt, int n_steps, std::uint64_t seed,
                                   double scale = 0.05) {
    if (n_steps < 1) throw std::invalid_argument("brownian_road: n_steps must be >= 1");
    GaussianStream g(seed);
    std::vector<double> draws(static_cast<std::size_t>(n_steps));
    for (auto& d : draws) d = g.next();
    return brownian_road_from_draws(dt, draws, scale);
}

/// Load a two-column CSV (t, z_r); a single non-numeric header line is
/// allowed. Time must start anywhere but increase uniformly.
inline TabulatedRoad load_road_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw RoadFormatError("road csv: cannot open " + path);
    TabulatedRoad road;
    std::vector<double> times;
    std::vector<int> linenos;
    std::string line;
    int lineno = 0;
    bool header_allowed = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double t = 0.0, z = 0.0;
        if (!(ss >> t >> z)) {
            if (header_allowed) {  // one leading header line
                header_allowed = false;
                continue;
            }
            throw RoadFormatError("road csv: non-numeric row at line " + std::to_string(lineno) +
                                  " of " + path);
        }
        header_allowed = false;
        if (!std::isfinite(t) || !std::isfinite(z))
            throw RoadFormatError("road csv: non-finite value at line " + std::to_string(lineno) +
                                  " of " + path);
        times.push_back(t);
        linenos.push_back(lineno);
        road.z.push_back(z);
    }
    if (road.z.empty()) throw RoadFormatError("road csv: no samples in " + path);
    road.t0 = times.front();
    if (times.size() > 1) {
        road.dt = times[1] - times[0];
        if (!(road.dt > 0.0))
            throw RoadFormatError("road csv: time not increasing at line " +
                                  std::to_string(linenos[1]) + " of " + path);
        for (std::size_t i = 2; i < times.size(); ++i) {
            const double expect = road.t0 + double(i) * road.dt;
            if (std::abs(times[i] - expect) > 1e-9 * std::max(1.0, std::abs(expect)))
                throw RoadFormatError("road csv: non-uniform time at line " +
                                      std::to_string(linenos[i]) + " of " + path);
        }
    }
    return road;
}

}  // namespace mrsusp
