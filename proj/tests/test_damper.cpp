#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "mrsusp/damper.hpp"
#include "mrsusp/integrator.hpp"

using namespace mrsusp;
using Catch::Approx;

TEST_CASE("mr_force is zero at rest for any voltage") {
    const BoucWenParams bw;
    for (double v : {0.0, 1.0, 2.5, 5.0}) CHECK(mr_force(0.0, 0.0, 0.0, v, bw) == 0.0);
}

TEST_CASE("mr_force worked examples") {
    const BoucWenParams bw;
    // -(2100 + 7000) * 0.2 + (1400 + 139000) * 1e-4
    CHECK(mr_force(0.2, 0.0, 1e-4, 2.0, bw) == Approx(-1805.96).epsilon(1e-12));
    CHECK(mr_force(0.1, 0.0, 0.0, 0.0, bw) == Approx(-210.0).epsilon(1e-12));
}

TEST_CASE("mr_force rejects out-of-range voltage") {
    const BoucWenParams bw;
    CHECK_THROWS_AS(mr_force(0.1, 0.0, 0.0, -0.1, bw), std::invalid_argument);
    CHECK_THROWS_AS(mr_force(0.1, 0.0, 0.0, 5.1, bw), std::invalid_argument);
}

TEST_CASE("mr_force is strictly decreasing in voltage for positive velocity") {
    const BoucWenParams bw;
    double prev = mr_force(0.3, 0.0, 0.0, 0.0, bw);
    for (double v = 0.25; v <= 5.0; v += 0.25) {
        const double f = mr_force(0.3, 0.0, 0.0, v, bw);
        CHECK(f < prev);
        prev = f;
    }
}

TEST_CASE("hysteresis_rate worked examples") {
    const BoucWenParams bw;
    CHECK(hysteresis_rate(0.0, 1.0, bw) == Approx(4.0).epsilon(1e-12));
    CHECK(hysteresis_rate(0.3, 0.0, bw) == 0.0);
    // Equilibrium for constant positive velocity: x = gamma / (q + b).
    const double x_eq = bw.gamma / (bw.q + bw.b);
    CHECK(hysteresis_rate(x_eq, 1.0, bw) == Approx(0.0).margin(1e-12));
}

TEST_CASE("required_voltage vanishing numerator gives zero voltage") {
    const BoucWenParams bw;
    const double v_rel = 0.4, x = 2e-5;
    const double f_d = -bw.c_oa * v_rel + bw.alpha_a * x;
    const auto cmd = required_voltage(f_d, v_rel, x, bw);
    CHECK(cmd.voltage == Approx(0.0).margin(1e-12));
    CHECK_FALSE(cmd.saturated);
}

TEST_CASE("required_voltage round trip of the mr_force example") {
    const BoucWenParams bw;
    const auto cmd = required_voltage(-1805.96, 0.2, 1e-4, bw);
    CHECK(cmd.voltage == Approx(2.0).epsilon(1e-9));
    CHECK_FALSE(cmd.saturated);
}

TEST_CASE("required_voltage clamps at v_max") {
    const BoucWenParams bw;
    // (-420 + 5000) / 700 = 6.543 -> clamped
    const auto cmd = required_voltage(-5000.0, 0.2, 0.0, bw);
    CHECK(cmd.voltage == 5.0);
    CHECK(cmd.saturated);
}

TEST_CASE("required_voltage denominator guard") {
    const BoucWenParams bw;
    const auto cmd = required_voltage(-100.0, 0.0, 0.0, bw);
    CHECK(cmd.voltage == 0.0);
    CHECK(cmd.saturated);
}

TEST_CASE("inverse model round trip over random inputs") {
    const BoucWenParams bw;
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> uv(-2.0, 2.0);
    std::uniform_real_distribution<double> ux(-1e-3, 1e-3);
    std::uniform_real_distribution<double> uV(0.0, bw.v_max);
    int tested = 0;
    for (int i = 0; i < 20000 && tested < 10000; ++i) {
        const double v_rel = uv(rng), x = ux(rng), V = uV(rng);
        if (std::abs(bw.c_ob * v_rel - bw.alpha_b * x) <= 10.0 * kDenominatorEps) continue;
        const double f = mr_force(v_rel, 0.0, x, V, bw);
        const auto cmd = required_voltage(f, v_rel, x, bw);
        REQUIRE(std::abs(cmd.voltage - V) <= 1e-9 * std::max(1.0, V));
        ++tested;
    }
    CHECK(tested == 10000);
}

TEST_CASE("semi_active_clamp worked examples") {
    CHECK(semi_active_clamp(-2000.0, 0.5, 19600.0) == Approx(4000.0).epsilon(1e-12));
    CHECK(semi_active_clamp(2000.0, 0.5, 19600.0) == 0.0);
    CHECK(semi_active_clamp(-20000.0, 0.5, 19600.0) == 19600.0);
    CHECK(semi_active_clamp(-2000.0, 0.0, 19600.0) == 0.0);
}

TEST_CASE("clamped path is dissipative for arbitrary inputs") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> uf(-30000.0, 30000.0);
    std::uniform_real_distribution<double> uv(-2.0, 2.0);
    for (int i = 0; i < 10000; ++i) {
        const double f_d = uf(rng), v_rel = uv(rng);
        const double c = semi_active_clamp(f_d, v_rel, 19600.0);
        CHECK(-c * v_rel * v_rel <= 0.0);
    }
}

TEST_CASE("default clamp ceiling is the viscous span of the damper") {
    CHECK(max_viscous_coefficient({}) == Approx(19600.0).epsilon(1e-12));
}

TEST_CASE("hysteresis state stays bounded under band-limited velocity") {
    const BoucWenParams bw;
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> uph(0.0, 2.0 * M_PI);
    const double bound = 10.0 * bw.gamma / (bw.q + bw.b);
    for (int trial = 0; trial < 20; ++trial) {
        // Random 3-tone velocity signal, |v| <= 1 m/s.
        double ph1 = uph(rng), ph2 = uph(rng), ph3 = uph(rng);
        auto v = [&](double t) {
            return (std::sin(2.0 * M_PI * 1.3 * t + ph1) + std::sin(2.0 * M_PI * 4.7 * t + ph2) +
                    std::sin(2.0 * M_PI * 11.0 * t + ph3)) /
                   3.0;
        };
        const double dt = 1e-5;  // resolves the fastest relaxation rate
        std::array<double, 1> y{0.0};
        double max_x = 0.0;
        auto rhs = [&](const std::array<double, 1>& s, double t) -> std::array<double, 1> {
            return {hysteresis_rate(s[0], v(t), bw)};
        };
        for (int k = 0; k < 200000; ++k) {
            y = rk4_step(rhs, y, double(k) * dt, dt);
            max_x = std::max(max_x, std::abs(y[0]));
        }
        CHECK(max_x <= bound);
    }
}

TEST_CASE("damper validation names the offending field") {
    BoucWenParams bw;
    bw.gamma = 0.0;
    CHECK_THROWS_WITH(validate(bw), Catch::Matchers::ContainsSubstring("gamma"));
    bw = {};
    bw.v_max = -1.0;
    CHECK_THROWS_WITH(validate(bw), Catch::Matchers::ContainsSubstring("v_max"));
}
