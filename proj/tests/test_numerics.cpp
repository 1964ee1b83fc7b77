#include "hardbench/errors.hpp"
#include "hardbench/numerics.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace hardbench;

namespace {

// Underdamped unit-step response from rest, written out independently.
double step_oracle(double z, double w, double t) {
    const double wd = w * std::sqrt(1.0 - z * z);
    return 1.0 - std::exp(-z * w * t) * (std::cos(wd * t) + z / std::sqrt(1.0 - z * z) * std::sin(wd * t));
}

double fd_component(Path p, std::size_t i, PathFunctional fn, double step) {
    auto eval = [&](const Path& q) {
        switch (fn) {
            case PathFunctional::Length: return path_length(q);
            case PathFunctional::Energy: return path_energy(q);
            default: return path_length_residual(q, 2.3504);
        }
    };
    const double y0 = p.interior[i];
    p.interior[i] = y0 + step;
    const double up = eval(p);
    p.interior[i] = y0 - step;
    const double down = eval(p);
    return (up - down) / (2.0 * step);
}

}  // namespace

TEST_SUITE("step response") {
    TEST_CASE("table times") {
        const std::vector<double> t{0, 1, 10};
        const auto s = rk4_step_response(0.25, 2.0, t);
        CHECK(s.y[0] == 0.0);
        CHECK(std::abs(s.y[1] - 1.0706) <= 2e-3);
        CHECK(std::abs(s.y[2] - 0.9933) <= 1e-3);
    }

    TEST_CASE("rk4 matches the closed form on a 5x5 grid") {
        std::vector<double> t(11);
        for (int i = 0; i <= 10; ++i) t[i] = i;
        double worst = 0.0;
        for (double z : {0.1, 0.3, 0.5, 0.7, 0.9})
            for (double w : {0.5, 1.375, 2.25, 3.125, 4.0}) {
                const auto s = rk4_step_response(z, w, t, 0.01);
                for (int i = 0; i <= 10; ++i) worst = std::max(worst, std::abs(s.y[i] - step_oracle(z, w, t[i])));
            }
        CHECK(worst <= 1e-6);
    }

    TEST_CASE("analytic response agrees with the independent oracle") {
        for (double t : {0.0, 0.5, 3.0, 7.25})
            CHECK(analytic_step_response(0.25, 2.0, t) == doctest::Approx(step_oracle(0.25, 2.0, t)).epsilon(1e-14));
        CHECK(std::abs(analytic_step_response(0.25, 2.0, 1.0) - 1.0706) <= 1e-3);
        CHECK(std::abs(analytic_step_response(0.25, 2.0, 10.0) - 0.9933) <= 1e-3);
    }

    TEST_CASE("sample times snap to the step grid") {
        const std::vector<double> t{1.004};
        CHECK(rk4_step_response(0.25, 2.0, t, 0.01).y[0] == rk4_step_response(0.25, 2.0, std::vector{1.0}, 0.01).y[0]);
    }

    TEST_CASE("contract violations") {
        const std::vector<double> t{0, 1};
        CHECK_THROWS_AS(rk4_step_response(0.0, 2.0, t), ContractViolation);
        CHECK_THROWS_AS(rk4_step_response(0.25, -1.0, t), ContractViolation);
        CHECK_THROWS_AS(rk4_step_response(0.25, 2.0, t, 0.0), ContractViolation);
        CHECK_THROWS_AS(rk4_step_response(0.25, 2.0, std::vector{-1.0}), ContractViolation);
        CHECK_THROWS_AS(analytic_step_response(1.0, 2.0, 1.0), ContractViolation);
    }
}

TEST_SUITE("oscillatory quadrature") {
    TEST_CASE("undamped integral is pi/2") {
        const auto r = oscillatory_integral(0.0, 1, 1e-8);
        CHECK(std::abs(r.value - std::numbers::pi / 2) <= 1e-8);
        CHECK(r.est_error >= 0.0);
        CHECK(r.segments_used > 0);
    }

    TEST_CASE("damped values") {
        // sin(kx) e^{-bx} / x integrates to atan(k / b).
        CHECK(std::abs(oscillatory_integral(1.0, 3, 1e-8).value - std::atan(3.0)) <= 1e-8);
        CHECK(std::abs(oscillatory_integral(0.25, 3, 1e-8).value - std::atan(12.0)) <= 1e-8);
        CHECK(std::abs(oscillatory_integral(0.25, 1, 1e-8).value - 1.3258176636680323) <= 1e-8);
        CHECK(std::abs(oscillatory_integral(1.0, 2, 1e-8).value - std::atan(2.0)) <= 1e-8);
        CHECK(std::abs(oscillatory_integral(1.0, 1, 1e-8).value - std::numbers::pi / 4) <= 1e-8);
    }

    TEST_CASE("grid against the k-dependent closed form") {
        for (double beta : {0.0, 0.25, 0.5, 1.0, 2.0})
            for (int k : {1, 3, 5, 10}) {
                CAPTURE(beta);
                CAPTURE(k);
                CHECK(std::abs(oscillatory_integral(beta, k, 1e-10).value - std::atan2(double(k), beta)) <= 1e-8);
            }
    }

    TEST_CASE("heavy damping takes the truncation path") {
        const auto r = oscillatory_integral(10.0, 1, 1e-10);
        CHECK(std::abs(r.value - std::atan(0.1)) <= 1e-10);
        CHECK(r.segments_used < 20);
    }

    TEST_CASE("closed forms") {
        CHECK(closed_form_integral(0.0) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
        CHECK(closed_form_integral(1.0) == doctest::Approx(std::numbers::pi / 4).epsilon(1e-15));
        CHECK(closed_form_integral(0.5) == doctest::Approx(1.1071487177940904).epsilon(1e-15));
        CHECK(closed_form_integral(1.0, 1) == closed_form_integral(1.0));
        CHECK(closed_form_integral(2.0, 4) == doctest::Approx(closed_form_integral(0.5)).epsilon(1e-15));
    }

    TEST_CASE("contract violations") {
        CHECK_THROWS_AS(oscillatory_integral(-0.1, 1), ContractViolation);
        CHECK_THROWS_AS(oscillatory_integral(10.5, 1), ContractViolation);
        CHECK_THROWS_AS(oscillatory_integral(1.0, 0), ContractViolation);
        CHECK_THROWS_AS(oscillatory_integral(1.0, 11), ContractViolation);
        CHECK_THROWS_AS(oscillatory_integral(1.0, 1, 1e-13), ContractViolation);
    }

    TEST_CASE("gauss-legendre is exact to degree 2n-1") {
        const auto& g = gauss_legendre(24);
        double w = 0.0, p46 = 0.0, p47 = 0.0;
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
            w += g.weights[i];
            p46 += g.weights[i] * std::pow(g.nodes[i], 46);
            p47 += g.weights[i] * std::pow(g.nodes[i], 47);
        }
        CHECK(w == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(p46 == doctest::Approx(2.0 / 47.0).epsilon(1e-12));
        CHECK(std::abs(p47) <= 1e-15);
    }
}

TEST_SUITE("paths") {
    TEST_CASE("length examples") {
        for (std::size_t m : {1u, 5u, 50u})
            CHECK(path_length(Path::sample({0, 1, 0, 1}, m, [](double x) { return x; })) ==
                  doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
        CHECK(path_length(Path({0, 1, 0, 0}, {0, 0, 0})) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(path_length(Path({0, 1, 0, 0}, {0.5})) == doctest::Approx(2.0 * std::sqrt(0.5)).epsilon(1e-15));
    }

    TEST_CASE("energy examples") {
        CHECK(path_energy(Path({-1, 1, 0, 0}, {0, 0, 0, 0})) == 0.0);
        CHECK(path_energy(Path({-1, 1, 0.7, 0.7}, {0.7, 0.7, 0.7})) == doctest::Approx(1.4).epsilon(1e-14));
        const Path cat = Path::sample({-1, 1, 0, 0}, 256, [](double x) { return std::cosh(x) - std::cosh(1.0); });
        CHECK(std::abs(path_energy(cat) - (1.0 - std::sinh(2.0) / 2.0)) <= 5e-4);
        CHECK(std::abs(path_length_residual(cat, 2.0 * std::sinh(1.0))) <= 5e-4);
    }

    TEST_CASE("length residual examples") {
        CHECK(path_length_residual(Path({-1, 1, 0, 0}, {0, 0, 0}), 2.3504) == doctest::Approx(-0.3504).epsilon(1e-12));
        CHECK(std::abs(path_length_residual(Path({0, 1, 0, 1}, {0.5}), std::sqrt(2.0))) <= 1e-15);
    }

    TEST_CASE("gradients at known points") {
        const auto g = functional_gradient(Path::sample({0, 1, 0, 1}, 9, [](double x) { return x; }),
                                           PathFunctional::Length);
        for (double v : g) CHECK(std::abs(v) <= 1e-12);

        // Flat path at y = 0: each node touches two segments of length h whose
        // mean height grows by 1/2 per unit of the node, so dE/dy_j = h.
        const Path flat({-1, 1, 0, 0}, std::vector<double>(7, 0.0));
        for (double v : functional_gradient(flat, PathFunctional::Energy))
            CHECK(v == doctest::Approx(flat.spacing()).epsilon(1e-14));
    }

    TEST_CASE("gradients match central differences on random paths") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> ys(8);
            for (double& y : ys) y = u(rng);
            const Path p({-1, 1, u(rng), u(rng)}, ys);
            for (auto fn : {PathFunctional::Length, PathFunctional::Energy, PathFunctional::LengthResidual}) {
                const auto g = functional_gradient(p, fn);
                REQUIRE(g.size() == 8);
                for (std::size_t i = 0; i < 8; ++i) {
                    const double fd = fd_component(p, i, fn, 1e-6);
                    worst = std::max(worst, std::abs(g[i] - fd) / std::max(1.0, std::abs(fd)));
                }
            }
        }
        CHECK(worst <= 1e-6);
    }

    TEST_CASE("length is at least the chord") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        for (int trial = 0; trial < 500; ++trial) {
            std::vector<double> ys(1 + trial % 20);
            for (double& y : ys) y = u(rng);
            const PathFrame f{0.0, 2.0, u(rng), u(rng)};
            const double chord = std::hypot(f.x_hi - f.x_lo, f.y_hi - f.y_lo);
            CHECK(path_length(Path(f, ys)) >= chord - 1e-12);
            const Path line = Path::sample(f, ys.size(), [&](double x) { return f.y_lo + (f.y_hi - f.y_lo) * x / 2.0; });
            CHECK(path_length(line) == doctest::Approx(chord).epsilon(1e-13));
        }
    }

    TEST_CASE("invalid paths") {
        CHECK_THROWS_AS(Path({0, 1, 0, 0}, {}), ContractViolation);
        CHECK_THROWS_AS(Path({1, 1, 0, 0}, {0.0}), ContractViolation);
        const Path p({0, 3, 1, 2}, {5, 6});
        CHECK(p.spacing() == 1.0);
        CHECK(p.nodes() == std::vector<double>{1, 5, 6, 2});
        CHECK(p.abscissa(3) == 3.0);
    }
}
