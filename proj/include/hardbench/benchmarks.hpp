#pragma once

#include "hardbench/core.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace hardbench {

// ---------------------------------------------------------------------------
// Parameter records. Each validates its domain on construction via validate().
// ---------------------------------------------------------------------------

struct NoisyParams {
    std::size_t dimension = 5;
    void validate() const;
};

struct KinkParams {
    std::size_t dimension = 2;
    void validate() const;
};

struct IsolatedParams {
    std::size_t dimension = 2;
    double a = 1.0;
    void validate() const;
};

struct GridPeaksParams {
    int n = 100;
    double a = 10.0;
    void validate() const;
};

struct HyperboloidParams {
    std::size_t dimension = 3;
    double a = 1.0;
    double b = 1.0;
    double half_width = 0.0;  // 0 selects 10 a
    void validate() const;
};

struct FloorParams {
    std::size_t dimension = 1;
    double half_width = 10.0;
    void validate() const;
};

struct VibrationParams {
    std::vector<double> t{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::vector<double> y{0, 1.0706, 1.3372, 0.8277, 0.9507, 1.0848, 0.9814, 0.9769, 1.0169, 1.0012, 0.9933};
    double h = 0.01;
    void validate() const;
};

struct IntegralParams {
    double beta_max = 10.0;
    int k_max = 10;
    double tol = 1e-10;
    void validate() const;
};

struct PathParams {
    std::size_t nodes = 16;  // interior nodes M
    void validate() const;
};

struct RopeParams {
    double a = 1.0;
    double length = 2.3504;
    std::size_t nodes = 32;
    double length_tol = 1e-3;
    void validate() const;
};

// ---------------------------------------------------------------------------
// Raw formulas, exposed for tests and oracles.
// ---------------------------------------------------------------------------

namespace formulas {

double noisy_sphere(PointView x, std::span<const double> eps);
double f1(PointView x, std::span<const double> eps);
double abs_sum(PointView x);
double f2(PointView x);
double f3(PointView x);
double f4(double x, double y, int n, double a);
double f5(PointView x);
double floor_sphere(PointView x);
/// |t| + cos(t^2), the per-coordinate term of f6.
double f6_term(double t);
double f6(PointView x);

}  // namespace formulas

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

struct NoisyPair {
    Problem sphere;  // "noisy_sphere"
    Problem f1;
};
NoisyPair make_noisy(const NoisyParams& params, NoisePolicy policy = NoisePolicy::PerEvaluation);

struct KinkPair {
    Problem abs_sum;
    Problem f2;
};
KinkPair make_kinked(const KinkParams& params);

Problem make_isolated(const IsolatedParams& params);
Problem make_grid_peaks(const GridPeaksParams& params);
Problem make_hyperboloid(const HyperboloidParams& params);

struct FloorPair {
    Problem floor_sphere;
    Problem f6;
};
FloorPair make_floor(const FloorParams& params);

Problem make_vibration(const VibrationParams& params);
Problem make_integral(const IntegralParams& params);
Problem make_shortest_path(const PathParams& params);
Problem make_rope(const RopeParams& params);

/// Global minimum of |t| + cos(t^2) over [-w, w]: fine grid scan followed by
/// golden-section refinement. Returns {argmin, min}.
std::pair<double, double> f6_term_minimum(double half_width);

/// Endpoints of {t > 0 : |t| + cos(t^2) < 1}, located by bisection.
std::pair<double, double> f6_flat_interval();

/// Catenary y = c cosh(x/c) - c cosh(a/c) through (+-a, 0) with arc length L.
struct Catenary {
    double a = 1.0;
    double c = 1.0;
    double operator()(double x) const;
    double length() const;
    /// Integral of y sqrt(1 + y'^2) over [-a, a], by composite Gauss-Legendre.
    double energy() const;
};
Catenary solve_catenary(double a, double length);

// ---------------------------------------------------------------------------
// Self-checks and catalog
// ---------------------------------------------------------------------------

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

/// Optimum self-check: PointSet points evaluate to the declared value and are
/// feasible; Manifold probes have zero residual; Curve references are
/// feasible and close to the declared value.
std::vector<CheckResult> self_check(const Problem& problem);

/// Parameter overrides by name, e.g. {"D": 5, "a": 2}. Unknown names are
/// rejected by make_problem.
using ParamOverrides = std::map<std::string, double>;

std::vector<std::string> catalog_ids();

/// Builds a catalog problem by id. Throws UsageError for an unknown id or an
/// override the problem does not accept.
Problem make_problem(std::string_view id, const ParamOverrides& overrides = {},
                     NoisePolicy policy = NoisePolicy::PerEvaluation);

}  // namespace hardbench
