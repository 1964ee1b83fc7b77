#include "hardbench/benchmarks.hpp"

#include "hardbench/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace hardbench {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<Interval> uniform_bounds(std::size_t d, double lo, double hi) {
    return std::vector<Interval>(d, Interval{lo, hi});
}

double sq_norm(PointView x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

Problem checked(ProblemDefinition def) {
    Problem p(std::move(def));
    for (const auto& c : self_check(p)) {
        if (!c.passed) {
            std::ostringstream msg;
            msg << "self-check '" << c.name << "' failed for " << p.id() << ": measured " << c.measured
                << ", tolerance " << c.tolerance;
            throw std::logic_error(msg.str());
        }
    }
    return p;
}

}  // namespace

// ---------------------------------------------------------------------------
// Parameter validation
// ---------------------------------------------------------------------------

void NoisyParams::validate() const {
    if (dimension < 1) throw ContractViolation("NoisyParams: D must be >= 1");
}

void KinkParams::validate() const {
    if (dimension < 1) throw ContractViolation("KinkParams: D must be >= 1");
}

void IsolatedParams::validate() const {
    if (dimension < 1) throw ContractViolation("IsolatedParams: D must be >= 1");
    if (!(a >= 1.0)) throw ContractViolation("IsolatedParams: a must be >= 1");
}

void GridPeaksParams::validate() const {
    if (n < 1) throw ContractViolation("GridPeaksParams: N must be >= 1");
    if (!(a > 0.0)) throw ContractViolation("GridPeaksParams: a must be > 0");
}

void HyperboloidParams::validate() const {
    if (dimension < 3) throw ContractViolation("HyperboloidParams: D must be >= 3");
    if (!(a >= 1.0) || !(b >= 1.0)) throw ContractViolation("HyperboloidParams: a and b must be >= 1");
    if (half_width != 0.0 && !(half_width > a))
        throw ContractViolation("HyperboloidParams: box half-width must exceed a");
}

void FloorParams::validate() const {
    if (dimension < 1) throw ContractViolation("FloorParams: D must be >= 1");
    if (!(half_width >= 2.0)) throw ContractViolation("FloorParams: half-width must be >= 2");
}

void VibrationParams::validate() const {
    if (t.size() != y.size() || t.empty()) throw ContractViolation("VibrationParams: t/y length mismatch");
    if (!(h > 0.0)) throw ContractViolation("VibrationParams: h must be positive");
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!(t[i] >= 0.0) || (i > 0 && !(t[i] > t[i - 1])))
            throw ContractViolation("VibrationParams: times must be >= 0 and strictly increasing");
    }
}

void IntegralParams::validate() const {
    if (!(beta_max > 0.0 && beta_max <= 10.0)) throw ContractViolation("IntegralParams: beta_max must lie in (0, 10]");
    if (k_max < 1 || k_max > 10) throw ContractViolation("IntegralParams: k_max must lie in [1, 10]");
    if (!(tol >= 1e-12)) throw ContractViolation("IntegralParams: tol must be >= 1e-12");
}

void PathParams::validate() const {
    if (nodes < 4) throw ContractViolation("PathParams: M must be >= 4");
}

void RopeParams::validate() const {
    if (!(a > 0.0)) throw ContractViolation("RopeParams: a must be > 0");
    if (!(length > 2.0 * a)) throw ContractViolation("RopeParams: L must exceed 2a");
    if (nodes < 4) throw ContractViolation("RopeParams: M must be >= 4");
    if (!(length_tol > 0.0)) throw ContractViolation("RopeParams: length tolerance must be > 0");
}

// ---------------------------------------------------------------------------
// Formulas
// ---------------------------------------------------------------------------

namespace formulas {

double noisy_sphere(PointView x, std::span<const double> eps) {
    double s = 0.0;
    for (std::size_t n = 0; n < x.size(); ++n) s += eps[n] * x[n] * x[n];
    return s;
}

double f1(PointView x, std::span<const double> eps) {
    double plain = 0.0, weighted = 0.0;
    for (std::size_t n = 0; n < x.size(); ++n) {
        const double term = std::pow(x[n], 2.0 * static_cast<double>(n + 1));
        plain += term;
        weighted += eps[n] * term;
    }
    return plain - std::exp(-weighted);
}

double abs_sum(PointView x) {
    double s = 0.0;
    for (double v : x) s += std::abs(v);
    return s;
}

double f2(PointView x) {
    double dist = 0.0, osc = 0.0;
    for (std::size_t n = 0; n < x.size(); ++n) {
        const double d = std::abs(x[n] - static_cast<double>(n + 1) * kPi);
        dist += d;
        osc += std::abs(std::sin(d));
    }
    return dist * std::exp(-osc);
}

double f3(PointView x) {
    double s = x[0] * x[0];
    for (std::size_t n = 1; n < x.size(); ++n) s += std::abs(x[n] * x[n] * x[n]);
    return s;
}

double f4(double x, double y, int n, double a) {
    // Gaussian weights beyond L-infinity distance 2 are below e^{-4a}.
    const int i_lo = std::max(-n, static_cast<int>(std::ceil(x - 2.0)));
    const int i_hi = std::min(n, static_cast<int>(std::floor(x + 2.0)));
    const int j_lo = std::max(-n, static_cast<int>(std::ceil(y - 2.0)));
    const int j_hi = std::min(n, static_cast<int>(std::floor(y + 2.0)));
    double s = 0.0;
    for (int i = i_lo; i <= i_hi; ++i) {
        for (int j = j_lo; j <= j_hi; ++j) {
            const double dx = x - i, dy = y - j;
            s += (std::abs(i) + std::abs(j)) * std::exp(-a * dx * dx - a * dy * dy);
        }
    }
    return s;
}

double f5(PointView x) { return sq_norm(x); }

double floor_sphere(PointView x) { return std::floor(sq_norm(x)); }

double f6_term(double t) { return std::abs(t) + std::cos(t * t); }

double f6(PointView x) {
    double s = 0.0;
    for (double v : x) s += f6_term(v);
    return std::floor(s);
}

}  // namespace formulas

// ---------------------------------------------------------------------------
// Noisy and kinked
// ---------------------------------------------------------------------------

NoisyPair make_noisy(const NoisyParams& params, NoisePolicy policy) {
    params.validate();
    const std::size_t d = params.dimension;

    auto draw = [d, policy](NoiseKey key) {
        const NoiseKey used = apply_policy(key, policy);
        std::vector<double> eps(d);
        for (std::size_t n = 0; n < d; ++n) eps[n] = uniform(used, static_cast<std::uint32_t>(n));
        return eps;
    };
    const std::vector<double> expected_eps(d, 0.5);

    ProblemDefinition sphere;
    sphere.id = "noisy_sphere";
    sphere.title = "Sphere with multiplicative uniform noise on each term";
    sphere.dimension = d;
    sphere.bounds = uniform_bounds(d, -100.0, 100.0);
    sphere.objective = [draw](PointView x, NoiseKey key) { return formulas::noisy_sphere(x, draw(key)); };
    sphere.expected_objective = [expected_eps](PointView x) { return formulas::noisy_sphere(x, expected_eps); };
    sphere.optimum = PointSet{{Vector(d, 0.0)}, 0.0};
    sphere.deterministic = false;
    sphere.noise_policy = policy;
    sphere.parameters = {{"D", static_cast<double>(d)}};

    ProblemDefinition f1 = sphere;
    f1.id = "f1";
    f1.title = "Sum of x_n^(2n) minus exp of its noisy weighted sum";
    f1.objective = [draw](PointView x, NoiseKey key) { return formulas::f1(x, draw(key)); };
    f1.expected_objective = [expected_eps](PointView x) { return formulas::f1(x, expected_eps); };
    f1.optimum = PointSet{{Vector(d, 0.0)}, -1.0};

    return {checked(std::move(sphere)), checked(std::move(f1))};
}

KinkPair make_kinked(const KinkParams& params) {
    params.validate();
    const std::size_t d = params.dimension;
    const double w = static_cast<double>(d) * kPi;

    ProblemDefinition abs_sum;
    abs_sum.id = "abs_sum";
    abs_sum.title = "Sum of absolute values";
    abs_sum.dimension = d;
    abs_sum.bounds = uniform_bounds(d, -w, w);
    abs_sum.objective = [](PointView x, NoiseKey) { return formulas::abs_sum(x); };
    abs_sum.optimum = PointSet{{Vector(d, 0.0)}, 0.0};
    abs_sum.parameters = {{"D", static_cast<double>(d)}};

    ProblemDefinition f2 = abs_sum;
    f2.id = "f2";
    f2.title = "Shifted absolute sum damped by exp(-sum |sin|), kinks at multiples of pi";
    f2.objective = [](PointView x, NoiseKey) { return formulas::f2(x); };
    Vector opt(d);
    for (std::size_t n = 0; n < d; ++n) opt[n] = static_cast<double>(n + 1) * kPi;
    f2.optimum = PointSet{{opt}, 0.0};

    return {checked(std::move(abs_sum)), checked(std::move(f2))};
}

// ---------------------------------------------------------------------------
// Isolated domains
// ---------------------------------------------------------------------------

Problem make_isolated(const IsolatedParams& params) {
    params.validate();
    const std::size_t d = params.dimension;
    const double a = params.a;

    ProblemDefinition def;
    def.id = "f3";
    def.title = "x_1^2 + sum |x_n^3| on the union of a diamond and a ball";
    def.dimension = d;
    def.bounds = uniform_bounds(d, -6.0 * a, 6.0 * a);
    def.objective = [](PointView x, NoiseKey) { return formulas::f3(x); };

    Residual diamond = [a](PointView x) {
        double s = std::abs(x[0] - 2.0 * a);
        for (std::size_t n = 1; n < x.size(); ++n) s += std::abs(x[n]);
        return s - a;
    };
    Residual ball = [a](PointView x) {
        double s = 0.0;
        for (double v : x) s += (v - 5.0 * a) * (v - 5.0 * a);
        return s - a * a;
    };
    def.feasibility.groups = {{diamond}, {ball}};
    def.feasibility.combinator = Combinator::UnionOfGroups;

    Vector opt(d, 0.0);
    opt[0] = a;
    def.optimum = PointSet{{opt}, a * a};
    def.parameters = {{"D", static_cast<double>(d)}, {"a", a}};
    return checked(std::move(def));
}

Problem make_grid_peaks(const GridPeaksParams& params) {
    params.validate();
    const int n = params.n;
    const double a = params.a;
    const double edge = static_cast<double>(n) + 1.0 / a;

    ProblemDefinition def;
    def.id = "f4";
    def.title = "Gaussian peaks weighted by |i|+|j| on (2N+1)^2 isolated diamonds";
    def.dimension = 2;
    def.bounds = uniform_bounds(2, -edge, edge);
    def.direction = Direction::Maximize;
    def.objective = [n, a](PointView x, NoiseKey) { return formulas::f4(x[0], x[1], n, a); };

    // Union of diamonds |x-i| + |y-j| <= 1/a. The L1 distance to the lattice is
    // separable, so the closest diamond centre is the coordinate-wise rounding
    // (clamped to the grid).
    Residual nearest_diamond = [n, a](PointView x) {
        const double i = std::clamp(std::round(x[0]), -static_cast<double>(n), static_cast<double>(n));
        const double j = std::clamp(std::round(x[1]), -static_cast<double>(n), static_cast<double>(n));
        return std::abs(x[0] - i) + std::abs(x[1] - j) - 1.0 / a;
    };
    def.feasibility.groups = {{nearest_diamond}};
    def.feasibility.combinator = Combinator::UnionOfGroups;

    const double nn = static_cast<double>(n);
    const double peak = formulas::f4(nn, nn, n, a);
    def.optimum = PointSet{{{nn, nn}, {nn, -nn}, {-nn, nn}, {-nn, -nn}}, peak};
    const double regions = (2.0 * nn + 1.0) * (2.0 * nn + 1.0);
    def.parameters = {{"N", nn}, {"a", a}, {"regions", regions}};
    return checked(std::move(def));
}

// ---------------------------------------------------------------------------
// Hyperboloid
// ---------------------------------------------------------------------------

Problem make_hyperboloid(const HyperboloidParams& params) {
    params.validate();
    const std::size_t d = params.dimension;
    const double a = params.a, b = params.b;
    const double w = params.half_width == 0.0 ? 10.0 * a : params.half_width;

    ProblemDefinition def;
    def.id = "f5";
    def.title = "Sphere outside a hyperboloid of revolution";
    def.dimension = d;
    def.bounds = uniform_bounds(d, -w, w);
    def.objective = [](PointView x, NoiseKey) { return formulas::f5(x); };
    Residual outside = [a, b](PointView x) {
        double s = 0.0;
        for (std::size_t n = 0; n + 1 < x.size(); ++n) s += x[n] * x[n];
        const double z = x.back();
        return 1.0 + z * z / (b * b) - s / (a * a);
    };
    def.feasibility.groups = {{outside}};

    Manifold m;
    m.residual = [a](PointView x) {
        double s = 0.0;
        for (std::size_t n = 0; n + 1 < x.size(); ++n) s += x[n] * x[n];
        const double ring = s - a * a;
        return ring * ring + x.back() * x.back();
    };
    m.probe = Vector(d, 0.0);
    m.probe[0] = a;
    m.value = a * a;
    def.optimum = std::move(m);
    def.parameters = {{"D", static_cast<double>(d)}, {"a", a}, {"b", b}, {"W", w}};
    return checked(std::move(def));
}

// ---------------------------------------------------------------------------
// Floor-quantized
// ---------------------------------------------------------------------------

std::pair<double, double> f6_term_minimum(double half_width) {
    // g(t) >= |t| - 1 so the minimum lies in |t| <= 2; g is even.
    const double hi = std::min(half_width, 2.0);
    const int samples = 200000;
    double best_t = 0.0, best = formulas::f6_term(0.0);
    for (int i = 1; i <= samples; ++i) {
        const double t = hi * i / samples;
        const double v = formulas::f6_term(t);
        if (v < best) best = v, best_t = t;
    }
    const double step = hi / samples;
    double lo = std::max(0.0, best_t - step), up = std::min(hi, best_t + step);
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 200 && up - lo > 1e-15; ++it) {
        const double m1 = up - ratio * (up - lo), m2 = lo + ratio * (up - lo);
        if (formulas::f6_term(m1) < formulas::f6_term(m2)) up = m2;
        else lo = m1;
    }
    const double t = 0.5 * (lo + up);
    return {t, formulas::f6_term(t)};
}

std::pair<double, double> f6_flat_interval() {
    auto excess = [](double t) { return formulas::f6_term(t) - 1.0; };
    auto bisect = [&](double lo, double hi) {
        // excess changes sign on [lo, hi]
        const bool lo_positive = excess(lo) > 0.0;
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
            const double mid = 0.5 * (lo + hi);
            if ((excess(mid) > 0.0) == lo_positive) lo = mid;
            else hi = mid;
        }
        return 0.5 * (lo + hi);
    };
    const double inner = f6_term_minimum(2.0).first;
    return {bisect(1.0, inner), bisect(inner, 2.0)};
}

FloorPair make_floor(const FloorParams& params) {
    params.validate();
    const std::size_t d = params.dimension;
    const double w = params.half_width;

    ProblemDefinition sphere;
    sphere.id = "floor_sphere";
    sphere.title = "Floor of the sphere function";
    sphere.dimension = d;
    sphere.bounds = uniform_bounds(d, -w, w);
    sphere.objective = [](PointView x, NoiseKey) { return formulas::floor_sphere(x); };
    FlatRegions ball;
    ball.contains = [](PointView x) { return sq_norm(x) < 1.0; };
    ball.distance = [](PointView x) { return std::max(0.0, std::sqrt(sq_norm(x)) - 1.0); };
    ball.value = 0.0;
    sphere.optimum = std::move(ball);
    sphere.parameters = {{"D", static_cast<double>(d)}, {"W", w}};

    ProblemDefinition f6 = sphere;
    f6.id = "f6";
    f6.title = "Floor of sum(|x_n| + cos(x_n^2)), disconnected flat optima";
    f6.objective = [](PointView x, NoiseKey) { return formulas::f6(x); };

    // The sum is separable, so its infimum is D * min g and the lowest level
    // is floor(D * min g).
    const double level = std::floor(static_cast<double>(d) * f6_term_minimum(w).second);
    FlatRegions regions;
    regions.value = level;
    regions.contains = [level](PointView x) { return formulas::f6(x) == level; };
    if (d == 1) {
        const auto [lo, hi] = f6_flat_interval();
        regions.boxes = {{Interval{-hi, -lo}}, {Interval{lo, hi}}};
    } else {
        // Level excess of the inner sum; zero inside the optimal level set.
        regions.distance = [level](PointView x) {
            double s = 0.0;
            for (double v : x) s += formulas::f6_term(v);
            return std::max(0.0, s - (level + 1.0));
        };
    }
    f6.optimum = std::move(regions);
    return {checked(std::move(sphere)), checked(std::move(f6))};
}

// ---------------------------------------------------------------------------
// Vibration parameter estimation
// ---------------------------------------------------------------------------

Problem make_vibration(const VibrationParams& params) {
    params.validate();

    ProblemDefinition def;
    def.id = "f7";
    def.title = "Least-squares fit of (zeta, omega) to a measured step response";
    def.dimension = 2;
    def.bounds = {Interval{0.01, 0.99}, Interval{0.1, 5.0}};
    def.objective = [t = params.t, y = params.y, h = params.h](PointView x, NoiseKey) {
        const OdeSamples sim = rk4_step_response(x[0], x[1], t, h);
        double s = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) s += (y[i] - sim.y[i]) * (y[i] - sim.y[i]);
        return s;
    };
    const Vector truth{0.25, 2.0};
    const double at_truth = def.objective(truth, NoiseKey{});
    def.optimum = PointSet{{truth}, at_truth};
    def.parameters = {{"h", params.h}, {"samples", static_cast<double>(params.t.size())}};
    return checked(std::move(def));
}

// ---------------------------------------------------------------------------
// Oscillatory integral
// ---------------------------------------------------------------------------

Problem make_integral(const IntegralParams& params) {
    params.validate();

    ProblemDefinition def;
    def.id = "f8";
    def.title = "Maximize the damped sine integral over (beta, integer k)";
    def.dimension = 2;
    def.bounds = {Interval{0.0, params.beta_max}, Interval{1.0, static_cast<double>(params.k_max)}};
    def.direction = Direction::Maximize;
    def.integer_coords = {1};
    def.objective = [tol = params.tol](PointView x, NoiseKey) {
        return oscillatory_integral(x[0], static_cast<int>(x[1]), tol).value;
    };
    Manifold m;
    m.residual = [](PointView x) { return x[0]; };
    m.probe = {0.0, 1.0};
    m.value = kPi / 2.0;
    def.optimum = std::move(m);
    def.parameters = {{"beta_max", params.beta_max}, {"k_max", static_cast<double>(params.k_max)},
                      {"tol", params.tol}};
    return checked(std::move(def));
}

// ---------------------------------------------------------------------------
// Paths
// ---------------------------------------------------------------------------

Problem make_shortest_path(const PathParams& params) {
    params.validate();
    const std::size_t m = params.nodes;
    const PathFrame frame{0.0, 1.0, 0.0, 1.0};

    ProblemDefinition def;
    def.id = "f9";
    def.title = "Shortest curve from (0,0) to (1,1) with y >= 0";
    def.dimension = m;
    def.bounds = uniform_bounds(m, 0.0, 5.0);  // y(x) >= 0 as a node-wise bound
    def.path = frame;
    def.objective = [frame](PointView x, NoiseKey) { return path_length(Path(frame, Vector(x.begin(), x.end()))); };
    def.gradient = [frame](PointView x) {
        return functional_gradient(Path(frame, Vector(x.begin(), x.end())), PathFunctional::Length);
    };
    def.optimum = Curve{Path::sample(frame, m, [](double x) { return x; }).interior, std::sqrt(2.0)};
    def.parameters = {{"M", static_cast<double>(m)}};
    return checked(std::move(def));
}

double Catenary::operator()(double x) const {
    return c * (std::cosh(x / c) - std::cosh(a / c));
}

double Catenary::length() const { return 2.0 * c * std::sinh(a / c); }

double Catenary::energy() const {
    // y sqrt(1 + y'^2) = c (cosh(x/c) - cosh(a/c)) cosh(x/c)
    const GaussRule& rule = gauss_legendre(32);
    const int panels = 64;
    const double width = 2.0 * a / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = -a + width * (p + 0.5);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double x = mid + 0.5 * width * rule.nodes[i];
            total += 0.5 * width * rule.weights[i] * (*this)(x)*std::cosh(x / c);
        }
    }
    return total;
}

Catenary solve_catenary(double a, double length) {
    if (!(a > 0.0) || !(length > 2.0 * a)) throw ContractViolation("solve_catenary: need a > 0 and L > 2a");
    // 2 c sinh(a/c) decreases monotonically from +inf to 2a as c grows; bisect
    // on log c.
    auto arc = [a](double c) { return 2.0 * c * std::sinh(a / c); };
    double lo = std::log(a) - 10.0, hi = std::log(a) + 10.0;
    while (arc(std::exp(hi)) > length) hi += 10.0;
    while (!std::isfinite(arc(std::exp(lo))) || arc(std::exp(lo)) < length) lo += 0.5;
    for (int it = 0; it < 300; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (arc(std::exp(mid)) > length) lo = mid;
        else hi = mid;
    }
    return Catenary{a, std::exp(0.5 * (lo + hi))};
}

Problem make_rope(const RopeParams& params) {
    params.validate();
    const std::size_t m = params.nodes;
    const double a = params.a, target = params.length;
    const PathFrame frame{-a, a, 0.0, 0.0};

    ProblemDefinition def;
    def.id = "f10";
    def.title = "Hanging rope: minimize potential energy at fixed length";
    def.dimension = m;
    def.bounds = uniform_bounds(m, -5.0, 5.0);
    def.path = frame;
    def.objective = [frame](PointView x, NoiseKey) { return path_energy(Path(frame, Vector(x.begin(), x.end()))); };
    def.gradient = [frame](PointView x) {
        return functional_gradient(Path(frame, Vector(x.begin(), x.end())), PathFunctional::Energy);
    };
    def.feasibility.equalities.push_back(EqualityConstraint{
        "length",
        [frame, target](PointView x) { return path_length_residual(Path(frame, Vector(x.begin(), x.end())), target); },
        params.length_tol,
        [frame](PointView x) {
            return functional_gradient(Path(frame, Vector(x.begin(), x.end())), PathFunctional::LengthResidual);
        }});

    const Catenary cat = solve_catenary(a, target);
    def.optimum = Curve{Path::sample(frame, m, cat).interior, cat.energy()};
    def.parameters = {{"a", a}, {"L", target}, {"M", static_cast<double>(m)}, {"catenary_c", cat.c},
                      {"tol_eq", params.length_tol}};
    return checked(std::move(def));
}

// ---------------------------------------------------------------------------
// Self-checks
// ---------------------------------------------------------------------------

std::vector<CheckResult> self_check(const Problem& problem) {
    std::vector<CheckResult> out;
    const std::string& id = problem.id();
    const OptimumSpec& spec = problem.optimum();

    if (const auto* ps = std::get_if<PointSet>(&spec)) {
        for (std::size_t i = 0; i < ps->points.size(); ++i) {
            const Vector& p = ps->points[i];
            const std::string tag = id + " point " + std::to_string(i);
            // Noise-free and two independent noisy keys.
            double worst = std::abs(problem.evaluate_expected(p) - ps->value);
            for (std::uint64_t e : {1ULL, 977ULL})
                worst = std::max(worst, std::abs(problem.evaluate(p, NoiseKey{12345, e}) - ps->value));
            out.push_back({tag + " value", worst, 1e-9, worst <= 1e-9});
            const auto feas = problem.is_feasible(p);
            out.push_back({tag + " feasible", feas.violation, 0.0, feas.feasible});
        }
    } else if (const auto* mf = std::get_if<Manifold>(&spec)) {
        const double r = std::abs(mf->residual(mf->probe));
        out.push_back({id + " manifold probe residual", r, 1e-12, r <= 1e-12});
        const double gap = std::abs(problem.evaluate_expected(mf->probe) - mf->value);
        out.push_back({id + " manifold probe value", gap, 1e-8, gap <= 1e-8});
        const auto feas = problem.is_feasible(mf->probe);
        out.push_back({id + " manifold probe feasible", feas.violation, 0.0, feas.feasible});
    } else if (const auto* fr = std::get_if<FlatRegions>(&spec)) {
        for (std::size_t i = 0; i < fr->boxes.size(); ++i) {
            Vector centre;
            for (const auto& side : fr->boxes[i]) centre.push_back(0.5 * (side.lo + side.hi));
            const double gap = std::abs(problem.evaluate_expected(centre) - fr->value);
            out.push_back({id + " region " + std::to_string(i) + " centre value", gap, 0.0,
                           gap == 0.0 && fr->contains(centre)});
        }
    } else if (const auto* cv = std::get_if<Curve>(&spec)) {
        // The sampled reference carries O(h^2) discretization error.
        const double h = problem.to_path(cv->ordinates).spacing();
        const double gap = std::abs(problem.evaluate_expected(cv->ordinates) - cv->value);
        const double value_tol = std::max(1e-2, 2.0 * h * h);
        out.push_back({id + " reference curve value", gap, value_tol, gap <= value_tol});
        out.push_back({id + " reference curve in bounds", 0.0, 0.0, problem.within_bounds(cv->ordinates)});
        const auto feas = problem.is_feasible(cv->ordinates);
        const auto& eqs = problem.feasibility().equalities;
        for (std::size_t i = 0; i < eqs.size(); ++i) {
            const double r = std::abs(feas.equality_residual[i]);
            const double tol = std::max(eqs[i].tolerance, h * h);
            out.push_back({id + " reference curve " + eqs[i].name + " residual", r, tol, r <= tol});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

std::vector<std::string> catalog_ids() {
    return {"noisy_sphere", "f1", "abs_sum", "f2", "f3", "f4", "f5", "floor_sphere", "f6", "f7", "f8", "f9", "f10"};
}

namespace {

class OverrideReader {
public:
    OverrideReader(std::string_view id, const ParamOverrides& o) : id_(id), overrides_(o) {}

    double real(const std::string& key, double fallback) {
        used_.push_back(key);
        auto it = overrides_.find(key);
        return it == overrides_.end() ? fallback : it->second;
    }

    std::size_t count(const std::string& key, std::size_t fallback) {
        const double v = real(key, static_cast<double>(fallback));
        if (v < 0.0 || v != std::floor(v))
            throw UsageError("parameter '" + key + "' for " + std::string(id_) + " must be a non-negative integer");
        return static_cast<std::size_t>(v);
    }

    void finish() const {
        for (const auto& [key, value] : overrides_) {
            if (std::find(used_.begin(), used_.end(), key) == used_.end()) {
                std::string accepted;
                for (const auto& u : used_) accepted += (accepted.empty() ? "" : ", ") + u;
                throw UsageError("parameter '" + key + "' is not accepted by " + std::string(id_) +
                                 " (accepted: " + accepted + ")");
            }
        }
    }

private:
    std::string_view id_;
    const ParamOverrides& overrides_;
    std::vector<std::string> used_;
};

std::string catalog_list() {
    std::string s;
    for (const auto& id : catalog_ids()) s += (s.empty() ? "" : ", ") + id;
    return s;
}

}  // namespace

Problem make_problem(std::string_view id, const ParamOverrides& overrides, NoisePolicy policy) {
    OverrideReader r(id, overrides);
    auto done = [&](Problem p) {
        r.finish();
        return p;
    };
    try {
        if (id == "noisy_sphere" || id == "f1") {
            NoisyParams p;
            p.dimension = r.count("D", p.dimension);
            r.finish();
            auto pair = make_noisy(p, policy);
            return id == "f1" ? pair.f1 : pair.sphere;
        }
        if (id == "abs_sum" || id == "f2") {
            KinkParams p;
            p.dimension = r.count("D", p.dimension);
            r.finish();
            auto pair = make_kinked(p);
            return id == "f2" ? pair.f2 : pair.abs_sum;
        }
        if (id == "f3") {
            IsolatedParams p;
            p.dimension = r.count("D", p.dimension);
            p.a = r.real("a", p.a);
            return done(make_isolated(p));
        }
        if (id == "f4") {
            GridPeaksParams p;
            p.n = static_cast<int>(r.count("N", static_cast<std::size_t>(p.n)));
            p.a = r.real("a", p.a);
            return done(make_grid_peaks(p));
        }
        if (id == "f5") {
            HyperboloidParams p;
            p.dimension = r.count("D", p.dimension);
            p.a = r.real("a", p.a);
            p.b = r.real("b", p.b);
            p.half_width = r.real("W", p.half_width);
            return done(make_hyperboloid(p));
        }
        if (id == "floor_sphere" || id == "f6") {
            FloorParams p;
            p.dimension = r.count("D", p.dimension);
            p.half_width = r.real("W", p.half_width);
            r.finish();
            auto pair = make_floor(p);
            return id == "f6" ? pair.f6 : pair.floor_sphere;
        }
        if (id == "f7") {
            VibrationParams p;
            p.h = r.real("h", p.h);
            return done(make_vibration(p));
        }
        if (id == "f8") {
            IntegralParams p;
            p.tol = r.real("tol", p.tol);
            return done(make_integral(p));
        }
        if (id == "f9") {
            PathParams p;
            p.nodes = r.count("M", p.nodes);
            return done(make_shortest_path(p));
        }
        if (id == "f10") {
            RopeParams p;
            p.a = r.real("a", p.a);
            p.length = r.real("L", p.length);
            p.nodes = r.count("M", p.nodes);
            p.length_tol = r.real("tol_eq", p.length_tol);
            return done(make_rope(p));
        }
    } catch (const ContractViolation& e) {
        throw UsageError(std::string("invalid parameters for ") + std::string(id) + ": " + e.what());
    }
    throw UsageError("unknown problem '" + std::string(id) + "'; available: " + catalog_list());
}

}  // namespace hardbench
