#include "hardbench/numerics.hpp"

#include "hardbench/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

namespace hardbench {

// ---------------------------------------------------------------------------
// Step response
// ---------------------------------------------------------------------------

OdeSamples rk4_step_response(double zeta, double omega, std::span<const double> t_grid, double h) {
    if (!(zeta > 0.0) || !(omega > 0.0) || !(h > 0.0))
        throw ContractViolation("rk4_step_response: zeta, omega and h must be positive");

    std::vector<long long> steps(t_grid.size());
    long long last = 0;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] >= 0.0) || !std::isfinite(t_grid[i]))
            throw ContractViolation("rk4_step_response: sample times must be finite and >= 0");
        steps[i] = std::llround(t_grid[i] / h);
        last = std::max(last, steps[i]);
    }

    // State (y, v) with v = dy/dt; u(t) = 1 for t >= 0.
    const double w2 = omega * omega;
    const double c = 2.0 * zeta * omega;
    auto accel = [&](double y, double v) { return w2 * (1.0 - y) - c * v; };

    std::vector<double> trajectory(static_cast<std::size_t>(last) + 1);
    double y = 0.0, v = 0.0;
    trajectory[0] = y;
    for (long long n = 1; n <= last; ++n) {
        const double k1y = v, k1v = accel(y, v);
        const double k2y = v + 0.5 * h * k1v, k2v = accel(y + 0.5 * h * k1y, v + 0.5 * h * k1v);
        const double k3y = v + 0.5 * h * k2v, k3v = accel(y + 0.5 * h * k2y, v + 0.5 * h * k2v);
        const double k4y = v + h * k3v, k4v = accel(y + h * k3y, v + h * k3v);
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        trajectory[static_cast<std::size_t>(n)] = y;
    }

    OdeSamples out;
    out.t.assign(t_grid.begin(), t_grid.end());
    out.y.reserve(t_grid.size());
    for (long long s : steps) out.y.push_back(trajectory[static_cast<std::size_t>(s)]);
    return out;
}

double analytic_step_response(double zeta, double omega, double t) {
    if (!(zeta > 0.0 && zeta < 1.0))
        throw ContractViolation("analytic_step_response: zeta must lie in (0, 1)");
    if (!(omega > 0.0)) throw ContractViolation("analytic_step_response: omega must be positive");
    if (!(t >= 0.0)) throw ContractViolation("analytic_step_response: t must be >= 0");
    const double wd = omega * std::sqrt(1.0 - zeta * zeta);
    return 1.0 - std::exp(-zeta * omega * t) *
                     (std::cos(wd * t) + zeta * omega / wd * std::sin(wd * t));
}

// ---------------------------------------------------------------------------
// Gauss-Legendre
// ---------------------------------------------------------------------------

namespace {

GaussRule build_gauss_legendre(std::size_t n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double pi = std::numbers::pi;
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (std::size_t j = 2; j <= n; ++j) {
                const double jj = static_cast<double>(j);
                const double p2 = ((2.0 * jj - 1.0) * x * p1 - (jj - 1.0) * p0) / jj;
                p0 = p1;
                p1 = p2;
            }
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Recompute derivative at the converged root.
        double p0 = 1.0, p1 = x;
        for (std::size_t j = 2; j <= n; ++j) {
            const double jj = static_cast<double>(j);
            const double p2 = ((2.0 * jj - 1.0) * x * p1 - (jj - 1.0) * p0) / jj;
            p0 = p1;
            p1 = p2;
        }
        dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

}  // namespace

const GaussRule& gauss_legendre(std::size_t n) {
    if (n == 0) throw ContractViolation("gauss_legendre: need at least one node");
    static std::mutex mutex;
    static std::map<std::size_t, GaussRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_gauss_legendre(n)).first;
    return it->second;
}

// ---------------------------------------------------------------------------
// Oscillatory integral
// ---------------------------------------------------------------------------

namespace {

constexpr std::size_t kGaussNodes = 24;
constexpr int kTruncationBudget = 512;
constexpr int kEulerMaxTerms = 4096;

// sin(kx) e^{-beta x} / x over [a, b], composite Gauss-Legendre. Panels are
// kept short enough that e^{-beta x} changes by at most e^2 across one panel.
double half_period_integral(double beta, int k, double a, double b) {
    const GaussRule& rule = gauss_legendre(kGaussNodes);
    const int panels = std::max(1, static_cast<int>(std::ceil(beta * (b - a) / 2.0)));
    const double width = (b - a) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + width * p;
        const double mid = lo + 0.5 * width;
        double panel = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double x = mid + 0.5 * width * rule.nodes[i];
            panel += rule.weights[i] * std::sin(k * x) * std::exp(-beta * x) / x;
        }
        sum += 0.5 * width * panel;
    }
    return sum;
}

}  // namespace

QuadratureResult oscillatory_integral(double beta, int k, double tol) {
    if (!(beta >= 0.0 && beta <= 10.0))
        throw ContractViolation("oscillatory_integral: beta must lie in [0, 10]");
    if (k < 1 || k > 10) throw ContractViolation("oscillatory_integral: k must lie in [1, 10]");
    if (!(tol >= 1e-12)) throw ContractViolation("oscillatory_integral: tol must be >= 1e-12");

    const double half = std::numbers::pi / k;
    auto term = [&](int m) { return half_period_integral(beta, k, m * half, (m + 1) * half); };

    // Truncation: |tail beyond X| <= e^{-beta X} / (beta X).
    if (beta > 0.0) {
        int needed = 1;
        while (needed <= kTruncationBudget) {
            const double x = needed * half;
            if (std::exp(-beta * x) / (beta * x) <= 0.25 * tol) break;
            ++needed;
        }
        if (needed <= kTruncationBudget) {
            double sum = 0.0;
            for (int m = 0; m < needed; ++m) sum += term(m);
            const double x = needed * half;
            const double tail = std::exp(-beta * x) / (beta * x);
            return {sum, tail + needed * 1e-16, needed};
        }
    }

    // Euler transformation of partial sums: repeated pairwise averaging. The
    // last entries of consecutive averaging levels converge to the limit; their
    // difference is the error estimate.
    std::vector<double> partial;
    double running = 0.0;
    double best = 0.0, best_err = std::numeric_limits<double>::infinity();
    for (int n = 16; n <= kEulerMaxTerms; n *= 2) {
        while (static_cast<int>(partial.size()) < n) {
            running += term(static_cast<int>(partial.size()));
            partial.push_back(running);
        }
        std::vector<double> level(partial.end() - n, partial.end());
        std::vector<double> tips;
        tips.push_back(level.back());
        while (level.size() > 1) {
            for (std::size_t i = 0; i + 1 < level.size(); ++i) level[i] = 0.5 * (level[i] + level[i + 1]);
            level.pop_back();
            tips.push_back(level.back());
        }
        // The top of the triangle; compare with the level below it.
        const double estimate = tips.back();
        const double err = std::abs(tips.back() - tips[tips.size() - 2]) + n * 1e-16;
        if (err < best_err) {
            best = estimate;
            best_err = err;
        }
        if (err <= tol) return {estimate, err, n};
    }
    throw ConvergenceError("oscillatory_integral: tolerance not reached", best, best_err);
}

double closed_form_integral(double beta) {
    return std::numbers::pi / 2.0 - std::atan(beta);
}

double closed_form_integral(double beta, int k) {
    if (k < 1) throw ContractViolation("closed_form_integral: k must be positive");
    return std::numbers::pi / 2.0 - std::atan(beta / k);
}

// ---------------------------------------------------------------------------
// Paths
// ---------------------------------------------------------------------------

Path::Path(PathFrame f, std::vector<double> ys) : frame(f), interior(std::move(ys)) {
    if (interior.empty()) throw ContractViolation("Path: need at least one interior node");
    if (!(frame.x_hi > frame.x_lo)) throw ContractViolation("Path: x_hi must exceed x_lo");
}

double Path::spacing() const {
    return (frame.x_hi - frame.x_lo) / static_cast<double>(interior.size() + 1);
}

double Path::abscissa(std::size_t node) const {
    return frame.x_lo + spacing() * static_cast<double>(node);
}

double Path::ordinate(std::size_t node) const {
    if (node == 0) return frame.y_lo;
    if (node == interior.size() + 1) return frame.y_hi;
    return interior[node - 1];
}

std::vector<double> Path::nodes() const {
    std::vector<double> all;
    all.reserve(interior.size() + 2);
    all.push_back(frame.y_lo);
    all.insert(all.end(), interior.begin(), interior.end());
    all.push_back(frame.y_hi);
    return all;
}

double path_length(const Path& p) {
    const double h = p.spacing();
    const auto y = p.nodes();
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < y.size(); ++i) total += std::hypot(h, y[i + 1] - y[i]);
    return total;
}

double path_energy(const Path& p) {
    const double h = p.spacing();
    const auto y = p.nodes();
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < y.size(); ++i)
        total += 0.5 * (y[i] + y[i + 1]) * std::hypot(h, y[i + 1] - y[i]);
    return total;
}

double path_length_residual(const Path& p, double target_length) {
    return path_length(p) - target_length;
}

std::vector<double> functional_gradient(const Path& p, PathFunctional functional) {
    const double h = p.spacing();
    const auto y = p.nodes();
    const std::size_t segments = y.size() - 1;
    std::vector<double> len(segments), slope(segments), mean(segments);
    for (std::size_t i = 0; i < segments; ++i) {
        const double dy = y[i + 1] - y[i];
        len[i] = std::hypot(h, dy);
        slope[i] = dy / len[i];  // d len_i / d y_{i+1}
        mean[i] = 0.5 * (y[i] + y[i + 1]);
    }

    std::vector<double> grad(p.interior_count());
    for (std::size_t j = 1; j <= grad.size(); ++j) {
        const std::size_t left = j - 1, right = j;
        if (functional == PathFunctional::Energy) {
            grad[j - 1] = 0.5 * len[left] + mean[left] * slope[left] + 0.5 * len[right] -
                          mean[right] * slope[right];
        } else {
            grad[j - 1] = slope[left] - slope[right];
        }
    }
    return grad;
}

}  // namespace hardbench
