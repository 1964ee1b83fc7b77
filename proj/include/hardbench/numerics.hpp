#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hardbench {

// ---------------------------------------------------------------------------
// Second-order step response
// ---------------------------------------------------------------------------

struct OdeSamples {
    std::vector<double> t;
    std::vector<double> y;
};

/// Integrates y''/w^2 + 2 z y'/w + y = u(t) (unit step at t = 0) from rest with
/// classical fixed-step RK4 and samples y at the requested times. Each sample
/// time is snapped to the nearest multiple of `h`.
OdeSamples rk4_step_response(double zeta, double omega, std::span<const double> t_grid,
                             double h = 0.01);

/// Closed-form underdamped step response, 0 < zeta < 1.
double analytic_step_response(double zeta, double omega, double t);

// ---------------------------------------------------------------------------
// Damped oscillatory integral over [0, inf)
// ---------------------------------------------------------------------------

struct QuadratureResult {
    double value = 0.0;
    double est_error = 0.0;
    int segments_used = 0;
};

/// Integral of sin(k x) exp(-beta x) / x over [0, inf).
///
/// The axis is cut at the zeros x_m = m pi / k, each half-period is integrated
/// with composite Gauss-Legendre, and the alternating series of half-period
/// contributions is either truncated (when the damped tail is provably below
/// `tol`) or summed by the Euler transformation of its partial sums.
///
/// Throws ConvergenceError if `tol` is not met within the segment budget.
QuadratureResult oscillatory_integral(double beta, int k, double tol = 1e-10);

/// pi/2 - atan(beta). Reference value for oscillatory_integral; never used to
/// compute an objective.
double closed_form_integral(double beta);

/// pi/2 - atan(beta / k), the value of the integral for general k.
double closed_form_integral(double beta, int k);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussRule& gauss_legendre(std::size_t n);

// ---------------------------------------------------------------------------
// Discretized curves
// ---------------------------------------------------------------------------

/// Fixed endpoints of a curve y(x) on [x_lo, x_hi].
struct PathFrame {
    double x_lo = 0.0;
    double x_hi = 1.0;
    double y_lo = 0.0;
    double y_hi = 0.0;
};

/// A curve sampled on a uniform grid: the two endpoints are pinned by the
/// frame, `interior` holds the M >= 1 free ordinates at spacing
/// h = (x_hi - x_lo) / (M + 1).
struct Path {
    PathFrame frame;
    std::vector<double> interior;

    Path() = default;
    Path(PathFrame f, std::vector<double> ys);

    std::size_t interior_count() const { return interior.size(); }
    double spacing() const;
    double abscissa(std::size_t node) const;   // node in [0, M+1]
    double ordinate(std::size_t node) const;   // node in [0, M+1]
    std::vector<double> nodes() const;         // all M+2 ordinates

    /// Samples y(x) at the interior abscissae.
    template <typename F>
    static Path sample(PathFrame f, std::size_t m, F&& y) {
        std::vector<double> ys(m);
        const double h = (f.x_hi - f.x_lo) / static_cast<double>(m + 1);
        for (std::size_t i = 0; i < m; ++i) ys[i] = y(f.x_lo + h * static_cast<double>(i + 1));
        return Path(f, std::move(ys));
    }
};

double path_length(const Path& p);
double path_energy(const Path& p);
double path_length_residual(const Path& p, double target_length);

enum class PathFunctional { Length, Energy, LengthResidual };

/// Exact gradient of the chosen discrete functional with respect to the
/// interior ordinates. LengthResidual has the same gradient as Length.
std::vector<double> functional_gradient(const Path& p, PathFunctional functional);

}  // namespace hardbench
