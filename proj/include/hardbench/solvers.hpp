#pragma once

#include "hardbench/core.hpp"
#include "hardbench/errors.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hardbench {

struct SolverConfig {
    std::size_t population = 0;  // 0 selects 10 * dimension (at least 10)
    std::size_t max_evals = 20000;

    // Differential evolution, rand/1/bin.
    double de_weight = 0.7;
    double de_crossover = 0.9;

    // Simulated annealing. Zero temperature / cooling / moves select values
    // derived from the problem and the budget.
    double sa_initial_temp = 0.0;
    double sa_cooling = 0.0;
    std::size_t sa_moves_per_temp = 0;
    double sa_step = 0.1;  // initial proposal scale, fraction of bound width
    std::size_t sa_restarts = 1;

    // Nelder-Mead.
    double nm_step = 0.05;  // initial simplex edge, fraction of bound width
    double nm_xtol = 1e-10;
    double nm_ftol = 1e-14;

    /// Share of the budget spent on a Nelder-Mead polish after DE or SA.
    double polish_fraction = 0.1;

    // Augmented Lagrangian.
    double al_lambda0 = 0.0;
    double al_mu0 = 10.0;
    double al_growth = 10.0;
    std::size_t al_outer = 30;
    double al_tol_eq = 1e-6;
    double al_inner_fraction = 0.3;  // budget for the global inner solver

    std::uint64_t seed = 1;

    std::size_t population_for(std::size_t dimension) const;
    /// Throws ContractViolation when the invariants do not hold.
    void validate(std::size_t dimension) const;
};

/// Solver-side view of one evaluated point. `value` is direction-normalized
/// (lower is better).
struct Candidate {
    double value = 0.0;
    double violation = 0.0;
    bool feasible = true;
};

/// Feasibility rules: feasible beats infeasible, feasibles compare by value,
/// infeasibles by total violation. `less` means `a` is better.
std::weak_ordering feasibility_compare(const Candidate& a, const Candidate& b);

struct TracePoint {
    std::size_t evals = 0;
    double best = 0.0;  // best feasible normalized value so far; +inf before any
};

struct SolveResult {
    std::string solver;
    Vector best_point;
    std::optional<Path> best_path;
    double best_value = 0.0;       // direction-normalized
    double best_objective = 0.0;   // natural direction
    FeasibilityReport feasibility;
    std::size_t evals = 0;
    std::size_t reevaluations = 0;  // noisy problems: draws averaged into best_value
    std::vector<TracePoint> trace;
};

/// Raised by augmented_lagrangian_path when the outer-iteration cap is hit
/// before the equality residual meets its tolerance. Carries the best iterate.
class SolverConvergenceError : public ConvergenceError {
public:
    SolverConvergenceError(const std::string& what, SolveResult result, double residual)
        : ConvergenceError(what, result.best_value, residual), result_(std::move(result)) {}
    const SolveResult& result() const noexcept { return result_; }

private:
    SolveResult result_;
};

SolveResult differential_evolution(const Problem& problem, const SolverConfig& cfg);
SolveResult simulated_annealing(const Problem& problem, const SolverConfig& cfg);
SolveResult nelder_mead_polish(const Problem& problem, PointView start, const SolverConfig& cfg);

enum class InnerSolver { DifferentialEvolution, NelderMead };
SolveResult augmented_lagrangian_path(const Problem& problem, InnerSolver inner, const SolverConfig& cfg);

/// "de", "sa", "nm", "al+de", "al+nm".
std::vector<std::string> solver_ids();
/// Dispatch by id. "nm" starts from a seeded uniform point in the bounds.
/// Throws UsageError for an unknown id.
SolveResult solve(const Problem& problem, std::string_view solver_id, const SolverConfig& cfg);

}  // namespace hardbench
