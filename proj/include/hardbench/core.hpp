#pragma once

#include "hardbench/noise.hpp"
#include "hardbench/numerics.hpp"

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace hardbench {

using Vector = std::vector<double>;
using PointView = std::span<const double>;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

enum class Direction { Minimize, Maximize };

std::string to_string(Direction d);

/// Harness-facing score: objective for Minimize, negated objective for
/// Maximize. Lower is always better.
inline double normalized(Direction d, double objective) {
    return d == Direction::Maximize ? -objective : objective;
}

// ---------------------------------------------------------------------------
// Feasibility
// ---------------------------------------------------------------------------

/// Inequality residual; the constraint holds when g(x) <= 0.
using Residual = std::function<double(PointView)>;

enum class Combinator { IntersectionOfGroups, UnionOfGroups };

struct EqualityConstraint {
    std::string name;
    Residual residual;  // holds when |h(x)| <= tolerance
    double tolerance = 1e-3;
    std::function<Vector(PointView)> gradient;  // optional, for local refinement
};

/// Each group is satisfied when all of its residuals are <= 0. Groups are
/// combined by `combinator`; equalities (if any) must additionally hold.
struct FeasibleRegion {
    std::vector<std::vector<Residual>> groups;
    Combinator combinator = Combinator::IntersectionOfGroups;
    std::vector<EqualityConstraint> equalities;

    bool unconstrained() const { return groups.empty() && equalities.empty(); }
};

struct FeasibilityReport {
    bool feasible = true;
    std::vector<double> worst_residual;      // max_i g_i(x) per group
    std::vector<double> equality_residual;   // signed h(x) per equality
    /// Total violation for feasibility-rule ranking; 0 iff feasible. For a
    /// union this is the violation of the closest group.
    double violation = 0.0;
    /// Inequality part of `violation` alone.
    double group_violation = 0.0;
    bool groups_satisfied = true;
};

// ---------------------------------------------------------------------------
// Optimum specifications
// ---------------------------------------------------------------------------

struct PointSet {
    std::vector<Vector> points;
    double value = 0.0;
};

/// Optimal points satisfy residual(x) == 0. `probe` is one known point on the
/// manifold, used by self-checks.
struct Manifold {
    Residual residual;
    Vector probe;
    double value = 0.0;
};

/// Positive-measure optimum. `boxes` lists interval products where known;
/// `contains` is the authoritative membership test; `distance` is zero
/// inside and grows with separation from the set.
struct FlatRegions {
    std::vector<std::vector<Interval>> boxes;
    std::function<bool(PointView)> contains;
    std::function<double(PointView)> distance;
    double value = 0.0;
};

/// Reference curve ordinates on the problem's own interior grid.
struct Curve {
    Vector ordinates;
    double value = 0.0;
};

using OptimumSpec = std::variant<PointSet, Manifold, FlatRegions, Curve>;

double optimum_value(const OptimumSpec& spec);
std::string optimum_kind(const OptimumSpec& spec);

struct GapReport {
    double objective_gap = 0.0;
    /// Euclidean distance (PointSet), |r(x)| (Manifold), distance to the
    /// region (FlatRegions), L-infinity node deviation (Curve).
    double location_gap = 0.0;
    bool feasible = true;
    std::optional<bool> in_region;    // FlatRegions only
    std::optional<double> curve_l2;   // Curve only: sqrt(h * sum d_i^2)
};

// ---------------------------------------------------------------------------
// Problem
// ---------------------------------------------------------------------------

using Objective = std::function<double(PointView, NoiseKey)>;

struct ProblemDefinition {
    std::string id;
    std::string title;
    std::size_t dimension = 0;
    std::vector<Interval> bounds;
    Direction direction = Direction::Minimize;
    Objective objective;
    /// Noise-free objective for gap reporting; defaults to `objective` with a
    /// zero key. Noisy problems set this to the expected-noise evaluation.
    std::function<double(PointView)> expected_objective;
    FeasibleRegion feasibility;
    OptimumSpec optimum;
    std::vector<std::size_t> integer_coords;
    bool deterministic = true;
    NoisePolicy noise_policy = NoisePolicy::PerEvaluation;
    /// Optional analytic gradient of the objective, used internally by local
    /// refinement. Not part of the benchmark contract.
    std::function<Vector(PointView)> gradient;
    /// Set for curve problems: the decision vector is the interior ordinates.
    std::optional<PathFrame> path;
    /// Named parameter values, for describe/reporting.
    std::vector<std::pair<std::string, double>> parameters;
};

/// Immutable benchmark. Cheap to copy; all queries are const and thread-safe.
class Problem {
public:
    explicit Problem(ProblemDefinition def);

    const std::string& id() const { return def_->id; }
    const std::string& title() const { return def_->title; }
    std::size_t dimension() const { return def_->dimension; }
    const std::vector<Interval>& bounds() const { return def_->bounds; }
    Direction direction() const { return def_->direction; }
    const FeasibleRegion& feasibility() const { return def_->feasibility; }
    const OptimumSpec& optimum() const { return def_->optimum; }
    const std::vector<std::size_t>& integer_coords() const { return def_->integer_coords; }
    bool deterministic() const { return def_->deterministic; }
    NoisePolicy noise_policy() const { return def_->noise_policy; }
    const std::optional<PathFrame>& path_frame() const { return def_->path; }
    bool is_path() const { return def_->path.has_value(); }
    const std::vector<std::pair<std::string, double>>& parameters() const { return def_->parameters; }
    const std::function<Vector(PointView)>& gradient() const { return def_->gradient; }

    /// Throws ContractViolation on dimension mismatch, out-of-bounds points,
    /// or non-integral values in integer coordinates.
    double evaluate(PointView x, NoiseKey key) const;
    double evaluate_expected(PointView x) const;
    FeasibilityReport is_feasible(PointView x) const;

    bool within_bounds(PointView x) const;
    Path to_path(PointView interior) const;

private:
    void check_point(PointView x, bool require_bounds) const;

    std::shared_ptr<const ProblemDefinition> def_;
};

/// Gap of a vector candidate; the problem must not be a path problem.
GapReport optimum_gap(const Problem& problem, PointView candidate);
/// Gap of a curve candidate; the problem must be a path problem with the
/// same frame and node count.
GapReport optimum_gap(const Problem& problem, const Path& candidate);

}  // namespace hardbench
