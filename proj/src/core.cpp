#include "hardbench/core.hpp"

#include "hardbench/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hardbench {

std::string to_string(Direction d) {
    return d == Direction::Maximize ? "maximize" : "minimize";
}

double optimum_value(const OptimumSpec& spec) {
    return std::visit([](const auto& s) { return s.value; }, spec);
}

std::string optimum_kind(const OptimumSpec& spec) {
    struct Namer {
        std::string operator()(const PointSet&) const { return "point_set"; }
        std::string operator()(const Manifold&) const { return "manifold"; }
        std::string operator()(const FlatRegions&) const { return "flat_regions"; }
        std::string operator()(const Curve&) const { return "curve"; }
    };
    return std::visit(Namer{}, spec);
}

Problem::Problem(ProblemDefinition def) {
    if (def.id.empty()) throw ContractViolation("Problem: empty id");
    if (def.dimension == 0) throw ContractViolation("Problem '" + def.id + "': dimension must be positive");
    if (def.bounds.size() != def.dimension)
        throw ContractViolation("Problem '" + def.id + "': bounds/dimension mismatch");
    for (const auto& b : def.bounds) {
        if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || b.lo > b.hi)
            throw ContractViolation("Problem '" + def.id + "': bounds must be finite with lo <= hi");
    }
    for (std::size_t c : def.integer_coords) {
        if (c >= def.dimension) throw ContractViolation("Problem '" + def.id + "': integer coordinate out of range");
    }
    if (!def.objective) throw ContractViolation("Problem '" + def.id + "': missing objective");
    if (!def.expected_objective) {
        def.expected_objective = [obj = def.objective](PointView x) { return obj(x, NoiseKey{}); };
    }
    if (const auto* curve = std::get_if<Curve>(&def.optimum)) {
        if (!def.path) throw ContractViolation("Problem '" + def.id + "': Curve optimum needs a path frame");
        if (curve->ordinates.size() != def.dimension)
            throw ContractViolation("Problem '" + def.id + "': Curve ordinates/dimension mismatch");
    }
    def_ = std::make_shared<const ProblemDefinition>(std::move(def));
}

bool Problem::within_bounds(PointView x) const {
    if (x.size() != def_->dimension) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] >= def_->bounds[i].lo && x[i] <= def_->bounds[i].hi)) return false;
    }
    return true;
}

void Problem::check_point(PointView x, bool require_bounds) const {
    if (x.size() != def_->dimension) {
        throw ContractViolation("Problem '" + def_->id + "': expected " + std::to_string(def_->dimension) +
                                " coordinates, got " + std::to_string(x.size()));
    }
    if (require_bounds && !within_bounds(x))
        throw ContractViolation("Problem '" + def_->id + "': point outside bounds");
    for (std::size_t c : def_->integer_coords) {
        if (x[c] != std::round(x[c]))
            throw ContractViolation("Problem '" + def_->id + "': coordinate " + std::to_string(c) +
                                    " must be an integer");
    }
}

double Problem::evaluate(PointView x, NoiseKey key) const {
    check_point(x, true);
    return def_->objective(x, key);
}

double Problem::evaluate_expected(PointView x) const {
    check_point(x, true);
    return def_->expected_objective(x);
}

FeasibilityReport Problem::is_feasible(PointView x) const {
    check_point(x, false);
    const FeasibleRegion& region = def_->feasibility;
    FeasibilityReport report;
    if (region.unconstrained()) return report;

    bool groups_ok = region.groups.empty() || region.combinator == Combinator::IntersectionOfGroups;
    double group_violation = region.combinator == Combinator::UnionOfGroups && !region.groups.empty()
                                 ? std::numeric_limits<double>::infinity()
                                 : 0.0;
    for (const auto& group : region.groups) {
        double worst = -std::numeric_limits<double>::infinity();
        double violation = 0.0;
        for (const auto& g : group) {
            const double r = g(x);
            worst = std::max(worst, r);
            violation += std::max(0.0, r);
        }
        report.worst_residual.push_back(worst);
        const bool satisfied = worst <= 0.0;
        if (region.combinator == Combinator::UnionOfGroups) {
            groups_ok = groups_ok || satisfied;
            group_violation = std::min(group_violation, violation);
        } else {
            groups_ok = groups_ok && satisfied;
            group_violation += violation;
        }
    }

    bool equalities_ok = true;
    double eq_violation = 0.0;
    for (const auto& eq : region.equalities) {
        const double h = eq.residual(x);
        report.equality_residual.push_back(h);
        if (!(std::abs(h) <= eq.tolerance)) {
            equalities_ok = false;
            eq_violation += std::abs(h) - eq.tolerance;
        }
    }

    report.groups_satisfied = groups_ok;
    report.group_violation = groups_ok ? 0.0 : group_violation;
    report.feasible = groups_ok && equalities_ok;
    report.violation = report.feasible ? 0.0 : report.group_violation + eq_violation;
    return report;
}

Path Problem::to_path(PointView interior) const {
    if (!def_->path) throw ContractViolation("Problem '" + def_->id + "' is not a path problem");
    if (interior.size() != def_->dimension)
        throw ContractViolation("Problem '" + def_->id + "': interior node count mismatch");
    return Path(*def_->path, Vector(interior.begin(), interior.end()));
}

namespace {

double distance_to_box(PointView x, const std::vector<Interval>& box) {
    double sq = 0.0;
    for (std::size_t i = 0; i < x.size() && i < box.size(); ++i) {
        const double d = x[i] < box[i].lo ? box[i].lo - x[i] : (x[i] > box[i].hi ? x[i] - box[i].hi : 0.0);
        sq += d * d;
    }
    return std::sqrt(sq);
}

GapReport vector_gap(const Problem& problem, PointView x) {
    GapReport report;
    report.feasible = problem.is_feasible(x).feasible;
    const OptimumSpec& spec = problem.optimum();
    report.objective_gap = std::abs(problem.evaluate_expected(x) - optimum_value(spec));

    if (const auto* ps = std::get_if<PointSet>(&spec)) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& p : ps->points) {
            double sq = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) sq += (x[i] - p[i]) * (x[i] - p[i]);
            best = std::min(best, std::sqrt(sq));
        }
        report.location_gap = best;
    } else if (const auto* mf = std::get_if<Manifold>(&spec)) {
        report.location_gap = std::abs(mf->residual(x));
    } else if (const auto* fr = std::get_if<FlatRegions>(&spec)) {
        const bool inside = fr->contains(x);
        report.in_region = inside;
        if (inside) {
            report.location_gap = 0.0;
        } else if (fr->distance) {
            report.location_gap = fr->distance(x);
        } else {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& box : fr->boxes) best = std::min(best, distance_to_box(x, box));
            report.location_gap = best;
        }
    }
    return report;
}

}  // namespace

GapReport optimum_gap(const Problem& problem, PointView candidate) {
    if (problem.is_path())
        throw ContractViolation("optimum_gap: '" + problem.id() + "' expects a Path candidate");
    return vector_gap(problem, candidate);
}

GapReport optimum_gap(const Problem& problem, const Path& candidate) {
    if (!problem.is_path())
        throw ContractViolation("optimum_gap: '" + problem.id() + "' expects a vector candidate");
    const PathFrame& f = *problem.path_frame();
    if (candidate.frame.x_lo != f.x_lo || candidate.frame.x_hi != f.x_hi || candidate.frame.y_lo != f.y_lo ||
        candidate.frame.y_hi != f.y_hi || candidate.interior_count() != problem.dimension())
        throw ContractViolation("optimum_gap: path frame or node count does not match '" + problem.id() + "'");

    const PointView x(candidate.interior);
    GapReport report;
    report.feasible = problem.is_feasible(x).feasible;
    report.objective_gap = std::abs(problem.evaluate_expected(x) - optimum_value(problem.optimum()));
    if (const auto* curve = std::get_if<Curve>(&problem.optimum())) {
        double linf = 0.0, sq = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = std::abs(x[i] - curve->ordinates[i]);
            linf = std::max(linf, d);
            sq += d * d;
        }
        report.location_gap = linf;
        report.curve_l2 = std::sqrt(candidate.spacing() * sq);
    }
    return report;
}

}  // namespace hardbench
