#include "hardbench/benchmarks.hpp"
#include "hardbench/errors.hpp"
#include "hardbench/solvers.hpp"

#include "doctest.h"

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

using namespace hardbench;

namespace {

SolverConfig budget(std::size_t evals, std::uint64_t seed = 1) {
    SolverConfig cfg;
    cfg.max_evals = evals;
    cfg.seed = seed;
    return cfg;
}

Problem bowl() {
    ProblemDefinition d;
    d.id = "bowl";
    d.dimension = 2;
    d.bounds = {{-2, 2}, {-2, 2}};
    d.objective = [](PointView x, NoiseKey) { return x[0] * x[0] + 3 * x[1] * x[1]; };
    d.optimum = PointSet{{{0, 0}}, 0.0};
    return Problem(d);
}

}  // namespace

TEST_CASE("feasibility rules") {
    const Candidate feas5{5, 0, true}, infeas1{1, 0.2, false};
    CHECK(feasibility_compare(feas5, infeas1) == std::weak_ordering::less);
    CHECK(feasibility_compare(infeas1, feas5) == std::weak_ordering::greater);
    CHECK(feasibility_compare({1, 0, true}, {2, 0, true}) == std::weak_ordering::less);
    CHECK(feasibility_compare({9, 0.1, false}, {0, 0.3, false}) == std::weak_ordering::less);
    CHECK(feasibility_compare({1, 0, true}, {1, 0, true}) == std::weak_ordering::equivalent);
}

TEST_CASE("config validation") {
    const Problem p = bowl();
    CHECK_THROWS_AS(differential_evolution(p, budget(0)), ContractViolation);
    SolverConfig cfg = budget(100);
    cfg.population = 200;
    CHECK_THROWS_AS(differential_evolution(p, cfg), ContractViolation);
    cfg = budget(1000);
    cfg.al_growth = 1.0;
    CHECK_THROWS_AS(cfg.validate(2), ContractViolation);
    CHECK(SolverConfig{}.population_for(3) == 30);
    CHECK(SolverConfig{}.population_for(1) == 10);
    CHECK_THROWS_AS(solve(p, "pso", budget(100)), UsageError);
    CHECK(solver_ids() == std::vector<std::string>{"de", "sa", "nm", "al+de", "al+nm"});
}

TEST_SUITE("differential evolution") {
    TEST_CASE("f7 recovers the true parameters") {
        const auto r = differential_evolution(make_problem("f7"), budget(20000, 1));
        CHECK(std::abs(r.best_point[0] - 0.25) <= 0.02);
        CHECK(std::abs(r.best_point[1] - 2.0) <= 0.02);
        CHECK(r.evals <= 20000);
    }

    TEST_CASE("abs_sum D=5") {
        const auto r = differential_evolution(make_problem("abs_sum", {{"D", 5}}), budget(10000));
        CHECK(r.best_value <= 1e-3);
    }

    TEST_CASE("f5 reaches the manifold") {
        const Problem f5 = make_problem("f5", {{"D", 3}, {"a", 1}, {"b", 1}});
        const auto r = differential_evolution(f5, budget(30000));
        const auto g = optimum_gap(f5, r.best_point);
        CHECK(g.objective_gap <= 1e-3);
        CHECK(g.location_gap <= 5e-2);
        CHECK(g.feasible);
    }

    TEST_CASE("f8 integer coordinate stays integral") {
        const Problem f8 = make_problem("f8");
        const auto r = differential_evolution(f8, budget(3000));
        CHECK(r.best_point[1] == std::round(r.best_point[1]));
        CHECK(r.best_point[0] <= 1e-6);
        CHECK(r.best_objective == doctest::Approx(std::acos(-1.0) / 2).epsilon(1e-9));
        CHECK(r.best_value == -r.best_objective);
    }
}

TEST_SUITE("simulated annealing") {
    TEST_CASE("f6 lands in a flat region") {
        const Problem f6 = make_problem("f6", {{"D", 1}});
        const auto r = simulated_annealing(f6, budget(5000));
        CHECK(optimum_gap(f6, r.best_point).in_region.value());
    }

    TEST_CASE("f3 within 5 percent") {
        const auto r = simulated_annealing(make_problem("f3", {{"D", 2}, {"a", 1}}), budget(10000));
        CHECK(r.feasibility.feasible);
        CHECK(r.best_value <= 1.05);
    }

    TEST_CASE("f4 reaches a corner peak") {
        SolverConfig cfg = budget(50000);
        cfg.sa_restarts = 4;
        const auto r = simulated_annealing(make_problem("f4"), cfg);
        CHECK(r.best_objective >= 190.0);
        CHECK(r.feasibility.feasible);
    }
}

TEST_SUITE("nelder-mead") {
    TEST_CASE("quadratic bowl") {
        const double start[] = {1, 1};
        SolverConfig cfg = budget(5000);
        cfg.nm_step = 0.2;
        const auto r = nelder_mead_polish(bowl(), start, cfg);
        CHECK(std::hypot(r.best_point[0], r.best_point[1]) <= 1e-6);
    }

    TEST_CASE("f7 from a nearby start") {
        const double start[] = {0.3, 1.8};
        const auto r = nelder_mead_polish(make_problem("f7"), start, budget(4000));
        CHECK(std::abs(r.best_point[0] - 0.25) <= 5e-3);
        CHECK(std::abs(r.best_point[1] - 2.0) <= 5e-3);
    }

    TEST_CASE("f9 from a random path") {
        const Problem f9 = make_problem("f9", {{"M", 16}});
        std::vector<double> start(16);
        for (std::size_t i = 0; i < 16; ++i) start[i] = uniform(NoiseKey{3, i}, 0) * 2.0;
        const auto r = nelder_mead_polish(f9, start, budget(20000));
        CHECK(r.best_value <= std::sqrt(2.0) + 1e-3);
    }

    TEST_CASE("best value never increases") {
        const double start[] = {1.5, -1.0};
        const auto r = nelder_mead_polish(bowl(), start, budget(500));
        CHECK(r.best_value <= 1.5 * 1.5 + 3.0);
        for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i].best <= r.trace[i - 1].best);
    }
}

TEST_SUITE("augmented lagrangian") {
    TEST_CASE("f10 hanging rope") {
        const Problem f10 = make_problem("f10");
        const auto r = augmented_lagrangian_path(f10, InnerSolver::DifferentialEvolution, budget(20000));
        REQUIRE(r.best_path.has_value());
        CHECK(std::abs(r.best_objective - (1.0 - std::sinh(2.0) / 2.0)) <= 1e-2);
        CHECK(std::abs(path_length_residual(*r.best_path, 2.3504)) <= 1e-3);
        CHECK(r.feasibility.feasible);
    }

    TEST_CASE("taut rope is nearly flat") {
        const Problem taut = make_problem("f10", {{"L", 2.0 + 1e-6}});
        const auto r = augmented_lagrangian_path(taut, InnerSolver::NelderMead, budget(20000));
        CHECK(r.best_objective <= 1e-6);
        CHECK(r.best_objective >= -1e-2);
        for (double y : r.best_point) CHECK(std::abs(y) <= 5e-2);
    }

    TEST_CASE("no equality reduces to plain minimization") {
        const Problem f9 = make_problem("f9");
        const auto r = augmented_lagrangian_path(f9, InnerSolver::NelderMead, budget(10000));
        CHECK(r.best_value <= std::sqrt(2.0) + 1e-6);
        CHECK(optimum_gap(f9, *r.best_path).location_gap <= 1e-3);
    }

    TEST_CASE("non-convergence carries the best iterate") {
        SolverConfig cfg = budget(20000);
        cfg.al_outer = 1;
        cfg.al_tol_eq = 1e-14;
        cfg.al_mu0 = 1e-3;
        try {
            augmented_lagrangian_path(make_problem("f10"), InnerSolver::NelderMead, cfg);
            FAIL("expected a convergence error");
        } catch (const SolverConvergenceError& e) {
            CHECK(e.result().best_path.has_value());
            CHECK(e.result().evals <= 20000);
            CHECK(e.est_error() > 0.0);
        }
    }

    TEST_CASE("requires a path problem") {
        CHECK_THROWS_AS(augmented_lagrangian_path(make_problem("f3"), InnerSolver::NelderMead, budget(1000)),
                        ContractViolation);
    }
}

TEST_SUITE("properties") {
    TEST_CASE("deterministic given the seed, also under concurrency") {
        const Problem f3 = make_problem("f3");
        for (const auto& id : {"de", "sa", "nm"}) {
            const auto a = solve(f3, id, budget(3000, 5));
            SolveResult b, c;
            {
                std::jthread t1([&] { b = solve(f3, id, budget(3000, 5)); });
                std::jthread t2([&] { c = solve(f3, id, budget(3000, 6)); });
            }
            CAPTURE(id);
            CHECK(a.best_point == b.best_point);
            CHECK(a.best_value == b.best_value);
            CHECK(a.evals == b.evals);
        }
        const Problem f1 = make_problem("f1");
        CHECK(solve(f1, "de", budget(2000, 3)).best_value == solve(f1, "de", budget(2000, 3)).best_value);
    }

    TEST_CASE("trace is non-increasing and ends at the best value") {
        for (const auto& id : {"de", "sa", "nm"}) {
            const auto r = solve(make_problem("f3"), id, budget(4000, 2));
            REQUIRE_FALSE(r.trace.empty());
            for (std::size_t i = 1; i < r.trace.size(); ++i) {
                CHECK(r.trace[i].best <= r.trace[i - 1].best);
                CHECK(r.trace[i].evals >= r.trace[i - 1].evals);
            }
            CHECK(r.trace.back().best == r.best_value);
            CHECK(r.evals <= 4000);
        }
    }

    TEST_CASE("every evaluated point lies within bounds") {
        const Problem base = make_problem("f2", {{"D", 3}});
        std::atomic<int> outside{0}, calls{0};
        ProblemDefinition d;
        d.id = "watched";
        d.dimension = 3;
        d.bounds = base.bounds();
        d.objective = [&, base](PointView x, NoiseKey) {
            ++calls;
            if (!base.within_bounds(x)) ++outside;
            return formulas::f2(x);
        };
        d.optimum = base.optimum();
        const Problem watched(d);
        for (const auto& id : {"de", "sa", "nm"}) solve(watched, id, budget(3000));
        CHECK(calls.load() > 0);
        CHECK(outside.load() == 0);
    }

    TEST_CASE("maximizing f4 equals minimizing its negation") {
        const Problem f4 = make_problem("f4", {{"N", 5}, {"a", 2}});
        ProblemDefinition d;
        d.id = "neg_f4";
        d.dimension = 2;
        d.bounds = f4.bounds();
        d.direction = Direction::Minimize;
        d.objective = [f4](PointView x, NoiseKey k) { return -f4.evaluate(x, k); };
        d.feasibility = f4.feasibility();
        d.optimum = PointSet{std::get<PointSet>(f4.optimum()).points, -optimum_value(f4.optimum())};
        const Problem neg(d);
        for (const auto& id : {"de", "sa"}) {
            const auto a = solve(f4, id, budget(4000, 8));
            const auto b = solve(neg, id, budget(4000, 8));
            CHECK(a.best_point == b.best_point);
            CHECK(a.best_value == b.best_value);
            CHECK(a.best_objective == -b.best_objective);
        }
    }

    TEST_CASE("noisy problems reserve the re-evaluation budget") {
        const auto r = solve(make_problem("f1"), "de", budget(1000));
        CHECK(r.reevaluations == 32);
        CHECK(r.evals <= 1000);
    }
}
