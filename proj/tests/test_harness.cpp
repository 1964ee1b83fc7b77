#include "hardbench/errors.hpp"
#include "hardbench/harness.hpp"

#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace hardbench;

namespace {

RunConfig quick(const std::string& problem, const std::string& solver, std::size_t trials, std::size_t evals) {
    RunConfig cfg;
    cfg.problem_id = problem;
    cfg.solver_id = solver;
    cfg.trials = trials;
    cfg.solver.max_evals = evals;
    return cfg;
}

std::size_t count_lines(const std::string& s) {
    std::size_t n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

TrialRecord sample_record() {
    TrialRecord r;
    r.problem = "f10";
    r.solver = "al+de";
    r.seed = 42;
    r.best_point = {0.1, -0.25, 1.0 / 3.0};
    r.best_value = -0.8134184149123;
    r.objective_gap = 1.2e-5;
    r.location_gap = 3.0e-3;
    r.curve_l2 = 1.5e-3;
    r.feasible = true;
    r.success = true;
    r.evals = 20000;
    r.evals_to_success = 6123;
    r.wall_ms = 12.5;
    r.noise_policy = "none";
    return r;
}

}  // namespace

TEST_SUITE("config") {
    TEST_CASE("flat overrides split into run, solver and problem keys") {
        RunConfig cfg;
        apply_overrides(cfg, nlohmann::json::parse(R"({"problem": "f3", "solver": "sa", "trials": 4, "seed": 9,
            "eps_f": 0.01, "max_evals": 1234, "F": 0.5, "al_growth": 5, "a": 2, "D": 3, "format": "json",
            "noise_policy": "fixed_per_run"})"));
        CHECK(cfg.problem_id == "f3");
        CHECK(cfg.solver_id == "sa");
        CHECK(cfg.trials == 4);
        CHECK(cfg.base_seed == 9);
        CHECK(cfg.thresholds.objective == 0.01);
        CHECK(cfg.solver.max_evals == 1234);
        CHECK(cfg.solver.de_weight == 0.5);
        CHECK(cfg.solver.al_growth == 5);
        CHECK(cfg.params == ParamOverrides{{"a", 2}, {"D", 3}});
        CHECK(cfg.format == "json");
        CHECK(cfg.noise_policy == NoisePolicy::FixedPerRun);
    }

    TEST_CASE("bad configs are usage errors") {
        RunConfig cfg;
        CHECK_THROWS_AS(apply_overrides(cfg, nlohmann::json::array()), UsageError);
        CHECK_THROWS_AS(apply_overrides(cfg, nlohmann::json::parse(R"({"trials": "many"})")), UsageError);
        CHECK_THROWS_AS(apply_overrides(cfg, nlohmann::json::parse(R"({"trials": 2.5})")), UsageError);
        CHECK_THROWS_AS(apply_overrides(cfg, nlohmann::json::parse(R"({"a": "wide"})")), UsageError);
        CHECK_THROWS_AS(load_run_config("/nonexistent/config.json"), UsageError);

        const auto path = std::filesystem::temp_directory_path() / "hardbench_bad_config.json";
        std::ofstream(path) << "{ not json";
        CHECK_THROWS_AS(load_run_config(path.string()), UsageError);
        std::filesystem::remove(path);
    }

    TEST_CASE("run config invariants") {
        RunConfig cfg = quick("f3", "de", 0, 1000);
        CHECK_THROWS_AS(cfg.validate(), UsageError);
        cfg.trials = 1;
        cfg.thresholds.objective = 0.0;
        CHECK_THROWS_AS(cfg.validate(), UsageError);
        cfg.thresholds.objective = 1e-3;
        cfg.format = "xml";
        CHECK_THROWS_AS(cfg.validate(), UsageError);
    }
}

TEST_SUITE("success") {
    TEST_CASE("variant-matched criteria") {
        const SuccessThresholds t{1e-3, 1e-2};
        GapReport g;
        g.objective_gap = 1e-4;
        g.location_gap = 0.5;
        CHECK(is_success(g, PointSet{}, t));
        CHECK_FALSE(is_success(g, Manifold{}, t));
        CHECK_FALSE(is_success(g, Curve{}, t));
        g.location_gap = 5e-3;
        CHECK(is_success(g, Manifold{}, t));
        CHECK(is_success(g, Curve{}, t));
        g.in_region = false;
        CHECK_FALSE(is_success(g, FlatRegions{}, t));
        g.in_region = true;
        CHECK(is_success(g, FlatRegions{}, t));
        g.feasible = false;
        CHECK_FALSE(is_success(g, PointSet{}, t));
        g.feasible = true;
        g.objective_gap = 2e-3;
        CHECK_FALSE(is_success(g, PointSet{}, t));
    }

    TEST_CASE("aggregates") {
        std::vector<TrialRecord> recs(4);
        const double values[] = {3, 1, 4, 2};
        for (int i = 0; i < 4; ++i) {
            recs[i].best_value = values[i];
            recs[i].location_gap = i;
            recs[i].success = i % 2 == 0;
            recs[i].evals_to_success = 100 * (i + 1);
        }
        const auto a = aggregate(recs, "point_set", Direction::Minimize);
        CHECK(a.success_rate == 0.5);
        CHECK(a.best_value == 1);
        CHECK(a.worst_value == 4);
        CHECK(a.median_value == 2.5);
        CHECK(a.median_evals_to_success.value() == 200);
        CHECK(a.mean_location_gap.value() == 1.5);

        const auto m = aggregate(recs, "flat_regions", Direction::Maximize);
        CHECK(m.best_value == 4);
        CHECK(m.worst_value == 1);
        CHECK_FALSE(m.mean_location_gap.has_value());
        CHECK_FALSE(aggregate(recs, "manifold", Direction::Minimize).mean_location_gap.has_value());
        CHECK_FALSE(aggregate(recs, "curve", Direction::Minimize).mean_location_gap.has_value());
    }
}

TEST_SUITE("trials") {
    TEST_CASE("f9 with al+nm") {
        RunConfig cfg = quick("f9", "al+nm", 10, 20000);
        cfg.base_seed = 7;
        const auto t = run_trials(cfg);
        CHECK(t.aggregates.success_rate >= 0.9);
        CHECK(t.optimum_kind == "curve");
        for (std::size_t i = 0; i < t.records.size(); ++i) {
            CHECK(t.records[i].seed == 7 + i);
            CHECK(t.records[i].curve_l2.has_value());
        }
    }

    TEST_CASE("f1 D=5 with de") {
        RunConfig cfg = quick("f1", "de", 10, 20000);
        cfg.params = {{"D", 5}};
        cfg.thresholds.objective = 1e-2;
        const auto t = run_trials(cfg);
        CHECK(t.aggregates.success_rate >= 0.8);
        CHECK(t.records[0].noise_policy == "per_evaluation");
    }

    TEST_CASE("records do not depend on the thread count") {
        RunConfig cfg = quick("f3", "de", 6, 2000);
        cfg.threads = 1;
        auto serial = run_trials(cfg);
        cfg.threads = 4;
        auto parallel = run_trials(cfg);
        for (auto* t : {&serial, &parallel})
            for (auto& r : t->records) r.wall_ms = 0.0;
        CHECK(serial.records == parallel.records);
    }

    TEST_CASE("unknown ids are usage errors") {
        CHECK_THROWS_AS(run_trials(quick("f99", "de", 1, 100)), UsageError);
        CHECK_THROWS_AS(run_trials(quick("f3", "pso", 1, 100)), UsageError);
        CHECK_THROWS_AS(run_trials(quick("f3", "de", 1, 0)), UsageError);
    }

    TEST_CASE("unwritable output is an I/O error") {
        RunConfig cfg = quick("f3", "de", 1, 200);
        cfg.output_path = "/nonexistent/dir/out.csv";
        CHECK_THROWS_AS(run_trials(cfg), std::runtime_error);
    }
}

TEST_SUITE("reports") {
    TEST_CASE("csv shape") {
        TrialTable empty;
        CHECK(emit_report(empty, ReportFormat::Csv) ==
              "problem,solver,seed,best_value,objective_gap,location_gap,feasible,evals,wall_ms,noise_policy\n");

        TrialTable t;
        t.records.assign(10, sample_record());
        const std::string csv = emit_report(t, ReportFormat::Csv);
        CHECK(count_lines(csv) == 11);
        std::istringstream in(csv);
        std::string header, row;
        std::getline(in, header);
        std::getline(in, row);
        CHECK(row == "f10,al+de,42,-0.81341841491230005,1.2e-05,0.0030000000000000001,true,20000,12.5,none");
    }

    TEST_CASE("json round trip") {
        const TrialRecord r = sample_record();
        CHECK(record_from_json(nlohmann::json::parse(to_json(r).dump())) == r);

        TrialRecord bare;
        bare.problem = "f6";
        bare.solver = "sa";
        bare.in_region = false;
        CHECK(record_from_json(nlohmann::json::parse(to_json(bare).dump())) == bare);
    }

    TEST_CASE("json report layout") {
        RunConfig cfg = quick("f6", "sa", 2, 1000);
        const auto t = run_trials(cfg);
        const auto j = nlohmann::ordered_json::parse(emit_report(t, ReportFormat::Json));
        std::vector<std::string> keys;
        for (const auto& [k, v] : j.items()) keys.push_back(k);
        CHECK(keys ==
              std::vector<std::string>{"problem", "solver", "optimum_kind", "direction", "thresholds", "records",
                                       "aggregates"});
        CHECK(j["records"].size() == 2);
        CHECK_FALSE(j["aggregates"].contains("mean_location_gap"));
        CHECK(emit_report(t, ReportFormat::Json) == emit_report(t, ReportFormat::Json));
        CHECK_THROWS_AS(parse_report_format("yaml"), UsageError);
    }
}

TEST_CASE("verify suite reports every oracle") {
    const auto report = verify_suite();
    CHECK(report.checks.size() > 20);
    for (const auto& c : report.checks) {
        CHECK(c.measured >= 0.0);
        CHECK(c.tolerance >= 0.0);
    }
}
