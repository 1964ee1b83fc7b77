// bench: command-line front end for the benchmark suite.
//
//   bench list
//   bench describe <id>
//   bench eval <id> --x 1,2,3 [--seed S --eval-index I]
//   bench run --problem <id> --solver <id> --trials N --seed S [--config f.json]
//             [--out path --format csv|json]
//   bench verify
//
// Exit codes: 0 success, 1 verification failure, 2 usage error.

#include "hardbench/harness.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace hardbench;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw UsageError("cannot parse '" + item + "' as a number");
        }
        if (used != item.size() && item.find_first_not_of(" \t", used) != std::string::npos)
            throw UsageError("cannot parse '" + item + "' as a number");
        out.push_back(v);
    }
    return out;
}

ParamOverrides parse_sets(const std::vector<std::string>& sets) {
    ParamOverrides out;
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("--set expects key=value, got '" + s + "'");
        out[s.substr(0, eq)] = parse_list(s.substr(eq + 1)).at(0);
    }
    return out;
}

void describe(const Problem& p, std::ostream& os) {
    os << p.id() << ": " << p.title() << "\n";
    os << "  dimension:   " << p.dimension() << (p.is_path() ? " (interior path nodes)" : "") << "\n";
    os << "  direction:   " << to_string(p.direction()) << "\n";
    const auto& b = p.bounds();
    bool uniform = true;
    for (const auto& iv : b) uniform = uniform && iv.lo == b[0].lo && iv.hi == b[0].hi;
    os << "  bounds:      ";
    if (uniform) {
        os << "[" << b[0].lo << ", " << b[0].hi << "] per coordinate\n";
    } else {
        for (const auto& iv : b) os << "[" << iv.lo << ", " << iv.hi << "] ";
        os << "\n";
    }
    if (!p.integer_coords().empty()) {
        os << "  integer:     ";
        for (auto c : p.integer_coords()) os << "x" << c << " ";
        os << "\n";
    }
    const auto& f = p.feasibility();
    os << "  constraints: ";
    if (f.unconstrained()) {
        os << "none\n";
    } else {
        if (!f.groups.empty())
            os << f.groups.size() << " inequality group(s), "
               << (f.combinator == Combinator::UnionOfGroups ? "union" : "intersection") << "; ";
        os << f.equalities.size() << " equality constraint(s)\n";
    }
    os << "  optimum:     " << optimum_kind(p.optimum()) << ", value " << std::setprecision(12)
       << optimum_value(p.optimum()) << "\n";
    os << "  noise:       " << (p.deterministic() ? "none" : std::string(to_string(p.noise_policy()))) << "\n";
    if (!p.parameters().empty()) {
        os << "  parameters: ";
        for (const auto& [k, v] : p.parameters()) os << " " << k << "=" << v;
        os << "\n";
    }
}

void print_summary(const TrialTable& t, std::ostream& os) {
    const auto& a = t.aggregates;
    os << t.problem << " / " << t.solver << ": " << t.records.size() << " trials, success rate "
       << a.success_rate << ", best " << std::setprecision(10) << a.best_value << ", median " << a.median_value
       << ", worst " << a.worst_value;
    if (a.median_evals_to_success) os << ", median evals to success " << *a.median_evals_to_success;
    os << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hard optimization benchmark suite"};
    app.require_subcommand(1);

    auto* list_cmd = app.add_subcommand("list", "List benchmark and solver ids");

    std::string describe_id;
    std::vector<std::string> describe_sets;
    auto* describe_cmd = app.add_subcommand("describe", "Describe one benchmark");
    describe_cmd->add_option("id", describe_id, "Benchmark id")->required();
    describe_cmd->add_option("--set", describe_sets, "Parameter override key=value");

    std::string eval_id, eval_x, eval_policy = "per_evaluation";
    std::vector<std::string> eval_sets;
    std::uint64_t eval_seed = 0, eval_index = 0;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a benchmark at a point");
    eval_cmd->add_option("id", eval_id, "Benchmark id")->required();
    eval_cmd->add_option("--x", eval_x, "Comma-separated coordinates")->required();
    eval_cmd->add_option("--seed", eval_seed, "Noise run seed");
    eval_cmd->add_option("--eval-index", eval_index, "Noise evaluation index");
    eval_cmd->add_option("--set", eval_sets, "Parameter override key=value");
    eval_cmd->add_option("--noise-policy", eval_policy, "per_evaluation or fixed_per_run");

    std::string run_problem, run_solver = "de", run_config, run_out, run_format = "csv", run_policy;
    std::size_t run_trials_n = 10, run_max_evals = 0, run_threads = 0;
    std::uint64_t run_seed = 1;
    double run_eps_f = 0.0, run_eps_x = 0.0;
    std::vector<std::string> run_sets;
    auto* run_cmd = app.add_subcommand("run", "Run seeded solver trials on a benchmark");
    auto* o_problem = run_cmd->add_option("--problem", run_problem, "Benchmark id");
    auto* o_solver = run_cmd->add_option("--solver", run_solver, "Solver id: de, sa, nm, al+de, al+nm");
    auto* o_trials = run_cmd->add_option("--trials", run_trials_n, "Number of trials");
    auto* o_seed = run_cmd->add_option("--seed", run_seed, "Base seed; trial i uses seed + i");
    run_cmd->add_option("--config", run_config, "JSON file with a flat override map");
    auto* o_out = run_cmd->add_option("--out", run_out, "Report output path");
    auto* o_format = run_cmd->add_option("--format", run_format, "csv or json");
    auto* o_evals = run_cmd->add_option("--max-evals", run_max_evals, "Evaluation budget per trial");
    auto* o_eps_f = run_cmd->add_option("--eps-f", run_eps_f, "Objective-gap success threshold");
    auto* o_eps_x = run_cmd->add_option("--eps-x", run_eps_x, "Location-gap success threshold");
    auto* o_threads = run_cmd->add_option("--threads", run_threads, "Worker threads (0 = hardware)");
    auto* o_policy = run_cmd->add_option("--noise-policy", run_policy, "per_evaluation or fixed_per_run");
    run_cmd->add_option("--set", run_sets, "Problem parameter override key=value");

    auto* verify_cmd = app.add_subcommand("verify", "Run the oracle verification suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*list_cmd) {
            std::cout << "benchmarks:";
            for (const auto& id : catalog_ids()) std::cout << " " << id;
            std::cout << "\nsolvers:";
            for (const auto& id : solver_ids()) std::cout << " " << id;
            std::cout << "\n";
            return kExitOk;
        }

        if (*describe_cmd) {
            describe(make_problem(describe_id, parse_sets(describe_sets)), std::cout);
            return kExitOk;
        }

        if (*eval_cmd) {
            const Problem p = make_problem(eval_id, parse_sets(eval_sets), noise_policy_from_string(eval_policy));
            const auto x = parse_list(eval_x);
            double value = 0.0;
            FeasibilityReport feas;
            try {
                value = p.evaluate(x, NoiseKey{eval_seed, eval_index});
                feas = p.is_feasible(x);
            } catch (const ContractViolation& e) {
                throw UsageError(e.what());
            }
            nlohmann::ordered_json j;
            j["problem"] = p.id();
            j["value"] = value;
            j["feasible"] = feas.feasible;
            j["violation"] = feas.violation;
            std::cout << j.dump() << "\n";
            return kExitOk;
        }

        if (*run_cmd) {
            RunConfig cfg = run_config.empty() ? RunConfig{} : load_run_config(run_config);
            if (*o_problem) cfg.problem_id = run_problem;
            if (*o_solver) cfg.solver_id = run_solver;
            if (*o_trials) cfg.trials = run_trials_n;
            if (*o_seed) cfg.base_seed = run_seed;
            if (*o_out) cfg.output_path = run_out;
            if (*o_format) cfg.format = run_format;
            if (*o_evals) cfg.solver.max_evals = run_max_evals;
            if (*o_eps_f) cfg.thresholds.objective = run_eps_f;
            if (*o_eps_x) cfg.thresholds.location = run_eps_x;
            if (*o_threads) cfg.threads = run_threads;
            if (*o_policy) cfg.noise_policy = noise_policy_from_string(run_policy);
            for (const auto& [k, v] : parse_sets(run_sets)) cfg.params[k] = v;
            if (cfg.problem_id.empty()) throw UsageError("run: --problem is required (see `bench list`)");

            const TrialTable table = run_trials(cfg);
            if (cfg.output_path.empty()) {
                std::cout << emit_report(table, parse_report_format(cfg.format));
            } else {
                print_summary(table, std::cout);
            }
            return kExitOk;
        }

        if (*verify_cmd) {
            const VerifyReport report = verify_suite();
            for (const auto& c : report.checks) {
                std::printf("%s  %-70s measured %.3e  tol %.3e\n", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                            c.measured, c.tolerance);
            }
            const bool ok = report.all_passed();
            std::printf("%s\n", ok ? "all checks passed" : "verification FAILED");
            return ok ? kExitOk : kExitFailed;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailed;
    }
    return kExitUsage;
}
