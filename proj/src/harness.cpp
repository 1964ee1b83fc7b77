#include "hardbench/harness.hpp"

#include "hardbench/errors.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

namespace hardbench {

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

void RunConfig::validate() const {
    if (trials < 1) throw UsageError("trial count must be >= 1");
    if (!(thresholds.objective > 0.0) || !(thresholds.location > 0.0))
        throw UsageError("success thresholds must be positive");
    parse_report_format(format);
}

namespace {

template <typename T>
T get_as(const nlohmann::json& v, const std::string& key) {
    try {
        return v.get<T>();
    } catch (const nlohmann::json::exception&) {
        throw UsageError("config key '" + key + "' has the wrong type");
    }
}

std::size_t get_count(const nlohmann::json& v, const std::string& key) {
    const double d = get_as<double>(v, key);
    if (d < 0.0 || d != std::floor(d)) throw UsageError("config key '" + key + "' must be a non-negative integer");
    return static_cast<std::size_t>(d);
}

}  // namespace

void apply_overrides(RunConfig& cfg, const nlohmann::json& flat) {
    if (!flat.is_object()) throw UsageError("config must be a flat JSON object");
    SolverConfig& s = cfg.solver;
    for (const auto& [key, v] : flat.items()) {
        if (key == "problem") cfg.problem_id = get_as<std::string>(v, key);
        else if (key == "solver") cfg.solver_id = get_as<std::string>(v, key);
        else if (key == "trials") cfg.trials = get_count(v, key);
        else if (key == "seed") cfg.base_seed = get_as<std::uint64_t>(v, key);
        else if (key == "eps_f") cfg.thresholds.objective = get_as<double>(v, key);
        else if (key == "eps_x") cfg.thresholds.location = get_as<double>(v, key);
        else if (key == "out") cfg.output_path = get_as<std::string>(v, key);
        else if (key == "format") cfg.format = get_as<std::string>(v, key);
        else if (key == "threads") cfg.threads = get_count(v, key);
        else if (key == "noise_policy") cfg.noise_policy = noise_policy_from_string(get_as<std::string>(v, key));
        else if (key == "max_evals") s.max_evals = get_count(v, key);
        else if (key == "population") s.population = get_count(v, key);
        else if (key == "F") s.de_weight = get_as<double>(v, key);
        else if (key == "CR") s.de_crossover = get_as<double>(v, key);
        else if (key == "sa_t0") s.sa_initial_temp = get_as<double>(v, key);
        else if (key == "sa_cooling") s.sa_cooling = get_as<double>(v, key);
        else if (key == "sa_moves") s.sa_moves_per_temp = get_count(v, key);
        else if (key == "sa_step") s.sa_step = get_as<double>(v, key);
        else if (key == "sa_restarts") s.sa_restarts = get_count(v, key);
        else if (key == "nm_step") s.nm_step = get_as<double>(v, key);
        else if (key == "nm_xtol") s.nm_xtol = get_as<double>(v, key);
        else if (key == "nm_ftol") s.nm_ftol = get_as<double>(v, key);
        else if (key == "polish") s.polish_fraction = get_as<double>(v, key);
        else if (key == "al_lambda0") s.al_lambda0 = get_as<double>(v, key);
        else if (key == "al_mu0") s.al_mu0 = get_as<double>(v, key);
        else if (key == "al_growth") s.al_growth = get_as<double>(v, key);
        else if (key == "al_outer") s.al_outer = get_count(v, key);
        else if (key == "al_tol_eq") s.al_tol_eq = get_as<double>(v, key);
        else if (key == "al_inner") s.al_inner_fraction = get_as<double>(v, key);
        else cfg.params[key] = get_as<double>(v, key);
    }
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw UsageError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    RunConfig cfg;
    apply_overrides(cfg, j);
    return cfg;
}

// ---------------------------------------------------------------------------
// Success and aggregates
// ---------------------------------------------------------------------------

bool is_success(const GapReport& gap, const OptimumSpec& optimum, const SuccessThresholds& t) {
    if (!gap.feasible || !(gap.objective_gap <= t.objective)) return false;
    if (std::holds_alternative<FlatRegions>(optimum)) return gap.in_region.value_or(false);
    if (std::holds_alternative<Manifold>(optimum) || std::holds_alternative<Curve>(optimum))
        return gap.location_gap <= t.location;
    return true;  // isolated points: location is reported, not required
}

namespace {

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

TrialAggregates aggregate(const std::vector<TrialRecord>& records, const std::string& optimum_kind,
                          Direction direction) {
    TrialAggregates a;
    if (records.empty()) return a;
    std::vector<double> scores, to_success, gaps;
    std::size_t successes = 0;
    for (const auto& r : records) {
        scores.push_back(normalized(direction, r.best_value));
        gaps.push_back(r.location_gap);
        if (r.success) {
            ++successes;
            if (r.evals_to_success) to_success.push_back(static_cast<double>(*r.evals_to_success));
        }
    }
    a.success_rate = static_cast<double>(successes) / static_cast<double>(records.size());
    a.best_value = normalized(direction, *std::min_element(scores.begin(), scores.end()));
    a.worst_value = normalized(direction, *std::max_element(scores.begin(), scores.end()));
    a.median_value = normalized(direction, median_of(scores));
    if (!to_success.empty()) a.median_evals_to_success = median_of(to_success);
    if (optimum_kind == "point_set") {
        double sum = 0.0;
        for (double g : gaps) sum += g;
        a.mean_location_gap = sum / static_cast<double>(gaps.size());
    }
    return a;
}

// ---------------------------------------------------------------------------
// Trials
// ---------------------------------------------------------------------------

namespace {

TrialRecord run_one(const Problem& problem, const RunConfig& cfg, std::size_t index) {
    SolverConfig scfg = cfg.solver;
    scfg.seed = cfg.base_seed + index;

    TrialRecord rec;
    rec.problem = problem.id();
    rec.solver = cfg.solver_id;
    rec.seed = scfg.seed;
    rec.noise_policy = problem.deterministic() ? "none" : std::string(to_string(problem.noise_policy()));

    const auto start = std::chrono::steady_clock::now();
    SolveResult result;
    try {
        result = solve(problem, cfg.solver_id, scfg);
    } catch (const SolverConvergenceError& e) {
        result = e.result();
        rec.converged = false;
    }
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    rec.best_point = result.best_point;
    rec.best_value = result.best_objective;
    rec.evals = result.evals;
    if (result.best_point.empty()) return rec;

    const GapReport gap = problem.is_path() ? optimum_gap(problem, problem.to_path(result.best_point))
                                            : optimum_gap(problem, result.best_point);
    rec.objective_gap = gap.objective_gap;
    rec.location_gap = gap.location_gap;
    rec.curve_l2 = gap.curve_l2;
    rec.in_region = gap.in_region;
    rec.feasible = gap.feasible;
    rec.success = is_success(gap, problem.optimum(), cfg.thresholds);
    if (rec.success) {
        const double target = normalized(problem.direction(), optimum_value(problem.optimum()));
        for (const auto& tp : result.trace) {
            if (tp.best - target <= cfg.thresholds.objective) {
                rec.evals_to_success = tp.evals;
                break;
            }
        }
        if (!rec.evals_to_success) rec.evals_to_success = rec.evals;
    }
    return rec;
}

}  // namespace

TrialTable run_trials(const RunConfig& cfg) {
    cfg.validate();
    const Problem problem = make_problem(cfg.problem_id, cfg.params, cfg.noise_policy);
    {
        const auto ids = solver_ids();
        if (std::find(ids.begin(), ids.end(), cfg.solver_id) == ids.end()) {
            std::string list;
            for (const auto& id : ids) list += (list.empty() ? "" : ", ") + id;
            throw UsageError("unknown solver '" + cfg.solver_id + "'; available: " + list);
        }
    }
    try {
        cfg.solver.validate(problem.dimension());
    } catch (const ContractViolation& e) {
        throw UsageError(e.what());
    }

    TrialTable table;
    table.problem = problem.id();
    table.solver = cfg.solver_id;
    table.optimum_kind = optimum_kind(problem.optimum());
    table.direction = problem.direction();
    table.thresholds = cfg.thresholds;
    table.records.resize(cfg.trials);

    std::size_t workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, cfg.trials);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < cfg.trials; i = next++) {
            try {
                table.records[i] = run_one(problem, cfg, i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
        work();
    }
    if (failure) std::rethrow_exception(failure);

    table.aggregates = aggregate(table.records, table.optimum_kind, table.direction);

    if (!cfg.output_path.empty()) {
        std::ofstream out(cfg.output_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write output file '" + cfg.output_path + "'");
        out << emit_report(table, parse_report_format(cfg.format));
        if (!out) throw std::runtime_error("failed writing output file '" + cfg.output_path + "'");
    }
    return table;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

ReportFormat parse_report_format(const std::string& name) {
    if (name == "csv") return ReportFormat::Csv;
    if (name == "json") return ReportFormat::Json;
    throw UsageError("unknown report format '" + name + "' (expected csv or json)");
}

namespace {

std::string fmt_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::ordered_json json_number(double v) {
    return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

double number_from_json(const nlohmann::json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

nlohmann::ordered_json to_json(const TrialRecord& r) {
    nlohmann::ordered_json j;
    j["problem"] = r.problem;
    j["solver"] = r.solver;
    j["seed"] = r.seed;
    j["best_point"] = r.best_point;
    j["best_value"] = json_number(r.best_value);
    j["objective_gap"] = json_number(r.objective_gap);
    j["location_gap"] = json_number(r.location_gap);
    j["curve_l2"] = r.curve_l2 ? json_number(*r.curve_l2) : nlohmann::ordered_json(nullptr);
    j["in_region"] = r.in_region ? nlohmann::ordered_json(*r.in_region) : nlohmann::ordered_json(nullptr);
    j["feasible"] = r.feasible;
    j["success"] = r.success;
    j["converged"] = r.converged;
    j["evals"] = r.evals;
    j["evals_to_success"] =
        r.evals_to_success ? nlohmann::ordered_json(*r.evals_to_success) : nlohmann::ordered_json(nullptr);
    j["wall_ms"] = r.wall_ms;
    j["noise_policy"] = r.noise_policy;
    return j;
}

TrialRecord record_from_json(const nlohmann::json& j) {
    TrialRecord r;
    try {
        r.problem = j.at("problem").get<std::string>();
        r.solver = j.at("solver").get<std::string>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.best_point = j.at("best_point").get<Vector>();
        r.best_value = number_from_json(j.at("best_value"));
        r.objective_gap = number_from_json(j.at("objective_gap"));
        r.location_gap = number_from_json(j.at("location_gap"));
        if (!j.at("curve_l2").is_null()) r.curve_l2 = j.at("curve_l2").get<double>();
        if (!j.at("in_region").is_null()) r.in_region = j.at("in_region").get<bool>();
        r.feasible = j.at("feasible").get<bool>();
        r.success = j.at("success").get<bool>();
        r.converged = j.at("converged").get<bool>();
        r.evals = j.at("evals").get<std::size_t>();
        if (!j.at("evals_to_success").is_null()) r.evals_to_success = j.at("evals_to_success").get<std::size_t>();
        r.wall_ms = j.at("wall_ms").get<double>();
        r.noise_policy = j.at("noise_policy").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("malformed trial record: ") + e.what());
    }
    return r;
}

std::string emit_report(const TrialTable& table, ReportFormat format) {
    if (format == ReportFormat::Csv) {
        std::ostringstream out;
        out << "problem,solver,seed,best_value,objective_gap,location_gap,feasible,evals,wall_ms,noise_policy\n";
        for (const auto& r : table.records) {
            out << r.problem << ',' << r.solver << ',' << r.seed << ',' << fmt_double(r.best_value) << ','
                << fmt_double(r.objective_gap) << ',' << fmt_double(r.location_gap) << ','
                << (r.feasible ? "true" : "false") << ',' << r.evals << ',' << fmt_double(r.wall_ms) << ','
                << r.noise_policy << '\n';
        }
        return out.str();
    }

    nlohmann::ordered_json j;
    j["problem"] = table.problem;
    j["solver"] = table.solver;
    j["optimum_kind"] = table.optimum_kind;
    j["direction"] = to_string(table.direction);
    j["thresholds"] = {{"eps_f", table.thresholds.objective}, {"eps_x", table.thresholds.location}};
    j["records"] = nlohmann::ordered_json::array();
    for (const auto& r : table.records) j["records"].push_back(to_json(r));
    const TrialAggregates& a = table.aggregates;
    nlohmann::ordered_json agg;
    agg["trials"] = table.records.size();
    agg["success_rate"] = a.success_rate;
    agg["best_value"] = json_number(a.best_value);
    agg["median_value"] = json_number(a.median_value);
    agg["worst_value"] = json_number(a.worst_value);
    agg["median_evals_to_success"] =
        a.median_evals_to_success ? nlohmann::ordered_json(*a.median_evals_to_success) : nlohmann::ordered_json(nullptr);
    if (a.mean_location_gap) agg["mean_location_gap"] = json_number(*a.mean_location_gap);
    j["aggregates"] = agg;
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Verification suite
// ---------------------------------------------------------------------------

bool VerifyReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

namespace {

CheckResult bound_check(std::string name, double measured, double tolerance) {
    return {std::move(name), measured, tolerance, measured <= tolerance};
}

}  // namespace

VerifyReport verify_suite() {
    VerifyReport report;
    auto add = [&](CheckResult c) { report.checks.push_back(std::move(c)); };

    // Optimum self-checks over the catalog at default parameters, plus a few
    // non-default shapes.
    std::vector<Problem> problems;
    for (const auto& id : catalog_ids()) problems.push_back(make_problem(id));
    problems.push_back(make_problem("f1", {{"D", 5}}));
    problems.push_back(make_problem("f2", {{"D", 3}}));
    problems.push_back(make_problem("f3", {{"a", 2}}));
    problems.push_back(make_problem("f5", {{"a", 2}}));
    problems.push_back(make_problem("f6", {{"D", 2}}));
    for (const auto& p : problems)
        for (auto& c : self_check(p)) add(std::move(c));

    // Step response: RK4 against the closed form, closed form against the data.
    const VibrationParams table;
    const OdeSamples rk = rk4_step_response(0.25, 2.0, table.t, 0.01);
    double rk_err = 0.0, data_err = 0.0;
    for (std::size_t i = 0; i < table.t.size(); ++i) {
        const double exact = analytic_step_response(0.25, 2.0, table.t[i]);
        rk_err = std::max(rk_err, std::abs(rk.y[i] - exact));
        data_err = std::max(data_err, std::abs(exact - table.y[i]));
    }
    add(bound_check("rk4 vs analytic step response (zeta=0.25, omega=2)", rk_err, 1e-6));
    add(bound_check("analytic step response vs measured table", data_err, 1.5e-3));

    // Oscillatory quadrature against pi/2 - atan(beta), and against the
    // k-dependent form pi/2 - atan(beta/k).
    double quad_err = 0.0, quad_err_k = 0.0;
    for (double beta : {0.0, 0.25, 0.5, 1.0, 2.0})
        for (int k : {1, 3, 5, 10}) {
            const double v = oscillatory_integral(beta, k, 1e-10).value;
            quad_err = std::max(quad_err, std::abs(v - closed_form_integral(beta)));
            quad_err_k = std::max(quad_err_k, std::abs(v - closed_form_integral(beta, k)));
        }
    add(bound_check("quadrature vs pi/2 - atan(beta) on 20-point (beta, k) grid", quad_err, 1e-8));
    add(bound_check("quadrature vs pi/2 - atan(beta/k) on 20-point (beta, k) grid", quad_err_k, 1e-8));
    add(bound_check("quadrature at (beta=0, k=1) vs pi/2",
                    std::abs(oscillatory_integral(0.0, 1, 1e-10).value - std::numbers::pi / 2.0), 1e-8));

    // Path gradients against central differences.
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double grad_err = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        Vector ys(8);
        for (double& y : ys) y = u(rng);
        const Path p(PathFrame{-1.0, 1.0, u(rng), u(rng)}, ys);
        for (auto fn : {PathFunctional::Length, PathFunctional::Energy, PathFunctional::LengthResidual}) {
            const Vector g = functional_gradient(p, fn);
            auto value = [&](const Path& q) {
                return fn == PathFunctional::Energy ? path_energy(q) : path_length_residual(q, 2.3504);
            };
            for (std::size_t i = 0; i < ys.size(); ++i) {
                Path hi = p, lo = p;
                hi.interior[i] += 1e-6;
                lo.interior[i] -= 1e-6;
                const double fd = (value(hi) - value(lo)) / 2e-6;
                grad_err = std::max(grad_err, std::abs(fd - g[i]) / std::max(1.0, std::abs(fd)));
            }
        }
    }
    add(bound_check("path gradients vs central differences (100 random paths, M=8)", grad_err, 1e-6));

    // f6 flat-region endpoints.
    const auto [lo, hi] = f6_flat_interval();
    add(bound_check("f6 inner endpoint vs 1.41299", std::abs(lo - 1.41299), 5e-6));
    add(bound_check("f6 outer endpoint vs 1.89714", std::abs(hi - 1.89714), 5e-6));

    // Catenary energy of the sampled reference.
    {
        const Catenary cat = solve_catenary(1.0, 2.0 * std::sinh(1.0));
        const Path p = Path::sample(PathFrame{-1.0, 1.0, 0.0, 0.0}, 256, cat);
        add(bound_check("catenary polyline energy (M=256) vs 1 - sinh(2)/2",
                        std::abs(path_energy(p) - (1.0 - std::sinh(2.0) / 2.0)), 5e-4));
    }

    // Noise: f1 origin invariance and uniformity.
    {
        const Problem f1 = make_problem("f1", {{"D", 5}});
        const Vector origin(5, 0.0);
        double worst = 0.0;
        for (std::uint64_t i = 0; i < 1000; ++i)
            worst = std::max(worst, std::abs(f1.evaluate(origin, NoiseKey{i * 7919 + 1, i}) + 1.0));
        add({"f1 origin equals -1 under 1000 noise keys", worst, 0.0, worst == 0.0});

        std::vector<double> bins(16, 0.0);
        const std::size_t draws = 100000;
        for (std::uint64_t i = 0; i < draws; ++i) bins[static_cast<std::size_t>(uniform(NoiseKey{42, i}, 0) * 16.0)] += 1.0;
        double chi2 = 0.0;
        const double expected = static_cast<double>(draws) / 16.0;
        for (double b : bins) chi2 += (b - expected) * (b - expected) / expected;
        add(bound_check("noise chi-square, 16 bins, 1e5 draws (critical 37.697 at 0.001)", chi2, 37.697));
    }
    return report;
}

}  // namespace hardbench
