#pragma once

#include "hardbench/benchmarks.hpp"
#include "hardbench/solvers.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hardbench {

struct SuccessThresholds {
    double objective = 1e-3;  // eps_f
    double location = 1e-2;   // eps_x
};

struct RunConfig {
    std::string problem_id;
    ParamOverrides params;
    NoisePolicy noise_policy = NoisePolicy::PerEvaluation;
    std::string solver_id = "de";
    SolverConfig solver;
    std::size_t trials = 10;
    std::uint64_t base_seed = 1;
    SuccessThresholds thresholds;
    std::string output_path;
    std::string format = "csv";
    std::size_t threads = 0;  // 0 selects the hardware concurrency

    void validate() const;
};

/// Applies a flat JSON override map. Keys naming run or solver settings are
/// consumed here; every other key becomes a problem parameter override.
void apply_overrides(RunConfig& cfg, const nlohmann::json& flat);
RunConfig load_run_config(const std::string& path);

struct TrialRecord {
    std::string problem;
    std::string solver;
    std::uint64_t seed = 0;
    Vector best_point;
    double best_value = 0.0;  // natural direction
    double objective_gap = 0.0;
    double location_gap = 0.0;
    std::optional<double> curve_l2;
    std::optional<bool> in_region;
    bool feasible = false;
    bool success = false;
    bool converged = true;
    std::size_t evals = 0;
    std::optional<std::size_t> evals_to_success;
    double wall_ms = 0.0;
    std::string noise_policy;  // "none" for deterministic problems

    friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct TrialAggregates {
    double success_rate = 0.0;
    double best_value = 0.0;
    double median_value = 0.0;
    double worst_value = 0.0;
    std::optional<double> median_evals_to_success;
    /// Only for isolated-point optima; distance-to-a-point statistics are
    /// meaningless for manifolds, flat regions and curves.
    std::optional<double> mean_location_gap;
};

struct TrialTable {
    std::string problem;
    std::string solver;
    std::string optimum_kind;
    Direction direction = Direction::Minimize;
    SuccessThresholds thresholds;
    std::vector<TrialRecord> records;
    TrialAggregates aggregates;
};

/// Success: objective gap within eps_f, feasible, and the location criterion
/// matching the optimum kind (membership, manifold residual, curve L-inf).
bool is_success(const GapReport& gap, const OptimumSpec& optimum, const SuccessThresholds& thresholds);

TrialAggregates aggregate(const std::vector<TrialRecord>& records, const std::string& optimum_kind,
                          Direction direction);

/// Runs cfg.trials seeded trials (trial i uses base_seed + i), possibly in
/// parallel; records are ordered by trial index. Writes the report when an
/// output path is set.
TrialTable run_trials(const RunConfig& cfg);

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool all_passed() const;
};

/// Build-time oracle suite: optimum self-checks, RK4 vs closed form, measured-table
/// agreement, quadrature vs closed form, gradients vs finite differences,
/// f6 region endpoints, noise invariants and the catenary energy.
VerifyReport verify_suite();

enum class ReportFormat { Csv, Json };
ReportFormat parse_report_format(const std::string& name);

std::string emit_report(const TrialTable& table, ReportFormat format);
nlohmann::ordered_json to_json(const TrialRecord& record);
TrialRecord record_from_json(const nlohmann::json& j);

}  // namespace hardbench
