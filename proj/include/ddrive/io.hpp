#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ddrive/pso_planner.hpp"
#include "ddrive/sim_harness.hpp"

namespace ddrive {

inline constexpr const char* kToolVersion = "0.1.0";

// Everything a command needs, read from one JSON document with per-module
// sections. Missing sections and fields fall back to the defaults; unknown
// keys are rejected.
struct ExperimentConfig {
    std::string preset = "simulation";  // or "experimental"
    std::optional<Workspace> workspace;
    std::optional<RandomWorkspaceConfig> random_workspace;
    SplineConfig spline;
    CostConfig cost;
    PsoConfig pso;
    ControllerConfig controller;
    RobotParams robot;
    SimConfig sim;
    int runs = 40;
    std::uint64_t base_seed = 0;
    std::vector<double> betas{50.0, 100.0, 150.0};
};

// Parses a config document. base_dir resolves a workspace {"file": ...}
// reference. A run manifest is accepted too (its resolved_config is loaded),
// so any command can be reproduced from the manifest it wrote.
ExperimentConfig load_config_text(const std::string& text,
                                  const std::filesystem::path& base_dir = ".");
ExperimentConfig load_config_file(const std::filesystem::path& file);

// Fully resolved snapshot (defaults materialized, workspace inlined).
nlohmann::json config_to_json(const ExperimentConfig& cfg);

// --- result serialization ---

nlohmann::json plan_result_to_json(const PlanResult& result);
nlohmann::json mc_report_to_json(const McReport& report);
nlohmann::json sweep_to_json(const std::vector<BetaReport>& reports);
nlohmann::json sim_result_to_json(const SimResult& result);

// Erases wall-clock fields (in place) so two runs with the same seeds compare
// byte-identical.
void strip_timing_fields(nlohmann::json& doc);

// --- CSV (formats documented in docs/formats.md) ---

void write_path_csv(const std::filesystem::path& file, const SampledPath& path);
SampledPath read_path_csv(const std::filesystem::path& file);
void write_history_csv(const std::filesystem::path& file, const PlanResult& result);
void write_trace_csv(const std::filesystem::path& file, const SimResult& result);
void write_duty_csv(const std::filesystem::path& file, const SimResult& result);
void write_mc_csv(const std::filesystem::path& file, const McReport& report);
void write_sweep_csv(const std::filesystem::path& file, const std::vector<BetaReport>& reports);

void write_text_file(const std::filesystem::path& file, const std::string& content);
std::string read_text_file(const std::filesystem::path& file);

// Run manifest: command, resolved config, seed, outputs. Written atomically
// (temp file + rename).
void write_manifest(const std::filesystem::path& dir, const std::string& command,
                    const nlohmann::json& resolved_config, std::uint64_t seed,
                    const std::vector<std::string>& outputs);

}  // namespace ddrive
