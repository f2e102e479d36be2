#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mgs/candidates.hpp"
#include "mgs/carbon.hpp"
#include "mgs/config.hpp"
#include "mgs/optimize.hpp"
#include "mgs/simulate.hpp"

namespace mgs {

inline constexpr const char* kToolVersion = "0.3.0";

void write_metrics_json(const std::filesystem::path& path, const Composition& composition,
                        const SimulationMetrics& metrics);

void write_front_json(const std::filesystem::path& path, const ParetoFront& front,
                      std::span<const std::string> objective_names);

struct FrontFile {
    std::vector<std::string> objectives;
    ParetoFront front;
};
FrontFile front_from_json(const std::filesystem::path& path);

void write_evaluations_csv(const std::filesystem::path& path, std::span<const EvalRecord> log,
                           std::span<const std::string> objective_names);

void write_candidates_csv(const std::filesystem::path& path,
                          std::span<const ObjectivePoint> candidates,
                          const ScenarioConfig& config);

// Fixed-width table in the layout of the published composition tables.
std::string candidates_table(std::span<const ObjectivePoint> candidates,
                             const ScenarioConfig& config);

struct ProjectionLine {
    std::string label;
    Composition composition;
    EmissionProfile profile;
    std::vector<double> cumulative_tco2; // day 0..horizon
};

void write_projection_csv(const std::filesystem::path& path,
                          std::span<const ProjectionLine> lines);

void write_projection_json(const std::filesystem::path& path,
                           std::span<const ProjectionLine> lines,
                           std::optional<double> crossover_days);

void write_steps_csv(const std::filesystem::path& path, const Scenario& scenario,
                     std::span<const StepTrace> trace);

struct Manifest {
    std::string subcommand;
    std::string config_path;
    std::string config_hash; // fnv1a64 of the config file bytes, hex
    std::string site;
    std::optional<Composition> composition;
    std::optional<std::uint64_t> seed;
    int jobs = 1;
    std::string out_dir;
    std::string started_utc;
    double wall_time_seconds = 0.0;
};

void write_manifest(const std::filesystem::path& path, const Manifest& manifest);

} // namespace mgs
