#pragma once

// Scenario driver behind the bohmtraj tool.  A scenario is configured by one
// JSON document (schema in docs/config.md), optionally patched by
// "section.key" overrides, and writes its artifacts plus a manifest with
// SHA-256 checksums into the output directory.

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "bohm/errors.hpp"
#include "bohm/potential.hpp"

namespace bohm {

/// Invalid or inconsistent configuration (CLI exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

enum class ScenarioKind { free_gaussian, superposition, effective_well, reaction_2d };

std::string to_string(ScenarioKind kind);
ScenarioKind scenario_from_string(const std::string& name);

struct PhysicsConfig {
    double mass = 1.0;
    double hbar = 1.0;
    double sigma0 = 1.0;
    double sigma0_y = 0.7071067811865476;  // reaction_2d: transverse ground-state width
    double x0 = 0.0;   // free: packet center; superposition: half separation; well: distance from the wall
    double y0 = 0.0;   // reaction_2d: transverse offset from the valley floor
    double v0 = 1.0;
    bool include_well = true;  // effective_well ablation switch
    ModelPes2D pes;
};

struct NumericsConfig {
    std::vector<double> lower{-40.0};
    std::vector<double> upper{40.0};
    std::vector<std::size_t> points{1024};
    double dt = 1e-3;
    double t_final = 10.0;
    double tol = 1e-8;
    std::size_t snapshot_stride = 100;
    std::size_t n_trajectories = 21;
    std::size_t n_times = 201;
    double absorber_width = 0.0;
    double absorber_strength = 0.0;
    double huygens_below = 0.1;     // regime thresholds in units of tau
    double fraunhofer_above = 10.0;
};

struct OutputConfig {
    std::string directory = "out";
    std::vector<std::string> formats{"csv", "json", "svg"};
    std::uint64_t seed = 1;
    bool snapshots = false;
};

struct ScenarioConfig {
    ScenarioKind scenario = ScenarioKind::free_gaussian;
    PhysicsConfig physics;
    NumericsConfig numerics;
    OutputConfig outputs;

    bool wants(const std::string& format) const;
    /// Throws ConfigError on inconsistent values.
    void validate() const;
};

/// Unknown keys and wrong types raise ConfigError.
ScenarioConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ScenarioConfig& config);

/// Built-in defaults for each scenario (also shipped under configs/).
ScenarioConfig default_config(ScenarioKind kind);

/// Sets the value at "a.b.c" in `doc`.  The text is parsed as JSON when
/// possible (numbers, booleans, arrays) and kept as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& dotted_key, const std::string& value);

struct ScenarioResult {
    nlohmann::json report;
    std::vector<std::filesystem::path> artifacts;  // relative to the output directory
    std::vector<std::string> failed_checks;

    bool checks_passed() const { return failed_checks.empty(); }
};

ScenarioResult run_free_gaussian(const ScenarioConfig& config);
ScenarioResult run_superposition(const ScenarioConfig& config);
ScenarioResult run_effective_well(const ScenarioConfig& config);
ScenarioResult run_reaction_2d(const ScenarioConfig& config);

/// Dispatches on config.scenario, then writes manifest.json.
ScenarioResult run_scenario(const ScenarioConfig& config);

/// Lower-case hex SHA-256 of a file.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace bohm
