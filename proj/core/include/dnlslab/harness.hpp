#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace dnlslab {

/// Parsed and validated experiment description. `raw` is the merged
/// config document (file plus --set overrides) echoed into artifacts.
struct ExperimentConfig {
    std::string experiment;  // simulate | scatter-rate | sdge-check |
                             // modspace-demo | mdfm-check | elemlem-check
    nlohmann::json raw;
};

/// Load a config file, apply dotted-path overrides ("model.power=3"),
/// and validate everything the experiment needs before any compute.
ExperimentConfig load_config(const std::string& experiment,
                             const std::filesystem::path& config_file,
                             const std::vector<std::string>& overrides);

struct RunArtifact {
    nlohmann::json summary;  // {schema_version, config, results, criteria}
    std::vector<std::string> series_columns;
    std::vector<std::vector<double>> series_rows;
};

/// Validation errors throw ConfigError before any compute; runtime
/// failures (blow-up aborts) are recorded in the summary.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

RunArtifact run_experiment(const ExperimentConfig& cfg);

/// Write series.tsv (tab-separated, '#' header, 17-significant-digit
/// floats) and summary.json under `out_dir`. Re-emitting is byte-identical.
void emit_report(const RunArtifact& artifact, const std::filesystem::path& out_dir);

/// 0: all criteria pass (or none defined); 1: some criterion failed.
int criteria_exit_code(const RunArtifact& artifact);

}  // namespace dnlslab
