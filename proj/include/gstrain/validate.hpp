#pragma once

#include <string>
#include <vector>

#include "gstrain/config.hpp"

namespace gstrain {

inline constexpr const char* kArtifactVersion = "0.1.0";

struct CheckResult {
    std::string name;
    std::string status;  // PASS | FAIL | SKIP
    std::string detail;
};

struct RunManifest {
    std::string version;
    std::string config_hash;
    std::vector<CheckResult> checks;
    std::vector<std::pair<std::string, double>> timings_ms;

    int passed() const;
    int failed() const;
    int skipped() const;
    /// Stable manifest bytes. Timings go to a sidecar (timings_json) so two
    /// runs of the same config produce identical manifests.
    std::string to_json() const;
    std::string timings_json() const;
};

/// Execute every module-invariant check against the configured experiment.
/// Deterministic for a fixed config.
RunManifest run_validate(const ExperimentConfig& cfg);

/// manifest.json, timings.json and the CSV artifact set under dir.
void write_validate_artifacts(const RunManifest& man, const ExperimentConfig& cfg,
                              const std::string& dir);

}  // namespace gstrain
