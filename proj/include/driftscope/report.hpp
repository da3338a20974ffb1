#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "driftscope/baseline.hpp"
#include "driftscope/config.hpp"
#include "driftscope/divergence.hpp"
#include "driftscope/harness.hpp"
#include "driftscope/noise.hpp"

namespace driftscope {

/// Outcome of comparing target images against a persisted baseline:
/// per-channel PSI, advisory verdicts, and any requested companion
/// divergences on the same bins.
struct DriftReport {
    std::string baseline_source;
    std::string target_source;
    std::vector<Channel> channels;
    std::vector<double> psi;                           // parallel to channels
    std::vector<DriftLabel> labels;
    Thresholds thresholds;
    std::vector<DivergenceKind> companions;
    std::vector<std::vector<double>> companion_values; // [companion][channel]
    std::vector<std::string> skipped;                  // unloadable targets
    int bins = 0;
    double epsilon = 0.0;
};

/// Pools the target images per channel, bins them with the baseline's edges
/// and epsilon, and computes PSI plus companions. Targets must match the
/// baseline's channel structure.
DriftReport compare_with_baseline(const BaselineFile& baseline,
                                  const std::vector<std::filesystem::path>& targets,
                                  const std::string& target_desc, const Thresholds& thresholds,
                                  const std::vector<DivergenceKind>& companions = {});

// NoiseSpec <-> the CLI configuration format
// (keys: kind, mean, variance, amount, proportion, seed).
void to_json(nlohmann::json& j, const NoiseSpec& spec);
void from_json(const nlohmann::json& j, NoiseSpec& spec);

/// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double value);

/// Every JSON report is {"tool_version", "config_echo", "results"}.
nlohmann::json report_json(const DriftReport& report, const RunConfig& config);
nlohmann::json sweep_json(const SweepResult& sweep, const RunConfig& config);
nlohmann::json corpus_json(const CorpusResult& corpus, const RunConfig& config);

// Long-format CSV with fixed headers. Sweeps: "noise_level,channel,psi"
// (Gaussian/speckle) or "amount,proportion,channel,psi" (salt-and-pepper).
// Corpus: "image,channel,psi" rows, a blank line, then the per-channel
// summary block. Compare: one row per channel.
std::string report_csv(const DriftReport& report, const RunConfig& config);
std::string sweep_csv(const SweepResult& sweep, const RunConfig& config);
std::string corpus_csv(const CorpusResult& corpus, const RunConfig& config);

/// Writes via a temp file in the destination directory plus rename, so a
/// failure leaves no partial file.
void write_text_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace driftscope
