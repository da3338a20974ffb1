#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "driftscope/distribution.hpp"
#include "driftscope/image.hpp"

namespace driftscope {

inline constexpr int kBaselineFormatVersion = 1;

struct BaselineChannel {
    Channel channel = Channel::Gray;
    BinnedDistribution dist;
};

/// Persisted reference distributions: one per channel, pooled over every
/// pixel of the input images, plus the scheme and smoothing they were built
/// with. Future targets are binned with these exact edges.
struct BaselineFile {
    int format_version = kBaselineFormatVersion;
    std::string tool_version;
    std::string created_at;  // ISO-8601 UTC
    std::string source;      // input path or glob, provenance only
    BinningScheme scheme;
    double epsilon = 0.0;
    std::vector<BaselineChannel> channels;

    void validate() const;  // throws ValueError
};

/// Pools the pixel values of all loadable inputs per channel and bins them
/// under the scheme. Unloadable files are recorded in `skipped` (when
/// non-null); no loadable input at all, or inputs with mixed channel
/// counts, is an error.
BaselineFile build_baseline(const std::vector<std::filesystem::path>& inputs,
                            const BinningScheme& scheme, double epsilon,
                            const std::string& source_desc,
                            std::vector<std::string>* skipped = nullptr);

/// Serializes to schema-versioned JSON, written atomically (temp file +
/// rename); a failed write leaves no partial file behind.
void save_baseline(const BaselineFile& baseline, const std::filesystem::path& path);

/// Parses and validates a baseline written by save_baseline. Unknown format
/// versions and invariant violations are errors.
BaselineFile load_baseline(const std::filesystem::path& path);

}  // namespace driftscope
