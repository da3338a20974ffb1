#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "driftscope/distribution.hpp"
#include "driftscope/harness.hpp"
#include "driftscope/image.hpp"

namespace driftscope {

enum class OutputFormat { Json, Csv };

std::string to_string(OutputFormat format);
OutputFormat parse_output_format(const std::string& name);

/// Shared command configuration. Defaults: 10 fixed-range bins over [0, 1]
/// (pixel intensities), smoothing 1e-4, advisory thresholds 0.1 / 0.25.
/// Every report echoes these so results stay interpretable without the
/// invoking command line.
struct RunConfig {
    int bins = 10;
    BinMode scheme_mode = BinMode::FixedRange;
    double range_lo = 0.0;
    double range_hi = 1.0;
    double epsilon = 1e-4;
    std::uint64_t seed = 0;
    Thresholds thresholds;
    std::vector<Channel> channels;  // empty selects all channels present
    OutputFormat format = OutputFormat::Json;
    int jobs = 1;

    BinningScheme scheme() const {
        return BinningScheme{scheme_mode, bins, range_lo, range_hi};
    }

    void validate() const;  // throws ValueError
};

}  // namespace driftscope
