#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "driftscope/distribution.hpp"
#include "driftscope/image.hpp"
#include "driftscope/noise.hpp"

namespace driftscope {

/// The noise-intensity grid used throughout: {0, 0.1, ..., 0.9, 1}.
std::vector<double> default_grid();

/// Parameter grids for a sweep. axis1 is the variance grid for Gaussian and
/// speckle noise, the amount grid for salt-and-pepper; axis2 is the
/// proportion grid and applies to salt-and-pepper only.
struct SweepGrids {
    std::vector<double> axis1;
    std::vector<double> axis2;
};

/// Per-channel PSI values over a noise-intensity grid on one image.
/// values[c] is laid out axis1-major: index i1 * max(1, |axis2|) + i2.
struct SweepResult {
    NoiseKind kind = NoiseKind::Gaussian;
    std::string axis1_name;      // "variance" or "amount"
    std::vector<double> axis1;
    std::vector<double> axis2;   // empty unless salt-and-pepper ("proportion")
    std::vector<Channel> channels;
    std::vector<std::vector<double>> values;  // PSI, one vector per channel

    int bins = 0;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    std::string image_id;

    std::size_t points_per_channel() const {
        return axis1.size() * (axis2.empty() ? 1 : axis2.size());
    }
};

/// Applies the noise kind at every grid point and computes per-channel PSI
/// between the original image and the noised one. Gaussian and speckle
/// sweeps keep mean 0 and sweep the variance; salt-and-pepper sweeps the
/// amount x proportion surface. Bin edges are built once per channel from
/// the original image (source-anchored) and reused for every grid point;
/// grid point g uses derive_seed(seed, g) on the flattened index, so points
/// are independent and the whole sweep is reproducible.
SweepResult run_sweep(const Image& img, NoiseKind kind, const SweepGrids& grids,
                      const BinningScheme& scheme, double epsilon, std::uint64_t seed,
                      const std::string& image_id = "");

/// Five-number box summary: quartiles by linear-interpolation quantiles,
/// whiskers at the most extreme values within 1.5 IQR of the quartiles,
/// everything beyond listed as outliers.
struct BoxStats {
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double whisker_low = 0.0;
    double whisker_high = 0.0;
    std::vector<double> outliers;
};

BoxStats box_stats(std::span<const double> values);

struct CorpusImageResult {
    std::string path;
    std::vector<Channel> channels;
    std::vector<double> psi;  // parallel to channels
};

struct CorpusSkip {
    std::string path;
    std::string reason;
};

/// Per-image PSI under one noise spec plus per-channel box statistics.
struct CorpusResult {
    std::vector<CorpusImageResult> images;  // in input (sorted-path) order
    std::vector<CorpusSkip> skips;
    std::vector<Channel> channels;   // channel tags seen, in R,G,B,Gray order
    std::vector<BoxStats> stats;     // parallel to channels
    NoiseSpec spec;
    int bins = 0;
    double epsilon = 0.0;
    std::uint64_t base_seed = 0;

    std::size_t image_count() const { return images.size() + skips.size(); }
};

/// Loads every path, applies `spec` with the per-image seed
/// derive_seed(base_seed, i) (i = position in `paths`, which overrides
/// spec.seed), and computes per-channel PSI of the noised image against its
/// own original with source-anchored edges. Unloadable files become skip
/// records; only a corpus with no loadable image at all is an error.
/// Results land in a slot per index, so output is bit-identical for any
/// worker count.
CorpusResult run_corpus(const std::vector<std::filesystem::path>& paths, const NoiseSpec& spec,
                        const BinningScheme& scheme, double epsilon, std::uint64_t base_seed,
                        int workers = 1);

enum class DriftLabel { Stable, Moderate, Significant };

std::string to_string(DriftLabel label);

/// Advisory PSI cutoffs; there is no established mechanism for choosing
/// them, so they are configuration, not findings, and are echoed into every
/// report that uses them.
struct Thresholds {
    double moderate = 0.1;     // t1
    double significant = 0.25; // t2

    void validate() const;  // throws ValueError unless 0 < t1 < t2
};

struct DriftVerdict {
    std::vector<Channel> channels;
    std::vector<double> psi;
    std::vector<DriftLabel> labels;
    Thresholds thresholds;
};

/// stable when psi < t1, moderate when t1 <= psi < t2, significant when
/// psi >= t2.
DriftLabel classify(double psi_value, const Thresholds& thresholds);

DriftVerdict verdict(const std::vector<Channel>& channels, std::span<const double> psi_per_channel,
                     const Thresholds& thresholds);

}  // namespace driftscope
