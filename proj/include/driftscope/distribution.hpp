#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace driftscope {

enum class BinMode { FixedRange, SourceQuantile };

std::string to_string(BinMode mode);
BinMode parse_bin_mode(const std::string& name);  // "fixed" | "quantile"

/// Bin-edge construction policy. FixedRange splits [lo, hi] into bin_count
/// equal-width bins; SourceQuantile places edges at the source sample's
/// empirical quantiles k/bin_count.
struct BinningScheme {
    BinMode mode = BinMode::FixedRange;
    int bin_count = 10;
    double lo = 0.0;  // FixedRange only
    double hi = 1.0;  // FixedRange only

    void validate() const;  // throws ValueError
};

/// A numeric sample reduced to shared bins: edges, per-bin counts, and
/// smoothed proportions. Immutable by convention; this is the
/// representation every divergence operates on.
struct BinnedDistribution {
    std::vector<double> edges;         // bin_count + 1, strictly increasing
    std::vector<std::int64_t> counts;  // one per bin, summing to total
    std::int64_t total = 0;
    std::vector<double> proportions;   // smoothed; strictly positive when epsilon > 0
    double epsilon = 0.0;              // smoothing used to produce proportions

    int bin_count() const { return static_cast<int>(counts.size()); }

    /// Throws ValueError unless edges are strictly increasing, counts sum
    /// to total, and proportions sum to 1 within 1e-12.
    void validate() const;
};

/// A value -> multiplicity map standing in for a large pooled sample.
/// Raster intensities are quantized (at most max_value + 1 distinct values
/// per bit depth), so pooling millions of pixels stays exact in bounded
/// memory. Quantiles match the flat-sample definition bit for bit.
class WeightedSample {
public:
    void add(double value, std::int64_t count = 1);
    void add(std::span<const double> values);

    std::int64_t total() const { return total_; }
    bool empty() const { return total_ == 0; }

    /// Linear-interpolation empirical quantile over the expanded multiset.
    double quantile(double p) const;

    const std::map<double, std::int64_t>& value_counts() const { return counts_; }

private:
    std::map<double, std::int64_t> counts_;
    std::int64_t total_ = 0;
};

/// Linear-interpolation quantile of an unsorted sample: with h = (n-1)*p,
/// the value is s[floor(h)] + frac(h) * (s[floor(h)+1] - s[floor(h)]) on
/// the sorted sample. Exposed because SourceQuantile edges depend on it.
double sample_quantile(std::span<const double> sample, double p);

/// Same quantile definition over an already-sorted sample (not re-checked).
double sorted_quantile(std::span<const double> sorted, double p);

/// Edges for the scheme. FixedRange ignores the sample. SourceQuantile
/// places edges at quantiles k/bin_count of the given sample (so the ends
/// sit at the sample min and max) and collapses duplicate edges, reducing
/// the bin count on heavily tied samples; fewer than 2 surviving edges is
/// an error.
std::vector<double> make_edges(const BinningScheme& scheme,
                               std::span<const double> source_sample = {});
std::vector<double> make_edges(const BinningScheme& scheme, const WeightedSample& pooled);

/// Bins a sample against the given edges. Membership is lo-inclusive /
/// hi-exclusive except the last bin, which includes its upper edge; values
/// outside the edge range are clamped into the first or last bin so no
/// value is dropped. Proportions are additively smoothed:
///   q_i = (counts_i / N + epsilon) / (1 + B * epsilon).
BinnedDistribution bin_sample(std::span<const double> sample,
                              const std::vector<double>& edges, double epsilon);
BinnedDistribution bin_weighted(const WeightedSample& pooled,
                                const std::vector<double>& edges, double epsilon);

/// Assembles a distribution from edges and per-bin counts, computing the
/// smoothed proportions. The single constructor behind bin_sample,
/// bin_weighted, and baseline deserialization, so proportions always come
/// out of the same arithmetic.
BinnedDistribution make_binned(std::vector<double> edges, std::vector<std::int64_t> counts,
                               double epsilon);

}  // namespace driftscope
