#include "driftscope/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "driftscope/error.hpp"

namespace driftscope {

namespace {

void check_edges(const std::vector<double>& edges) {
    if (edges.size() < 2) {
        throw ValueError("need at least 2 bin edges");
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (!std::isfinite(edges[i])) {
            throw ValueError("bin edges must be finite");
        }
        if (i > 0 && !(edges[i] > edges[i - 1])) {
            throw ValueError("bin edges must be strictly increasing");
        }
    }
}

/// Bin index under lo-inclusive / hi-exclusive membership with the last bin
/// closed; out-of-range values land in the nearest edge bin.
std::size_t bin_index(const std::vector<double>& edges, double v) {
    const auto it = std::upper_bound(edges.begin(), edges.end(), v);
    const auto idx = static_cast<std::ptrdiff_t>(it - edges.begin()) - 1;
    const auto last = static_cast<std::ptrdiff_t>(edges.size()) - 2;
    return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(idx, 0, last));
}

}  // namespace

std::string to_string(BinMode mode) {
    switch (mode) {
        case BinMode::FixedRange: return "fixed";
        case BinMode::SourceQuantile: return "quantile";
    }
    throw InternalError("unknown bin mode");
}

BinMode parse_bin_mode(const std::string& name) {
    if (name == "fixed") return BinMode::FixedRange;
    if (name == "quantile") return BinMode::SourceQuantile;
    throw ValueError("unknown binning scheme '" + name + "' (expected fixed or quantile)");
}

void BinningScheme::validate() const {
    if (bin_count < 2) {
        throw ValueError("bin count must be at least 2");
    }
    if (mode == BinMode::FixedRange) {
        if (!std::isfinite(lo) || !std::isfinite(hi)) {
            throw ValueError("fixed range bounds must be finite");
        }
        if (!(lo < hi)) {
            throw ValueError("fixed range must satisfy lo < hi");
        }
    }
}

void BinnedDistribution::validate() const {
    check_edges(edges);
    if (counts.size() != edges.size() - 1) {
        throw ValueError("bin count does not match edge count");
    }
    if (proportions.size() != counts.size()) {
        throw ValueError("proportion count does not match bin count");
    }
    if (!(epsilon >= 0.0)) {
        throw ValueError("epsilon must be >= 0");
    }
    std::int64_t sum = 0;
    for (const auto c : counts) {
        if (c < 0) {
            throw ValueError("bin counts must be non-negative");
        }
        sum += c;
    }
    if (sum != total || total <= 0) {
        throw ValueError("bin counts must sum to a positive total");
    }
    double qsum = 0.0;
    for (const double q : proportions) {
        if (!(q >= 0.0) || (epsilon > 0.0 && !(q > 0.0))) {
            throw ValueError("smoothed proportions must be strictly positive");
        }
        qsum += q;
    }
    if (std::abs(qsum - 1.0) > 1e-12) {
        throw ValueError("proportions must sum to 1 within 1e-12");
    }
}

void WeightedSample::add(double value, std::int64_t count) {
    if (!std::isfinite(value)) {
        throw ValueError("sample values must be finite");
    }
    if (count <= 0) {
        throw ValueError("multiplicity must be positive");
    }
    counts_[value] += count;
    total_ += count;
}

void WeightedSample::add(std::span<const double> values) {
    for (const double v : values) {
        add(v);
    }
}

double WeightedSample::quantile(double p) const {
    if (empty()) {
        throw ValueError("quantile of an empty sample");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ValueError("quantile probability must be in [0, 1]");
    }
    const double h = static_cast<double>(total_ - 1) * p;
    const auto lo_rank = static_cast<std::int64_t>(h);
    const double frac = h - static_cast<double>(lo_rank);

    // One pass over the distinct values finds the order statistics at
    // lo_rank and lo_rank + 1 of the expanded multiset.
    double lo_val = 0.0;
    double hi_val = 0.0;
    bool have_lo = false;
    std::int64_t cumulative = 0;
    for (const auto& [value, count] : counts_) {
        cumulative += count;
        if (!have_lo && cumulative > lo_rank) {
            lo_val = value;
            have_lo = true;
        }
        if (cumulative > lo_rank + 1) {
            hi_val = value;
            break;
        }
    }
    if (lo_rank + 1 >= total_) {
        return lo_val;
    }
    return lo_val + frac * (hi_val - lo_val);
}

double sorted_quantile(std::span<const double> sorted, double p) {
    if (sorted.empty()) {
        throw ValueError("quantile of an empty sample");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ValueError("quantile probability must be in [0, 1]");
    }
    const double h = static_cast<double>(sorted.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(h);
    const double frac = h - static_cast<double>(lo);
    if (lo + 1 >= sorted.size()) {
        return sorted.back();
    }
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double sample_quantile(std::span<const double> sample, double p) {
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    return sorted_quantile(sorted, p);
}

std::vector<double> make_edges(const BinningScheme& scheme, std::span<const double> source_sample) {
    scheme.validate();
    const int bins = scheme.bin_count;
    if (scheme.mode == BinMode::FixedRange) {
        std::vector<double> edges(bins + 1);
        for (int k = 0; k <= bins; ++k) {
            edges[k] = scheme.lo + (scheme.hi - scheme.lo) * k / bins;
        }
        edges.front() = scheme.lo;
        edges.back() = scheme.hi;
        return edges;
    }
    if (source_sample.empty()) {
        throw ValueError("source-quantile edges need a non-empty source sample");
    }
    std::vector<double> sorted(source_sample.begin(), source_sample.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> edges;
    edges.reserve(bins + 1);
    for (int k = 0; k <= bins; ++k) {
        const double e = sorted_quantile(sorted, static_cast<double>(k) / bins);
        if (edges.empty() || e > edges.back()) {
            edges.push_back(e);
        }
    }
    if (edges.size() < 2) {
        throw ValueError("quantile edges collapsed below 2 (source sample is almost constant)");
    }
    return edges;
}

std::vector<double> make_edges(const BinningScheme& scheme, const WeightedSample& pooled) {
    scheme.validate();
    if (scheme.mode == BinMode::FixedRange) {
        return make_edges(scheme);
    }
    if (pooled.empty()) {
        throw ValueError("source-quantile edges need a non-empty source sample");
    }
    const int bins = scheme.bin_count;
    std::vector<double> edges;
    edges.reserve(bins + 1);
    for (int k = 0; k <= bins; ++k) {
        const double e = pooled.quantile(static_cast<double>(k) / bins);
        if (edges.empty() || e > edges.back()) {
            edges.push_back(e);
        }
    }
    if (edges.size() < 2) {
        throw ValueError("quantile edges collapsed below 2 (source sample is almost constant)");
    }
    return edges;
}

BinnedDistribution make_binned(std::vector<double> edges, std::vector<std::int64_t> counts,
                               double epsilon) {
    check_edges(edges);
    if (counts.size() != edges.size() - 1) {
        throw ValueError("bin count does not match edge count");
    }
    if (!(epsilon >= 0.0)) {
        throw ValueError("epsilon must be >= 0");
    }
    BinnedDistribution dist;
    dist.edges = std::move(edges);
    dist.counts = std::move(counts);
    dist.epsilon = epsilon;
    for (const auto c : dist.counts) {
        if (c < 0) {
            throw ValueError("bin counts must be non-negative");
        }
        dist.total += c;
    }
    if (dist.total <= 0) {
        throw ValueError("cannot bin an empty sample");
    }
    const auto bins = dist.counts.size();
    const double n = static_cast<double>(dist.total);
    const double denom = 1.0 + static_cast<double>(bins) * epsilon;
    dist.proportions.resize(bins);
    for (std::size_t i = 0; i < bins; ++i) {
        dist.proportions[i] = (static_cast<double>(dist.counts[i]) / n + epsilon) / denom;
    }
    return dist;
}

BinnedDistribution bin_sample(std::span<const double> sample, const std::vector<double>& edges,
                              double epsilon) {
    check_edges(edges);
    if (sample.empty()) {
        throw ValueError("cannot bin an empty sample");
    }
    std::vector<std::int64_t> counts(edges.size() - 1, 0);
    for (const double v : sample) {
        if (std::isnan(v)) {
            throw ValueError("sample contains NaN");
        }
        ++counts[bin_index(edges, v)];
    }
    return make_binned(edges, std::move(counts), epsilon);
}

BinnedDistribution bin_weighted(const WeightedSample& pooled, const std::vector<double>& edges,
                                double epsilon) {
    check_edges(edges);
    if (pooled.empty()) {
        throw ValueError("cannot bin an empty sample");
    }
    std::vector<std::int64_t> counts(edges.size() - 1, 0);
    for (const auto& [value, count] : pooled.value_counts()) {
        counts[bin_index(edges, value)] += count;
    }
    return make_binned(edges, std::move(counts), epsilon);
}

}  // namespace driftscope
