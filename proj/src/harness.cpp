#include "driftscope/harness.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <utility>

#include "driftscope/divergence.hpp"
#include "driftscope/error.hpp"
#include "driftscope/rng.hpp"

namespace driftscope {

std::vector<double> default_grid() {
    std::vector<double> grid(11);
    for (int k = 0; k <= 10; ++k) {
        grid[k] = static_cast<double>(k) / 10.0;
    }
    return grid;
}

SweepResult run_sweep(const Image& img, NoiseKind kind, const SweepGrids& grids,
                      const BinningScheme& scheme, double epsilon, std::uint64_t seed,
                      const std::string& image_id) {
    validate(img);
    scheme.validate();
    if (!(epsilon >= 0.0)) {
        throw ValueError("epsilon must be >= 0");
    }
    if (grids.axis1.empty()) {
        throw ValueError("sweep grid must be non-empty");
    }
    const bool surface = kind == NoiseKind::SaltPepper;
    if (surface && grids.axis2.empty()) {
        throw ValueError("salt-and-pepper sweep needs a proportion grid");
    }

    SweepResult result;
    result.kind = kind;
    result.axis1_name = surface ? "amount" : "variance";
    result.axis1 = grids.axis1;
    if (surface) {
        result.axis2 = grids.axis2;
    }
    result.channels = channels_of(img);
    result.bins = scheme.bin_count;
    result.epsilon = epsilon;
    result.seed = seed;
    result.image_id = image_id;

    // Source-anchored binning: edges come from the original image once per
    // channel and every noised variant is measured against them.
    const std::size_t channel_count = result.channels.size();
    std::vector<std::vector<double>> edges(channel_count);
    std::vector<BinnedDistribution> source(channel_count);
    for (std::size_t c = 0; c < channel_count; ++c) {
        edges[c] = make_edges(scheme, img.planes[c]);
        source[c] = bin_sample(img.planes[c], edges[c], epsilon);
    }

    const std::size_t n2 = surface ? grids.axis2.size() : 1;
    result.values.assign(channel_count, std::vector<double>(grids.axis1.size() * n2));
    for (std::size_t i1 = 0; i1 < grids.axis1.size(); ++i1) {
        for (std::size_t i2 = 0; i2 < n2; ++i2) {
            const std::size_t flat = i1 * n2 + i2;
            NoiseSpec spec;
            spec.kind = kind;
            if (surface) {
                spec.amount = grids.axis1[i1];
                spec.proportion = grids.axis2[i2];
            } else {
                spec.mean = 0.0;
                spec.variance = grids.axis1[i1];
            }
            spec.seed = derive_seed(seed, flat);
            const Image noisy = apply(img, spec);
            for (std::size_t c = 0; c < channel_count; ++c) {
                result.values[c][flat] =
                    psi(source[c], bin_sample(noisy.planes[c], edges[c], epsilon));
            }
        }
    }
    return result;
}

BoxStats box_stats(std::span<const double> values) {
    if (values.empty()) {
        throw ValueError("box statistics of an empty sample");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    BoxStats stats;
    stats.q1 = sorted_quantile(sorted, 0.25);
    stats.median = sorted_quantile(sorted, 0.5);
    stats.q3 = sorted_quantile(sorted, 0.75);
    const double iqr = stats.q3 - stats.q1;
    const double lo_fence = stats.q1 - 1.5 * iqr;
    const double hi_fence = stats.q3 + 1.5 * iqr;

    // Whiskers sit on actual data points: the extremes still inside the
    // fences. The quartiles are always inside, so both exist.
    stats.whisker_low = *std::find_if(sorted.begin(), sorted.end(),
                                      [&](double v) { return v >= lo_fence; });
    stats.whisker_high = *std::find_if(sorted.rbegin(), sorted.rend(),
                                       [&](double v) { return v <= hi_fence; });
    for (const double v : sorted) {
        if (v < lo_fence || v > hi_fence) {
            stats.outliers.push_back(v);
        }
    }
    return stats;
}

CorpusResult run_corpus(const std::vector<std::filesystem::path>& paths, const NoiseSpec& spec,
                        const BinningScheme& scheme, double epsilon, std::uint64_t base_seed,
                        int workers) {
    spec.validate();
    scheme.validate();
    if (!(epsilon >= 0.0)) {
        throw ValueError("epsilon must be >= 0");
    }
    if (paths.empty()) {
        throw ValueError("corpus run needs at least one input path");
    }
    if (workers < 1) {
        workers = 1;
    }

    struct Slot {
        bool ok = false;
        CorpusImageResult result;
        std::string error;
    };
    std::vector<Slot> slots(paths.size());
    std::atomic<std::size_t> next{0};

    // Workers claim indices atomically and write into their own slot, so the
    // assembled output is identical for any worker count: every per-image
    // computation is a pure function of (path, spec, base_seed, index).
    const auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= paths.size()) {
                return;
            }
            try {
                const Image img = load_image(paths[i]);
                NoiseSpec per_image = spec;
                per_image.seed = derive_seed(base_seed, i);
                const Image noisy = apply(img, per_image);
                CorpusImageResult r;
                r.path = paths[i].string();
                r.channels = channels_of(img);
                for (std::size_t c = 0; c < r.channels.size(); ++c) {
                    const auto edges = make_edges(scheme, img.planes[c]);
                    r.psi.push_back(psi(bin_sample(img.planes[c], edges, epsilon),
                                        bin_sample(noisy.planes[c], edges, epsilon)));
                }
                slots[i].result = std::move(r);
                slots[i].ok = true;
            } catch (const std::exception& e) {
                slots[i].error = e.what();
            }
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    CorpusResult out;
    out.spec = spec;
    out.bins = scheme.bin_count;
    out.epsilon = epsilon;
    out.base_seed = base_seed;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i].ok) {
            out.images.push_back(std::move(slots[i].result));
        } else {
            out.skips.push_back({paths[i].string(), std::move(slots[i].error)});
        }
    }
    if (out.images.empty()) {
        throw IoError("no loadable image in the corpus");
    }

    for (const Channel tag : {Channel::R, Channel::G, Channel::B, Channel::Gray}) {
        std::vector<double> values;
        for (const auto& img : out.images) {
            for (std::size_t c = 0; c < img.channels.size(); ++c) {
                if (img.channels[c] == tag) {
                    values.push_back(img.psi[c]);
                }
            }
        }
        if (!values.empty()) {
            out.channels.push_back(tag);
            out.stats.push_back(box_stats(values));
        }
    }
    return out;
}

std::string to_string(DriftLabel label) {
    switch (label) {
        case DriftLabel::Stable: return "stable";
        case DriftLabel::Moderate: return "moderate";
        case DriftLabel::Significant: return "significant";
    }
    throw InternalError("unknown drift label");
}

void Thresholds::validate() const {
    if (!(moderate > 0.0) || !(significant > moderate)) {
        throw ValueError("thresholds must satisfy 0 < moderate < significant");
    }
}

DriftLabel classify(double psi_value, const Thresholds& thresholds) {
    thresholds.validate();
    if (psi_value >= thresholds.significant) {
        return DriftLabel::Significant;
    }
    if (psi_value >= thresholds.moderate) {
        return DriftLabel::Moderate;
    }
    return DriftLabel::Stable;
}

DriftVerdict verdict(const std::vector<Channel>& channels, std::span<const double> psi_per_channel,
                     const Thresholds& thresholds) {
    if (channels.size() != psi_per_channel.size()) {
        throw ValueError("one PSI value per channel required");
    }
    DriftVerdict v;
    v.channels = channels;
    v.psi.assign(psi_per_channel.begin(), psi_per_channel.end());
    v.thresholds = thresholds;
    for (const double p : psi_per_channel) {
        v.labels.push_back(classify(p, thresholds));
    }
    return v;
}

}  // namespace driftscope
