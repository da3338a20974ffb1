#include "driftscope/divergence.hpp"

#include <algorithm>
#include <cmath>

#include "driftscope/error.hpp"

namespace driftscope {

namespace {

void require_shared_edges(const BinnedDistribution& s, const BinnedDistribution& t) {
    if (s.edges != t.edges) {
        throw ValueError("divergence inputs use different bin edges; rebin against shared edges");
    }
    if (s.proportions.size() != s.counts.size() || t.proportions.size() != t.counts.size()) {
        throw ValueError("distribution proportions missing");
    }
}

void require_positive(const BinnedDistribution& d, const char* side) {
    for (const double q : d.proportions) {
        if (!(q > 0.0)) {
            throw ValueError(std::string("zero ") + side +
                             " proportion; enable smoothing (epsilon > 0)");
        }
    }
}

}  // namespace

std::string to_string(DivergenceKind kind) {
    switch (kind) {
        case DivergenceKind::Psi: return "psi";
        case DivergenceKind::Kl: return "kl";
        case DivergenceKind::SymmetricKl: return "skl";
        case DivergenceKind::JensenShannon: return "js";
        case DivergenceKind::ChiSquared: return "chi2";
        case DivergenceKind::Wasserstein1: return "w1";
    }
    throw InternalError("unknown divergence kind");
}

DivergenceKind parse_divergence_kind(const std::string& name) {
    if (name == "psi") return DivergenceKind::Psi;
    if (name == "kl") return DivergenceKind::Kl;
    if (name == "skl") return DivergenceKind::SymmetricKl;
    if (name == "js") return DivergenceKind::JensenShannon;
    if (name == "chi2") return DivergenceKind::ChiSquared;
    if (name == "w1") return DivergenceKind::Wasserstein1;
    throw ValueError("unknown divergence '" + name +
                     "' (expected psi, kl, skl, js, chi2, or w1)");
}

double psi(const BinnedDistribution& s, const BinnedDistribution& t) {
    require_shared_edges(s, t);
    require_positive(s, "source");
    require_positive(t, "target");
    double sum = 0.0;
    for (std::size_t i = 0; i < s.proportions.size(); ++i) {
        const double hi = std::max(s.proportions[i], t.proportions[i]);
        const double lo = std::min(s.proportions[i], t.proportions[i]);
        sum += (hi - lo) * std::log(hi / lo);
    }
    return sum;
}

double kl_divergence(const BinnedDistribution& s, const BinnedDistribution& t) {
    require_shared_edges(s, t);
    double sum = 0.0;
    for (std::size_t i = 0; i < s.proportions.size(); ++i) {
        const double a = s.proportions[i];
        const double b = t.proportions[i];
        if (a > 0.0) {
            if (!(b > 0.0)) {
                throw ValueError("zero target proportion against positive source; "
                                 "enable smoothing (epsilon > 0)");
            }
            sum += a * std::log(a / b);
        }
    }
    return sum;
}

double symmetric_kl(const BinnedDistribution& s, const BinnedDistribution& t) {
    return kl_divergence(s, t) + kl_divergence(t, s);
}

double jensen_shannon(const BinnedDistribution& s, const BinnedDistribution& t) {
    require_shared_edges(s, t);
    double sum = 0.0;
    for (std::size_t i = 0; i < s.proportions.size(); ++i) {
        const double a = s.proportions[i];
        const double b = t.proportions[i];
        const double m = 0.5 * (a + b);
        if (a > 0.0) sum += 0.5 * a * std::log(a / m);
        if (b > 0.0) sum += 0.5 * b * std::log(b / m);
    }
    return sum;
}

double chi_squared(const BinnedDistribution& s, const BinnedDistribution& t) {
    require_shared_edges(s, t);
    const double n_t = static_cast<double>(t.total);
    const double n_s = static_cast<double>(s.total);
    double sum = 0.0;
    for (std::size_t i = 0; i < s.counts.size(); ++i) {
        const double observed = static_cast<double>(t.counts[i]);
        if (s.counts[i] == 0) {
            // Nothing expected and nothing observed contributes nothing; an
            // observation against an empty reference bin is rated at the
            // smoothing floor so the statistic stays finite.
            if (observed == 0.0) continue;
            const double expected = n_t * s.epsilon;
            if (!(expected > 0.0)) {
                throw ValueError("zero expected count with observed targets; "
                                 "enable smoothing (epsilon > 0)");
            }
            const double d = observed - expected;
            sum += d * d / expected;
            continue;
        }
        // Multiply before dividing: when both sides hold the same counts the
        // quotient is then exactly the integer count, so chi2(s, s) == 0.
        const double expected = n_t * static_cast<double>(s.counts[i]) / n_s;
        const double d = observed - expected;
        sum += d * d / expected;
    }
    return sum;
}

double wasserstein1_binned(const BinnedDistribution& s, const BinnedDistribution& t) {
    require_shared_edges(s, t);
    double cdf_s = 0.0;
    double cdf_t = 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < s.proportions.size(); ++i) {
        cdf_s += s.proportions[i];
        cdf_t += t.proportions[i];
        sum += std::abs(cdf_s - cdf_t) * (s.edges[i + 1] - s.edges[i]);
    }
    return sum;
}

double compute_divergence(DivergenceKind kind, const BinnedDistribution& s,
                          const BinnedDistribution& t) {
    switch (kind) {
        case DivergenceKind::Psi: return psi(s, t);
        case DivergenceKind::Kl: return kl_divergence(s, t);
        case DivergenceKind::SymmetricKl: return symmetric_kl(s, t);
        case DivergenceKind::JensenShannon: return jensen_shannon(s, t);
        case DivergenceKind::ChiSquared: return chi_squared(s, t);
        case DivergenceKind::Wasserstein1: return wasserstein1_binned(s, t);
    }
    throw InternalError("unknown divergence kind");
}

TiledPsiResult tiled_psi(const Image& src, const Image& tgt, TileGrid grid,
                         const BinningScheme& scheme, double epsilon, Channel ch) {
    if (src.width != tgt.width || src.height != tgt.height ||
        src.channel_count() != tgt.channel_count()) {
        throw ValueError("tiled comparison needs images of identical shape");
    }
    if (grid.rows < 1 || grid.cols < 1) {
        throw ValueError("tile grid must be at least 1x1");
    }
    if (grid.rows > src.height || grid.cols > src.width) {
        throw ValueError("tile grid exceeds image dimensions");
    }
    const std::vector<double>& sp = channel_samples(src, ch);
    const std::vector<double>& tp = channel_samples(tgt, ch);

    TiledPsiResult result;
    result.rows = grid.rows;
    result.cols = grid.cols;
    {
        const auto edges = make_edges(scheme, sp);
        result.global_psi = psi(bin_sample(sp, edges, epsilon), bin_sample(tp, edges, epsilon));
    }
    result.tiles.reserve(static_cast<std::size_t>(grid.rows) * grid.cols);

    const int tile_h = src.height / grid.rows;
    const int tile_w = src.width / grid.cols;
    std::vector<double> s_tile;
    std::vector<double> t_tile;
    for (int tr = 0; tr < grid.rows; ++tr) {
        const int y0 = tr * tile_h;
        const int y1 = (tr == grid.rows - 1) ? src.height : y0 + tile_h;
        for (int tc = 0; tc < grid.cols; ++tc) {
            const int x0 = tc * tile_w;
            const int x1 = (tc == grid.cols - 1) ? src.width : x0 + tile_w;
            s_tile.clear();
            t_tile.clear();
            s_tile.reserve(static_cast<std::size_t>(y1 - y0) * (x1 - x0));
            t_tile.reserve(static_cast<std::size_t>(y1 - y0) * (x1 - x0));
            for (int y = y0; y < y1; ++y) {
                for (int x = x0; x < x1; ++x) {
                    const std::size_t idx = static_cast<std::size_t>(y) * src.width + x;
                    s_tile.push_back(sp[idx]);
                    t_tile.push_back(tp[idx]);
                }
            }
            const auto edges = make_edges(scheme, s_tile);
            result.tiles.push_back(
                psi(bin_sample(s_tile, edges, epsilon), bin_sample(t_tile, edges, epsilon)));
        }
    }
    return result;
}

}  // namespace driftscope
