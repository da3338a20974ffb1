#pragma once

#include <string>
#include <vector>

#include "driftscope/distribution.hpp"
#include "driftscope/image.hpp"

namespace driftscope {

enum class DivergenceKind { Psi, Kl, SymmetricKl, JensenShannon, ChiSquared, Wasserstein1 };

std::string to_string(DivergenceKind kind);
DivergenceKind parse_divergence_kind(const std::string& name);

/// Population stability index over shared bins:
///   sum_i (q_s,i - q_t,i) * ln(q_s,i / q_t,i)
/// Each term is evaluated as (hi - lo) * ln(hi / lo) with hi = max(q_s, q_t),
/// lo = min(q_s, q_t), which is the same value term by term and makes the
/// swap symmetry psi(S,T) == psi(T,S) exact in floating point.
/// Requires identical edges and strictly positive proportions on both sides.
double psi(const BinnedDistribution& s, const BinnedDistribution& t);

/// Kullback-Leibler divergence sum_i q_s,i * ln(q_s,i / q_t,i). Requires
/// identical edges and positive target proportions wherever the source is
/// positive.
double kl_divergence(const BinnedDistribution& s, const BinnedDistribution& t);

/// kl_divergence(s, t) + kl_divergence(t, s); equals psi up to rounding.
double symmetric_kl(const BinnedDistribution& s, const BinnedDistribution& t);

/// Jensen-Shannon divergence (natural log, so the range is [0, ln 2]):
/// JS = KL(S||M)/2 + KL(T||M)/2 with M the bin-wise average of the
/// proportions.
double jensen_shannon(const BinnedDistribution& s, const BinnedDistribution& t);

/// Pearson statistic of the target counts against source-expected counts:
///   sum_i (N_t,i - N_t * r_i)^2 / (N_t * r_i)
/// with r_i the raw source proportions; the source's epsilon substitutes
/// for raw zeros only, to avoid zero expectations.
double chi_squared(const BinnedDistribution& s, const BinnedDistribution& t);

/// 1-D earth mover's distance on the binned supports:
///   sum_i |CDF_s(i) - CDF_t(i)| * (edges[i+1] - edges[i])
double wasserstein1_binned(const BinnedDistribution& s, const BinnedDistribution& t);

/// Dispatch over DivergenceKind.
double compute_divergence(DivergenceKind kind, const BinnedDistribution& s,
                          const BinnedDistribution& t);

struct TileGrid {
    int rows = 1;
    int cols = 1;
};

/// Per-tile PSI map; tiles[r * cols + c] covers the pixel block at (r, c).
struct TiledPsiResult {
    int rows = 0;
    int cols = 0;
    std::vector<double> tiles;  // row-major
    double global_psi = 0.0;    // whole-channel PSI, for reference

    double at(int r, int c) const { return tiles[static_cast<std::size_t>(r) * cols + c]; }
};

/// PSI computed per spatial tile of one channel, localizing where a shift
/// happened. Each tile is binned source-anchored, exactly as the global
/// operation treats the whole channel, so a 1x1 grid reproduces the global
/// value. Images must share dimensions and channel count; the last row and
/// column of tiles absorb any remainder pixels.
TiledPsiResult tiled_psi(const Image& src, const Image& tgt, TileGrid grid,
                         const BinningScheme& scheme, double epsilon, Channel ch);

}  // namespace driftscope
