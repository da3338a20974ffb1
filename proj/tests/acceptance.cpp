// Acceptance checks for the drift toolkit. Each check prints one
// [PASS]/[FAIL] line with its pinned tolerance; the exit status is the
// number of failures. Check 10 exercises a real day/night corpus pair and
// runs only when --day-dir and --night-dir are supplied; otherwise it is
// reported as [SKIP] and does not count against the result.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "driftscope/baseline.hpp"
#include "driftscope/distribution.hpp"
#include "driftscope/divergence.hpp"
#include "driftscope/error.hpp"
#include "driftscope/harness.hpp"
#include "driftscope/image.hpp"
#include "driftscope/noise.hpp"
#include "driftscope/report.hpp"
#include "driftscope/rng.hpp"
#include "testutil.hpp"

using namespace driftscope;

namespace {

int failures = 0;
int check_number = 0;

void report(bool ok, const std::string& what) {
    ++check_number;
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << check_number << ". " << what << "\n";
    failures += ok ? 0 : 1;
}

void skip(const std::string& what) {
    ++check_number;
    std::cout << "[SKIP] " << check_number << ". " << what << "\n";
}

BinnedDistribution random_distribution(Rng& rng, int bins, double epsilon) {
    std::vector<double> values;
    const std::size_t n = 200 + static_cast<std::size_t>(rng.bounded(800));
    values.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        values.push_back(rng.next_unit());
    }
    const auto edges = make_edges(BinningScheme{BinMode::FixedRange, bins, 0.0, 1.0}, values);
    return bin_sample(values, edges, epsilon);
}

// --- check 1: PSI decomposes into the two KL directions -------------------

void check_psi_decomposition() {
    Rng rng(101);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const auto s = random_distribution(rng, 10, 1e-4);
        const auto t = random_distribution(rng, 10, 1e-4);
        const double gap =
            std::abs(psi(s, t) - (kl_divergence(s, t) + kl_divergence(t, s)));
        worst = std::max(worst, gap);
    }
    std::ostringstream msg;
    msg << "psi equals forward plus reverse KL on 1000 random 10-bin pairs "
        << "(worst gap " << worst << ", tol 1e-9)";
    report(worst <= 1e-9, msg.str());
}

// --- check 2: frozen two-bin reference value ------------------------------

void check_reference_value() {
    const std::vector<double> edges{0.0, 0.5, 1.0};
    const auto s = make_binned(edges, {2, 2}, 0.0);   // proportions 0.50, 0.50
    const auto t = make_binned(edges, {1, 3}, 0.0);   // proportions 0.25, 0.75
    const double value = psi(s, t);
    std::ostringstream msg;
    msg << "two-bin psi of (0.5,0.5) vs (0.25,0.75) is 0.274653 "
        << "(got " << value << ", tol 1e-6)";
    report(std::abs(value - 0.274653) <= 1e-6, msg.str());
}

// --- check 3: divergence axioms across randomized inputs ------------------

void check_divergence_axioms() {
    Rng rng(303);
    bool ok = true;
    const std::vector<DivergenceKind> kinds{
        DivergenceKind::Kl,           DivergenceKind::SymmetricKl,
        DivergenceKind::JensenShannon, DivergenceKind::ChiSquared,
        DivergenceKind::Wasserstein1};
    for (int i = 0; i < 500 && ok; ++i) {
        const auto s = random_distribution(rng, 10, 1e-4);
        const auto t = random_distribution(rng, 10, 1e-4);

        // Identity of indiscernibles: every measure is exactly zero on a
        // distribution compared with itself.
        ok = ok && psi(s, s) == 0.0;
        for (const auto kind : kinds) {
            ok = ok && compute_divergence(kind, s, s) == 0.0;
        }

        // Symmetry and non-negativity.
        ok = ok && psi(s, t) == psi(t, s);
        ok = ok && psi(s, t) >= 0.0;
        ok = ok && kl_divergence(s, t) >= 0.0;
        ok = ok && kl_divergence(t, s) >= 0.0;

        // Smoothing keeps everything finite even on disjoint supports.
        const std::size_t bins = 10;
        std::vector<std::int64_t> left(bins, 0);
        std::vector<std::int64_t> right(bins, 0);
        const std::size_t split = 1 + rng.bounded(bins - 1);
        for (std::size_t b = 0; b < bins; ++b) {
            (b < split ? left[b] : right[b]) = 1 + static_cast<std::int64_t>(rng.bounded(50));
        }
        std::vector<double> edges(bins + 1);
        for (std::size_t k = 0; k <= bins; ++k) {
            edges[k] = static_cast<double>(k) / bins;
        }
        const auto a = make_binned(edges, left, 1e-4);
        const auto b = make_binned(edges, right, 1e-4);
        ok = ok && std::isfinite(psi(a, b));
        for (const auto kind : kinds) {
            ok = ok && std::isfinite(compute_divergence(kind, a, b));
        }
    }
    report(ok,
           "divergence axioms hold on 500 randomized cases: zero on identical "
           "inputs, psi symmetric and non-negative, KL non-negative, all "
           "measures finite on disjoint supports with epsilon 1e-4");
}

// --- checks 4 and 5: monotone response and exact zero point ---------------

struct SweepBundle {
    SweepResult gaussian;
    SweepResult speckle;
    SweepResult salt_pepper;
};

SweepBundle run_intensity_sweeps() {
    const Image img = testutil::synthetic_image(64, 64, 3, 4242);
    SweepBundle bundle{
        run_sweep(img, NoiseKind::Gaussian, {default_grid(), {}}, BinningScheme{}, 1e-4,
                  77, "synthetic-64"),
        run_sweep(img, NoiseKind::Speckle, {default_grid(), {}}, BinningScheme{}, 1e-4,
                  78, "synthetic-64"),
        run_sweep(img, NoiseKind::SaltPepper, {default_grid(), {0.5}}, BinningScheme{}, 1e-4,
                  79, "synthetic-64")};
    return bundle;
}

void check_monotone_response(const SweepBundle& bundle) {
    bool ok = true;
    double min_rho = 1.0;
    const auto check_sweep = [&](const SweepResult& sweep) {
        for (const auto& series : sweep.values) {
            const double rho = testutil::spearman(sweep.axis1, series);
            min_rho = std::min(min_rho, rho);
            ok = ok && rho >= 0.9;
        }
    };
    check_sweep(bundle.gaussian);
    check_sweep(bundle.speckle);
    check_sweep(bundle.salt_pepper);
    std::ostringstream msg;
    msg << "psi rises with noise intensity on a 64x64 synthetic image: "
        << "Spearman rho >= 0.9 for gaussian variance, speckle variance, and "
        << "salt-pepper amount at proportion 0.5 (min rho " << min_rho << ")";
    report(ok, msg.str());
}

void check_exact_zero_point(const SweepBundle& bundle) {
    bool ok = true;
    // Grid points are laid out axis1-major, so the leading |axis2| entries
    // (or the single leading entry of a 1-D sweep) belong to noise level 0.
    const auto zero_block = [&](const SweepResult& sweep) {
        const std::size_t block = sweep.axis2.empty() ? 1 : sweep.axis2.size();
        for (const auto& series : sweep.values) {
            for (std::size_t i = 0; i < block; ++i) {
                ok = ok && series[i] == 0.0;
            }
        }
    };
    zero_block(bundle.gaussian);
    zero_block(bundle.speckle);
    zero_block(bundle.salt_pepper);
    report(ok,
           "the zero-noise grid point yields psi exactly 0.0 in every channel "
           "for all three noise kinds");
}

// --- check 6: noise generator contracts -----------------------------------

void check_noise_contracts() {
    bool ok = true;
    std::ostringstream detail;

    const Image textured = testutil::synthetic_image(64, 64, 3, 515);

    // Determinism: the same spec applied twice is bit-identical; a different
    // seed is not.
    {
        NoiseSpec spec;
        spec.kind = NoiseKind::Gaussian;
        spec.variance = 0.05;
        spec.seed = 10;
        const Image a = apply(textured, spec);
        const Image b = apply(textured, spec);
        ok = ok && a.planes == b.planes;
        spec.seed = 11;
        ok = ok && apply(textured, spec).planes != a.planes;
    }

    // Range: heavy noise of every kind stays inside [0, 1].
    {
        const auto in_range = [](const Image& img) {
            for (const auto& plane : img.planes) {
                for (const double v : plane) {
                    if (!(v >= 0.0 && v <= 1.0)) return false;
                }
            }
            return true;
        };
        ok = ok && in_range(apply_gaussian(textured, 0.0, 1.0, 21));
        ok = ok && in_range(apply_speckle(textured, 0.0, 1.0, 22));
        ok = ok && in_range(apply_salt_pepper(textured, 1.0, 0.5, 23));
    }

    // Salt-and-pepper replaces exactly round(amount * elements) entries.
    {
        const Image base = testutil::constant_image(32, 32, 3, 0.5);
        const double amount = 0.137;
        const Image noisy = apply_salt_pepper(base, amount, 0.5, 31);
        std::int64_t replaced = 0;
        for (std::size_t c = 0; c < noisy.planes.size(); ++c) {
            for (std::size_t i = 0; i < noisy.planes[c].size(); ++i) {
                if (noisy.planes[c][i] != base.planes[c][i]) {
                    ++replaced;
                    ok = ok && (noisy.planes[c][i] == 0.0 || noisy.planes[c][i] == 1.0);
                }
            }
        }
        const auto expected = static_cast<std::int64_t>(
            std::floor(amount * 32 * 32 * 3 + 0.5));
        ok = ok && replaced == expected;
        detail << "salt-pepper replaced " << replaced << "/" << expected << " expected";
    }

    // Speckle leaves an all-zero image untouched.
    {
        const Image zero = testutil::constant_image(16, 16, 1, 0.0);
        const Image noisy = apply_speckle(zero, 0.0, 0.9, 41);
        ok = ok && noisy.planes == zero.planes;
    }

    // Moments: with parameters chosen so clamping cannot trigger, the
    // realized mean and variance of the additive delta sit within 5% of the
    // requested ones on a 256x256 constant image.
    {
        const Image base = testutil::constant_image(256, 256, 1, 0.5);
        const double mean = 0.1;
        const double variance = 0.005;
        const Image noisy = apply_gaussian(base, mean, variance, 51);
        double sum = 0.0;
        for (std::size_t i = 0; i < noisy.planes[0].size(); ++i) {
            sum += noisy.planes[0][i] - 0.5;
        }
        const double n = static_cast<double>(noisy.planes[0].size());
        const double sample_mean = sum / n;
        double ss = 0.0;
        for (std::size_t i = 0; i < noisy.planes[0].size(); ++i) {
            const double d = noisy.planes[0][i] - 0.5 - sample_mean;
            ss += d * d;
        }
        const double sample_var = ss / n;
        ok = ok && std::abs(sample_mean - mean) <= 0.05 * mean;
        ok = ok && std::abs(sample_var - variance) <= 0.05 * variance;

        // Speckle on a constant 0.5 image scales the noise by 0.5, so the
        // delta variance is a quarter of the requested one.
        const Image speckled = apply_speckle(base, 0.0, 0.02, 52);
        double ssum = 0.0;
        for (std::size_t i = 0; i < speckled.planes[0].size(); ++i) {
            ssum += speckled.planes[0][i] - 0.5;
        }
        const double smean = ssum / n;
        double sss = 0.0;
        for (std::size_t i = 0; i < speckled.planes[0].size(); ++i) {
            const double d = speckled.planes[0][i] - 0.5 - smean;
            sss += d * d;
        }
        const double svar = sss / n;
        ok = ok && std::abs(svar - 0.02 / 4.0) <= 0.05 * (0.02 / 4.0);
    }

    report(ok,
           "noise contracts: seeded determinism, [0,1] output range, exact "
           "salt-pepper replacement count (" + detail.str() +
               "), speckle fixes the zero image, realized moments within 5% "
               "when clamping cannot trigger");
}

// --- check 7: corpus statistics vs an independent oracle ------------------

double oracle_quantile(std::vector<double> values, double p) {
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= values.size()) return values.back();
    return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
}

void check_corpus_statistics() {
    testutil::TempDir dir;
    for (int i = 0; i < 20; ++i) {
        save_image(testutil::synthetic_image(24, 20, 3, 7000 + i),
                   dir.file("img" + (i < 10 ? std::string("0") : std::string()) +
                            std::to_string(i) + ".ppm"));
    }
    const auto paths = list_corpus(dir.path());
    NoiseSpec spec;
    spec.kind = NoiseKind::Gaussian;
    spec.variance = 0.08;

    const CorpusResult one = run_corpus(paths, spec, BinningScheme{}, 1e-4, 99, 1);
    const CorpusResult many = run_corpus(paths, spec, BinningScheme{}, 1e-4, 99, 8);

    bool identical = one.channels == many.channels && one.images.size() == many.images.size();
    for (std::size_t i = 0; identical && i < one.images.size(); ++i) {
        identical = one.images[i].path == many.images[i].path &&
                    one.images[i].psi == many.images[i].psi;
    }
    for (std::size_t c = 0; identical && c < one.stats.size(); ++c) {
        identical = one.stats[c].median == many.stats[c].median &&
                    one.stats[c].q1 == many.stats[c].q1 &&
                    one.stats[c].q3 == many.stats[c].q3 &&
                    one.stats[c].whisker_low == many.stats[c].whisker_low &&
                    one.stats[c].whisker_high == many.stats[c].whisker_high &&
                    one.stats[c].outliers == many.stats[c].outliers;
    }

    bool oracle_match = one.channels.size() == 3;
    for (std::size_t c = 0; oracle_match && c < one.channels.size(); ++c) {
        std::vector<double> values;
        for (const auto& image : one.images) {
            values.push_back(image.psi[c]);
        }
        const double median = oracle_quantile(values, 0.5);
        const double q1 = oracle_quantile(values, 0.25);
        const double q3 = oracle_quantile(values, 0.75);
        const double iqr = q3 - q1;
        std::vector<double> sorted = values;
        std::sort(sorted.begin(), sorted.end());
        double lo = sorted.front();
        for (const double v : sorted) {
            if (v >= q1 - 1.5 * iqr) {
                lo = v;
                break;
            }
        }
        double hi = sorted.back();
        for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) {
            if (*it <= q3 + 1.5 * iqr) {
                hi = *it;
                break;
            }
        }
        std::vector<double> outliers;
        for (const double v : sorted) {
            if (v < lo || v > hi) outliers.push_back(v);
        }
        const BoxStats& stats = one.stats[c];
        oracle_match = stats.median == median && stats.q1 == q1 && stats.q3 == q3 &&
                       stats.whisker_low == lo && stats.whisker_high == hi &&
                       stats.outliers == outliers;
    }

    report(identical && oracle_match,
           "20-image seeded corpus: box statistics equal an independent "
           "sort-and-interpolate oracle exactly and are bit-identical with 1 "
           "and 8 workers");
}

// --- check 8: baseline persistence ----------------------------------------

void check_baseline_round_trip() {
    testutil::TempDir dir;
    for (int i = 0; i < 5; ++i) {
        save_image(testutil::synthetic_image(20, 16, 3, 8100 + i),
                   dir.file("img" + std::to_string(i) + ".ppm"));
    }
    const auto paths = list_corpus(dir.path());
    const BaselineFile baseline = build_baseline(paths, BinningScheme{}, 1e-4, "sources");

    testutil::TempDir work;
    const auto file = work.file("baseline.json");
    save_baseline(baseline, file);
    const BaselineFile reloaded = load_baseline(file);

    bool zero = reloaded.channels.size() == baseline.channels.size();
    for (std::size_t c = 0; zero && c < baseline.channels.size(); ++c) {
        zero = psi(baseline.channels[c].dist, reloaded.channels[c].dist) == 0.0;
    }

    // A failed atomic write must leave no file behind, partial or otherwise.
    bool clean_failure = false;
    const auto bad = work.path() / "missing" / "baseline.json";
    try {
        save_baseline(baseline, bad);
    } catch (const IoError&) {
        clean_failure = !std::filesystem::exists(bad);
    }
    for (const auto& entry : std::filesystem::directory_iterator(work.path())) {
        if (entry.path().filename().string().find(".tmp") != std::string::npos) {
            clean_failure = false;
        }
    }

    report(zero && clean_failure,
           "baseline round trip: reloaded distributions give psi exactly 0.0 "
           "per channel, and a failed write leaves no partial file");
}

// --- check 9: sweep grid shapes -------------------------------------------

void check_sweep_shapes(const SweepBundle& bundle) {
    const bool ok = bundle.gaussian.points_per_channel() == 11 &&
                    bundle.speckle.points_per_channel() == 11 &&
                    bundle.salt_pepper.axis1.size() == 11 &&
                    run_sweep(testutil::synthetic_image(16, 16, 1, 6),
                              NoiseKind::SaltPepper, {default_grid(), default_grid()},
                              BinningScheme{}, 1e-4, 5, "x")
                            .points_per_channel() == 121;
    report(ok,
           "default sweeps produce exactly 11 points per channel for gaussian "
           "and speckle and an 11x11 surface for salt-pepper");
}

// --- check 10: optional real-corpus day/night study ------------------------

void check_day_night(const std::string& day_dir, const std::string& night_dir) {
    if (day_dir.empty() || night_dir.empty()) {
        skip("day/night corpus comparison (supply --day-dir and --night-dir "
             "to run it)");
        return;
    }
    try {
        const auto day = list_corpus(day_dir);
        const auto night = list_corpus(night_dir);
        const BaselineFile baseline = build_baseline(day, BinningScheme{}, 1e-4, day_dir);
        const DriftReport same =
            compare_with_baseline(baseline, day, day_dir, Thresholds{});
        const DriftReport shifted =
            compare_with_baseline(baseline, night, night_dir, Thresholds{});
        bool ok = true;
        std::ostringstream msg;
        msg << "day/night corpora separate clearly:";
        for (std::size_t c = 0; c < shifted.channels.size(); ++c) {
            msg << " " << to_string(shifted.channels[c]) << " psi "
                << shifted.psi[c] << " (self " << same.psi[c] << ")";
            ok = ok && std::isfinite(shifted.psi[c]) && shifted.psi[c] > same.psi[c];
        }
        report(ok, msg.str());
    } catch (const std::exception& e) {
        report(false, std::string("day/night corpus comparison failed: ") + e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    std::string day_dir;
    std::string night_dir;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--day-dir" && i + 1 < argc) {
            day_dir = argv[++i];
        } else if (arg == "--night-dir" && i + 1 < argc) {
            night_dir = argv[++i];
        } else {
            std::cerr << "usage: acceptance [--day-dir DIR --night-dir DIR]\n";
            return 3;
        }
    }

    try {
        check_psi_decomposition();
        check_reference_value();
        check_divergence_axioms();
        const SweepBundle bundle = run_intensity_sweeps();
        check_monotone_response(bundle);
        check_exact_zero_point(bundle);
        check_noise_contracts();
        check_corpus_statistics();
        check_baseline_round_trip();
        check_sweep_shapes(bundle);
        check_day_night(day_dir, night_dir);
    } catch (const std::exception& e) {
        std::cout << "[FAIL] unexpected exception: " << e.what() << "\n";
        ++failures;
    }

    std::cout << (failures == 0 ? "all acceptance checks passed"
                                : std::to_string(failures) + " acceptance check(s) failed")
              << "\n";
    return failures;
}
