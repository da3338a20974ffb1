// driftscope: distribution-shift measurement for image data.
//
// Subcommands:
//   baseline  pool reference images into a persisted binned distribution
//   compare   measure targets against a saved baseline (PSI + verdicts)
//   sweep     PSI vs. noise intensity on a single image
//   corpus    per-image PSI under one noise spec across a directory
//
// Exit codes: 0 success, 1 usage/value error, 2 I/O error, 3 internal error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "driftscope/baseline.hpp"
#include "driftscope/config.hpp"
#include "driftscope/divergence.hpp"
#include "driftscope/error.hpp"
#include "driftscope/harness.hpp"
#include "driftscope/image.hpp"
#include "driftscope/noise.hpp"
#include "driftscope/report.hpp"
#include "driftscope/version.hpp"

namespace {

using namespace driftscope;

double parse_number(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const double value = std::stod(text, &used);
        if (used != text.size()) {
            throw ValueError("");
        }
        return value;
    } catch (const std::exception&) {
        throw ValueError("invalid " + what + " '" + text + "' (expected a number)");
    }
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string::npos) {
            return parts;
        }
        start = pos + 1;
    }
}

std::pair<double, double> parse_pair(const std::string& text, const std::string& what) {
    const auto parts = split(text, ':');
    if (parts.size() != 2) {
        throw ValueError("invalid " + what + " '" + text + "' (expected LO:HI)");
    }
    return {parse_number(parts[0], what), parse_number(parts[1], what)};
}

std::vector<double> parse_grid(const std::string& text, const std::string& what) {
    std::vector<double> grid;
    for (const auto& part : split(text, ',')) {
        grid.push_back(parse_number(part, what));
    }
    return grid;
}

std::vector<Channel> parse_channel_list(const std::string& text) {
    std::vector<Channel> channels;
    for (const auto& part : split(text, ',')) {
        channels.push_back(parse_channel(part));
    }
    return channels;
}

std::vector<DivergenceKind> parse_divergence_list(const std::string& text) {
    if (text == "all") {
        return {DivergenceKind::Kl, DivergenceKind::SymmetricKl, DivergenceKind::JensenShannon,
                DivergenceKind::ChiSquared, DivergenceKind::Wasserstein1};
    }
    std::vector<DivergenceKind> kinds;
    for (const auto& part : split(text, ',')) {
        kinds.push_back(parse_divergence_kind(part));
    }
    return kinds;
}

/// Raw option strings shared by the subcommands, resolved into a RunConfig
/// after parsing.
struct Options {
    RunConfig config;
    std::string scheme = "fixed";
    std::string range = "0:1";
    std::string thresholds = "0.1:0.25";
    std::string channels;
    std::string format = "json";
    std::string out;
};

void add_binning_options(CLI::App* cmd, Options& opts) {
    cmd->add_option("--bins", opts.config.bins, "Number of bins (default 10)");
    cmd->add_option("--scheme", opts.scheme, "Binning scheme: fixed | quantile");
    cmd->add_option("--range", opts.range, "Intensity range LO:HI for the fixed scheme");
    cmd->add_option("--epsilon", opts.config.epsilon,
                    "Additive smoothing applied to bin proportions (default 1e-4)");
}

void add_output_options(CLI::App* cmd, Options& opts) {
    cmd->add_option("--channels", opts.channels, "Channels to report: r,g,b | gray (default all)");
    cmd->add_option("--format", opts.format, "Output format: json | csv");
    cmd->add_option("--out", opts.out, "Write the report to this path (default stdout)");
}

void finalize(Options& opts) {
    opts.config.scheme_mode = parse_bin_mode(opts.scheme);
    std::tie(opts.config.range_lo, opts.config.range_hi) = parse_pair(opts.range, "range");
    std::tie(opts.config.thresholds.moderate, opts.config.thresholds.significant) =
        parse_pair(opts.thresholds, "thresholds");
    if (!opts.channels.empty()) {
        opts.config.channels = parse_channel_list(opts.channels);
    }
    opts.config.format = parse_output_format(opts.format);
    opts.config.validate();
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_text_atomic(out_path, text);
    }
}

std::vector<std::filesystem::path> resolve_inputs(const std::string& input,
                                                  const std::string& pattern) {
    if (std::filesystem::is_directory(input)) {
        return list_corpus(input, pattern);
    }
    return {input};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Measure distribution shift in image data with the population stability index"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    // baseline -----------------------------------------------------------
    Options baseline_opts;
    std::string baseline_input;
    std::string baseline_pattern = "*.p[gpn]m";
    auto* cmd_baseline =
        app.add_subcommand("baseline", "Pool reference images into a persisted baseline");
    cmd_baseline->add_option("input", baseline_input, "Reference image file or directory")
        ->required();
    cmd_baseline->add_option("--pattern", baseline_pattern,
                             "Filename glob for directory inputs (default *.p[gpn]m)");
    add_binning_options(cmd_baseline, baseline_opts);
    cmd_baseline->add_option("--out", baseline_opts.out, "Baseline file to write")->required();

    // compare ------------------------------------------------------------
    Options compare_opts;
    std::string compare_baseline;
    std::string compare_target;
    std::string compare_pattern = "*.p[gpn]m";
    std::string compare_divergences;
    auto* cmd_compare =
        app.add_subcommand("compare", "Measure target images against a saved baseline");
    cmd_compare->add_option("baseline", compare_baseline, "Baseline file")->required();
    cmd_compare->add_option("target", compare_target, "Target image file or directory")
        ->required();
    cmd_compare->add_option("--pattern", compare_pattern,
                            "Filename glob for directory targets (default *.p[gpn]m)");
    cmd_compare->add_option("--thresholds", compare_opts.thresholds,
                            "Advisory PSI cutoffs T1:T2 (default 0.1:0.25)");
    cmd_compare->add_option("--divergences", compare_divergences,
                            "Companion divergences: kl,skl,js,chi2,w1 or 'all'");
    add_output_options(cmd_compare, compare_opts);

    // sweep ----------------------------------------------------------------
    Options sweep_opts;
    std::string sweep_image;
    std::string sweep_noise;
    std::string sweep_grid;
    std::string sweep_proportion_grid;
    auto* cmd_sweep = app.add_subcommand("sweep", "PSI vs. noise intensity on one image");
    cmd_sweep->add_option("image", sweep_image, "Image file")->required();
    cmd_sweep->add_option("--noise", sweep_noise, "Noise kind: gaussian | speckle | sp")
        ->required();
    cmd_sweep->add_option("--grid", sweep_grid,
                          "Variance (or amount) grid, comma-separated (default 0,0.1,...,1)");
    cmd_sweep->add_option("--proportion-grid", sweep_proportion_grid,
                          "Salt proportion grid for sp (default 0,0.1,...,1)");
    cmd_sweep->add_option("--seed", sweep_opts.config.seed, "Base seed (default 0)");
    add_binning_options(cmd_sweep, sweep_opts);
    add_output_options(cmd_sweep, sweep_opts);

    // corpus ---------------------------------------------------------------
    Options corpus_opts;
    corpus_opts.config.jobs =
        std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
    std::string corpus_dir;
    std::string corpus_noise;
    std::string corpus_pattern = "*.p[gpn]m";
    NoiseSpec corpus_spec;
    auto* cmd_corpus =
        app.add_subcommand("corpus", "Per-image PSI under one noise spec across a directory");
    cmd_corpus->add_option("dir", corpus_dir, "Image directory")->required();
    cmd_corpus->add_option("--noise", corpus_noise, "Noise kind: gaussian | speckle | sp")
        ->required();
    cmd_corpus->add_option("--pattern", corpus_pattern,
                           "Filename glob (default *.p[gpn]m)");
    cmd_corpus->add_option("--mean", corpus_spec.mean, "Gaussian/speckle mean (default 0)");
    auto* corpus_variance =
        cmd_corpus->add_option("--variance", corpus_spec.variance, "Gaussian/speckle variance");
    auto* corpus_amount =
        cmd_corpus->add_option("--amount", corpus_spec.amount, "Salt-and-pepper amount");
    cmd_corpus->add_option("--proportion", corpus_spec.proportion,
                           "Salt share of replaced elements (default 0.5)");
    cmd_corpus->add_option("--seed", corpus_opts.config.seed,
                           "Base seed; image i uses a seed derived from (seed, i)");
    cmd_corpus->add_option("--jobs", corpus_opts.config.jobs,
                           "Worker threads (results are identical for any count)");
    add_binning_options(cmd_corpus, corpus_opts);
    add_output_options(cmd_corpus, corpus_opts);

    try {
        app.parse(argc, argv);

        if (app.got_subcommand(cmd_baseline)) {
            finalize(baseline_opts);
            const auto inputs = resolve_inputs(baseline_input, baseline_pattern);
            std::vector<std::string> skipped;
            const BaselineFile baseline =
                build_baseline(inputs, baseline_opts.config.scheme(),
                               baseline_opts.config.epsilon, baseline_input, &skipped);
            for (const auto& reason : skipped) {
                std::cerr << "warning: skipped " << reason << "\n";
            }
            save_baseline(baseline, baseline_opts.out);
            std::cerr << "baseline written: " << baseline_opts.out << " ("
                      << inputs.size() - skipped.size() << " images pooled, " << skipped.size()
                      << " skipped)\n";
        } else if (app.got_subcommand(cmd_compare)) {
            finalize(compare_opts);
            const BaselineFile baseline = load_baseline(compare_baseline);
            const auto targets = resolve_inputs(compare_target, compare_pattern);
            std::vector<DivergenceKind> companions;
            if (!compare_divergences.empty()) {
                companions = parse_divergence_list(compare_divergences);
            }
            const DriftReport report = compare_with_baseline(
                baseline, targets, compare_target, compare_opts.config.thresholds, companions);
            for (const auto& reason : report.skipped) {
                std::cerr << "warning: skipped " << reason << "\n";
            }
            // The report echoes the binning the baseline was built with.
            compare_opts.config.bins = baseline.scheme.bin_count;
            compare_opts.config.scheme_mode = baseline.scheme.mode;
            compare_opts.config.range_lo = baseline.scheme.lo;
            compare_opts.config.range_hi = baseline.scheme.hi;
            compare_opts.config.epsilon = baseline.epsilon;
            emit(compare_opts.config.format == OutputFormat::Json
                     ? report_json(report, compare_opts.config).dump(2) + "\n"
                     : report_csv(report, compare_opts.config),
                 compare_opts.out);
        } else if (app.got_subcommand(cmd_sweep)) {
            finalize(sweep_opts);
            const Image img = load_image(sweep_image);
            const NoiseKind kind = parse_noise_kind(sweep_noise);
            SweepGrids grids;
            grids.axis1 = sweep_grid.empty() ? default_grid() : parse_grid(sweep_grid, "grid");
            if (kind == NoiseKind::SaltPepper) {
                grids.axis2 = sweep_proportion_grid.empty()
                                  ? default_grid()
                                  : parse_grid(sweep_proportion_grid, "proportion grid");
            }
            const SweepResult sweep =
                run_sweep(img, kind, grids, sweep_opts.config.scheme(),
                          sweep_opts.config.epsilon, sweep_opts.config.seed, sweep_image);
            emit(sweep_opts.config.format == OutputFormat::Json
                     ? sweep_json(sweep, sweep_opts.config).dump(2) + "\n"
                     : sweep_csv(sweep, sweep_opts.config),
                 sweep_opts.out);
        } else if (app.got_subcommand(cmd_corpus)) {
            finalize(corpus_opts);
            corpus_spec.kind = parse_noise_kind(corpus_noise);
            if (corpus_spec.kind == NoiseKind::SaltPepper) {
                if (corpus_amount->count() == 0) {
                    throw ValueError("--amount is required for salt-and-pepper corpus runs");
                }
            } else if (corpus_variance->count() == 0) {
                throw ValueError("--variance is required for gaussian/speckle corpus runs");
            }
            const auto paths = list_corpus(corpus_dir, corpus_pattern);
            if (paths.empty()) {
                throw IoError("no file matching '" + corpus_pattern + "' in " + corpus_dir);
            }
            const CorpusResult corpus =
                run_corpus(paths, corpus_spec, corpus_opts.config.scheme(),
                           corpus_opts.config.epsilon, corpus_opts.config.seed,
                           corpus_opts.config.jobs);
            for (const auto& skip : corpus.skips) {
                std::cerr << "warning: skipped " << skip.reason << "\n";
            }
            emit(corpus_opts.config.format == OutputFormat::Json
                     ? corpus_json(corpus, corpus_opts.config).dump(2) + "\n"
                     : corpus_csv(corpus, corpus_opts.config),
                 corpus_opts.out);
        }
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const ValueError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
