#include "driftscope/report.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <system_error>
#include <utility>

#include "driftscope/error.hpp"
#include "driftscope/version.hpp"

namespace driftscope {

namespace {

/// Output positions of the requested channels within the channels actually
/// present; an empty request selects everything in its present order.
std::vector<std::size_t> selected_indices(const std::vector<Channel>& present,
                                          const std::vector<Channel>& requested) {
    std::vector<std::size_t> indices;
    if (requested.empty()) {
        indices.resize(present.size());
        for (std::size_t i = 0; i < present.size(); ++i) {
            indices[i] = i;
        }
        return indices;
    }
    for (const Channel ch : requested) {
        const auto it = std::find(present.begin(), present.end(), ch);
        if (it == present.end()) {
            throw ValueError("channel '" + to_string(ch) + "' not present in this input");
        }
        indices.push_back(static_cast<std::size_t>(it - present.begin()));
    }
    return indices;
}

nlohmann::json config_echo(const RunConfig& config) {
    nlohmann::json j;
    j["bins"] = config.bins;
    j["scheme"] = to_string(config.scheme_mode);
    if (config.scheme_mode == BinMode::FixedRange) {
        j["range"] = {config.range_lo, config.range_hi};
    }
    j["epsilon"] = config.epsilon;
    j["seed"] = config.seed;
    j["thresholds"] = {{"moderate", config.thresholds.moderate},
                       {"significant", config.thresholds.significant},
                       {"advisory", true}};
    if (config.channels.empty()) {
        j["channels"] = "all";
    } else {
        auto names = nlohmann::json::array();
        for (const Channel ch : config.channels) {
            names.push_back(to_string(ch));
        }
        j["channels"] = std::move(names);
    }
    // Worker count is deliberately not echoed: results are independent of
    // parallelism, so reports rerun with a different --jobs stay identical.
    j["format"] = to_string(config.format);
    return j;
}

nlohmann::json wrap(const RunConfig& config, nlohmann::json results) {
    nlohmann::json j;
    j["tool_version"] = kToolVersion;
    j["config_echo"] = config_echo(config);
    j["results"] = std::move(results);
    return j;
}

/// RFC-4180 quoting, applied only when the field needs it.
std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) {
        return field;
    }
    std::string quoted = "\"";
    for (const char c : field) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

std::string join_values(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ';';
        out += format_double(values[i]);
    }
    return out;
}

}  // namespace

DriftReport compare_with_baseline(const BaselineFile& baseline,
                                  const std::vector<std::filesystem::path>& targets,
                                  const std::string& target_desc, const Thresholds& thresholds,
                                  const std::vector<DivergenceKind>& companions) {
    baseline.validate();
    thresholds.validate();
    if (targets.empty()) {
        throw ValueError("comparison needs at least one target path");
    }

    const std::size_t channel_count = baseline.channels.size();
    std::vector<WeightedSample> pools(channel_count);
    std::vector<std::string> skipped;
    std::size_t loaded = 0;
    for (const auto& path : targets) {
        Image img;
        try {
            img = load_image(path);
        } catch (const IoError& e) {
            skipped.push_back(e.what());
            continue;
        }
        if (img.channel_count() != static_cast<int>(channel_count)) {
            throw ValueError("channel-count mismatch: baseline has " +
                             std::to_string(channel_count) + " channels, target " +
                             path.string() + " has " + std::to_string(img.channel_count()));
        }
        for (std::size_t c = 0; c < channel_count; ++c) {
            pools[c].add(img.planes[c]);
        }
        ++loaded;
    }
    if (loaded == 0) {
        throw IoError("no loadable target image");
    }

    DriftReport report;
    report.baseline_source = baseline.source;
    report.target_source = target_desc;
    report.thresholds = thresholds;
    report.companions = companions;
    report.skipped = std::move(skipped);
    report.bins = baseline.scheme.bin_count;
    report.epsilon = baseline.epsilon;
    report.companion_values.assign(companions.size(), {});
    for (std::size_t c = 0; c < channel_count; ++c) {
        const BaselineChannel& ref = baseline.channels[c];
        const BinnedDistribution target =
            bin_weighted(pools[c], ref.dist.edges, baseline.epsilon);
        report.channels.push_back(ref.channel);
        report.psi.push_back(psi(ref.dist, target));
        report.labels.push_back(classify(report.psi.back(), thresholds));
        for (std::size_t k = 0; k < companions.size(); ++k) {
            report.companion_values[k].push_back(
                compute_divergence(companions[k], ref.dist, target));
        }
    }
    return report;
}

void to_json(nlohmann::json& j, const NoiseSpec& spec) {
    j = nlohmann::json{{"kind", to_string(spec.kind)}, {"seed", spec.seed}};
    switch (spec.kind) {
        case NoiseKind::Gaussian:
        case NoiseKind::Speckle:
            j["mean"] = spec.mean;
            j["variance"] = spec.variance;
            break;
        case NoiseKind::SaltPepper:
            j["amount"] = spec.amount;
            j["proportion"] = spec.proportion;
            break;
    }
}

void from_json(const nlohmann::json& j, NoiseSpec& spec) {
    spec = NoiseSpec{};
    spec.kind = parse_noise_kind(j.at("kind").get<std::string>());
    spec.seed = j.value("seed", std::uint64_t{0});
    spec.mean = j.value("mean", 0.0);
    spec.variance = j.value("variance", 0.0);
    spec.amount = j.value("amount", 0.0);
    spec.proportion = j.value("proportion", 0.5);
    spec.validate();
}

std::string format_double(double value) {
    char buf[32];
    const auto result = std::to_chars(buf, buf + sizeof(buf), value);
    if (result.ec != std::errc{}) {
        throw InternalError("double formatting failed");
    }
    return std::string(buf, result.ptr);
}

nlohmann::json report_json(const DriftReport& report, const RunConfig& config) {
    nlohmann::json results;
    results["baseline"] = report.baseline_source;
    results["target"] = report.target_source;
    auto channels = nlohmann::json::array();
    for (const std::size_t c : selected_indices(report.channels, config.channels)) {
        nlohmann::json entry;
        entry["channel"] = to_string(report.channels[c]);
        entry["psi"] = report.psi[c];
        entry["verdict"] = to_string(report.labels[c]);
        for (std::size_t k = 0; k < report.companions.size(); ++k) {
            entry[to_string(report.companions[k])] = report.companion_values[k][c];
        }
        channels.push_back(std::move(entry));
    }
    results["channels"] = std::move(channels);
    results["skipped"] = report.skipped;
    return wrap(config, std::move(results));
}

nlohmann::json sweep_json(const SweepResult& sweep, const RunConfig& config) {
    nlohmann::json results;
    results["kind"] = to_string(sweep.kind);
    if (!sweep.image_id.empty()) {
        results["image"] = sweep.image_id;
    }
    results["axis1"] = {{"name", sweep.axis1_name}, {"values", sweep.axis1}};
    if (!sweep.axis2.empty()) {
        results["axis2"] = {{"name", "proportion"}, {"values", sweep.axis2}};
    }
    auto psi_entries = nlohmann::json::array();
    for (const std::size_t c : selected_indices(sweep.channels, config.channels)) {
        psi_entries.push_back(nlohmann::json{{"channel", to_string(sweep.channels[c])},
                                             {"values", sweep.values[c]}});
    }
    results["psi"] = std::move(psi_entries);
    return wrap(config, std::move(results));
}

nlohmann::json corpus_json(const CorpusResult& corpus, const RunConfig& config) {
    const auto summary_selection = selected_indices(corpus.channels, config.channels);

    nlohmann::json results;
    results["noise"] = corpus.spec;
    results["noise"].erase("seed");  // superseded by the per-image derived seeds
    results["base_seed"] = corpus.base_seed;

    auto images = nlohmann::json::array();
    for (const auto& img : corpus.images) {
        nlohmann::json entry;
        entry["path"] = img.path;
        auto psi_entries = nlohmann::json::array();
        for (std::size_t c = 0; c < img.channels.size(); ++c) {
            if (!config.channels.empty() &&
                std::find(config.channels.begin(), config.channels.end(), img.channels[c]) ==
                    config.channels.end()) {
                continue;
            }
            psi_entries.push_back(nlohmann::json{{"channel", to_string(img.channels[c])},
                                                 {"psi", img.psi[c]}});
        }
        entry["psi"] = std::move(psi_entries);
        images.push_back(std::move(entry));
    }
    results["images"] = std::move(images);

    auto skips = nlohmann::json::array();
    for (const auto& skip : corpus.skips) {
        skips.push_back(nlohmann::json{{"path", skip.path}, {"reason", skip.reason}});
    }
    results["skips"] = std::move(skips);

    auto summary = nlohmann::json::array();
    for (const std::size_t c : summary_selection) {
        std::size_t count = 0;
        for (const auto& img : corpus.images) {
            count += static_cast<std::size_t>(
                std::count(img.channels.begin(), img.channels.end(), corpus.channels[c]));
        }
        const BoxStats& stats = corpus.stats[c];
        nlohmann::json entry;
        entry["channel"] = to_string(corpus.channels[c]);
        entry["count"] = count;
        entry["median"] = stats.median;
        entry["q1"] = stats.q1;
        entry["q3"] = stats.q3;
        entry["whisker_low"] = stats.whisker_low;
        entry["whisker_high"] = stats.whisker_high;
        entry["outliers"] = stats.outliers;
        summary.push_back(std::move(entry));
    }
    results["summary"] = std::move(summary);
    return wrap(config, std::move(results));
}

std::string report_csv(const DriftReport& report, const RunConfig& config) {
    std::string out = "channel,psi,verdict";
    for (const DivergenceKind kind : report.companions) {
        out += "," + to_string(kind);
    }
    out += "\n";
    for (const std::size_t c : selected_indices(report.channels, config.channels)) {
        out += to_string(report.channels[c]) + "," + format_double(report.psi[c]) + "," +
               to_string(report.labels[c]);
        for (std::size_t k = 0; k < report.companions.size(); ++k) {
            out += "," + format_double(report.companion_values[k][c]);
        }
        out += "\n";
    }
    return out;
}

std::string sweep_csv(const SweepResult& sweep, const RunConfig& config) {
    const auto selection = selected_indices(sweep.channels, config.channels);
    std::string out;
    if (sweep.kind == NoiseKind::SaltPepper) {
        out = "amount,proportion,channel,psi\n";
        for (const std::size_t c : selection) {
            for (std::size_t i1 = 0; i1 < sweep.axis1.size(); ++i1) {
                for (std::size_t i2 = 0; i2 < sweep.axis2.size(); ++i2) {
                    out += format_double(sweep.axis1[i1]) + "," +
                           format_double(sweep.axis2[i2]) + "," + to_string(sweep.channels[c]) +
                           "," + format_double(sweep.values[c][i1 * sweep.axis2.size() + i2]) +
                           "\n";
                }
            }
        }
    } else {
        out = "noise_level,channel,psi\n";
        for (const std::size_t c : selection) {
            for (std::size_t i1 = 0; i1 < sweep.axis1.size(); ++i1) {
                out += format_double(sweep.axis1[i1]) + "," + to_string(sweep.channels[c]) + "," +
                       format_double(sweep.values[c][i1]) + "\n";
            }
        }
    }
    return out;
}

std::string corpus_csv(const CorpusResult& corpus, const RunConfig& config) {
    const auto summary_selection = selected_indices(corpus.channels, config.channels);
    std::string out = "image,channel,psi\n";
    for (const auto& img : corpus.images) {
        for (std::size_t c = 0; c < img.channels.size(); ++c) {
            if (!config.channels.empty() &&
                std::find(config.channels.begin(), config.channels.end(), img.channels[c]) ==
                    config.channels.end()) {
                continue;
            }
            out += csv_escape(img.path) + "," + to_string(img.channels[c]) + "," +
                   format_double(img.psi[c]) + "\n";
        }
    }
    out += "\n";
    out += "channel,count,median,q1,q3,whisker_low,whisker_high,outliers\n";
    for (const std::size_t c : summary_selection) {
        std::size_t count = 0;
        for (const auto& img : corpus.images) {
            count += static_cast<std::size_t>(
                std::count(img.channels.begin(), img.channels.end(), corpus.channels[c]));
        }
        const BoxStats& stats = corpus.stats[c];
        out += to_string(corpus.channels[c]) + "," + std::to_string(count) + "," +
               format_double(stats.median) + "," + format_double(stats.q1) + "," +
               format_double(stats.q3) + "," + format_double(stats.whisker_low) + "," +
               format_double(stats.whisker_high) + "," + join_values(stats.outliers) + "\n";
    }
    return out;
}

void write_text_atomic(const std::filesystem::path& path, std::string_view content) {
    static std::atomic<unsigned> counter{0};
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter.fetch_add(1));

    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot write file: " + path.string());
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw IoError("write failed: " + path.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignored;
        std::filesystem::remove(tmp, ignored);
        throw IoError("cannot move output into place: " + path.string() + ": " + ec.message());
    }
}

}  // namespace driftscope
