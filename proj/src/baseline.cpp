#include "driftscope/baseline.hpp"

#include <ctime>
#include <fstream>
#include <iterator>
#include <utility>

#include <json.hpp>

#include "driftscope/error.hpp"
#include "driftscope/report.hpp"
#include "driftscope/version.hpp"

namespace driftscope {

namespace {

std::string iso_utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm parts{};
    gmtime_r(&now, &parts);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &parts);
    return buf;
}

}  // namespace

void BaselineFile::validate() const {
    if (format_version != kBaselineFormatVersion) {
        throw ValueError("unrecognized baseline format version " +
                         std::to_string(format_version));
    }
    scheme.validate();
    if (!(epsilon >= 0.0)) {
        throw ValueError("epsilon must be >= 0");
    }
    if (channels.size() != 1 && channels.size() != 3) {
        throw ValueError("baseline must carry 1 or 3 channel distributions");
    }
    for (std::size_t i = 0; i < channels.size(); ++i) {
        channels[i].dist.validate();
        for (std::size_t j = 0; j < i; ++j) {
            if (channels[j].channel == channels[i].channel) {
                throw ValueError("duplicate channel in baseline");
            }
        }
    }
}

BaselineFile build_baseline(const std::vector<std::filesystem::path>& inputs,
                            const BinningScheme& scheme, double epsilon,
                            const std::string& source_desc, std::vector<std::string>* skipped) {
    scheme.validate();
    if (!(epsilon >= 0.0)) {
        throw ValueError("epsilon must be >= 0");
    }
    if (inputs.empty()) {
        throw ValueError("baseline needs at least one input path");
    }

    std::vector<WeightedSample> pools;
    std::vector<Channel> tags;
    for (const auto& path : inputs) {
        Image img;
        try {
            img = load_image(path);
        } catch (const IoError& e) {
            if (skipped) {
                skipped->push_back(e.what());
            }
            continue;
        }
        if (tags.empty()) {
            tags = channels_of(img);
            pools.resize(tags.size());
        } else if (img.channel_count() != static_cast<int>(tags.size())) {
            throw ValueError("mixed channel counts in baseline inputs: " + path.string() +
                             " has " + std::to_string(img.channel_count()) + ", expected " +
                             std::to_string(tags.size()));
        }
        for (std::size_t c = 0; c < tags.size(); ++c) {
            pools[c].add(img.planes[c]);
        }
    }
    if (tags.empty()) {
        throw IoError("no loadable baseline input");
    }

    BaselineFile baseline;
    baseline.tool_version = kToolVersion;
    baseline.created_at = iso_utc_now();
    baseline.source = source_desc;
    baseline.scheme = scheme;
    baseline.epsilon = epsilon;
    for (std::size_t c = 0; c < tags.size(); ++c) {
        const auto edges = make_edges(scheme, pools[c]);
        baseline.channels.push_back({tags[c], bin_weighted(pools[c], edges, epsilon)});
    }
    baseline.validate();
    return baseline;
}

void save_baseline(const BaselineFile& baseline, const std::filesystem::path& path) {
    baseline.validate();
    nlohmann::json j;
    j["format_version"] = baseline.format_version;
    j["tool_version"] = baseline.tool_version;
    j["created_at"] = baseline.created_at;
    j["source"] = baseline.source;
    j["scheme"]["mode"] = to_string(baseline.scheme.mode);
    j["scheme"]["bins"] = baseline.scheme.bin_count;
    if (baseline.scheme.mode == BinMode::FixedRange) {
        j["scheme"]["range"] = {baseline.scheme.lo, baseline.scheme.hi};
    }
    j["epsilon"] = baseline.epsilon;
    for (const auto& ch : baseline.channels) {
        nlohmann::json entry;
        entry["channel"] = to_string(ch.channel);
        entry["edges"] = ch.dist.edges;
        entry["counts"] = ch.dist.counts;
        j["channels"].push_back(std::move(entry));
    }
    write_text_atomic(path, j.dump(2) + "\n");
}

BaselineFile load_baseline(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open baseline file: " + path.string());
    }
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw IoError("read failed: " + path.string());
    }

    try {
        const nlohmann::json j = nlohmann::json::parse(text);
        BaselineFile baseline;
        baseline.format_version = j.at("format_version").get<int>();
        if (baseline.format_version != kBaselineFormatVersion) {
            throw IoError("unrecognized baseline format version " +
                          std::to_string(baseline.format_version) + ": " + path.string());
        }
        baseline.tool_version = j.at("tool_version").get<std::string>();
        baseline.created_at = j.at("created_at").get<std::string>();
        baseline.source = j.at("source").get<std::string>();
        baseline.scheme.mode = parse_bin_mode(j.at("scheme").at("mode").get<std::string>());
        baseline.scheme.bin_count = j.at("scheme").at("bins").get<int>();
        if (baseline.scheme.mode == BinMode::FixedRange) {
            const auto& range = j.at("scheme").at("range");
            baseline.scheme.lo = range.at(0).get<double>();
            baseline.scheme.hi = range.at(1).get<double>();
        }
        baseline.epsilon = j.at("epsilon").get<double>();
        for (const auto& entry : j.at("channels")) {
            BaselineChannel ch;
            ch.channel = parse_channel(entry.at("channel").get<std::string>());
            ch.dist = make_binned(entry.at("edges").get<std::vector<double>>(),
                                  entry.at("counts").get<std::vector<std::int64_t>>(),
                                  baseline.epsilon);
            baseline.channels.push_back(std::move(ch));
        }
        baseline.validate();
        return baseline;
    } catch (const IoError&) {
        throw;
    } catch (const std::exception& e) {
        // Parse errors, missing keys, and invariant violations all mean the
        // same thing to the caller: this is not a usable baseline file.
        throw IoError("malformed baseline file: " + path.string() + ": " + e.what());
    }
}

}  // namespace driftscope
