#include "driftscope/image.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <string_view>

#include "driftscope/error.hpp"

namespace driftscope {

namespace {

// Pulls whitespace-separated header tokens out of a PNM buffer; '#' starts
// a comment running to end of line.
class TokenReader {
public:
    TokenReader(std::string_view data, std::size_t pos, std::string path)
        : data_(data), pos_(pos), path_(std::move(path)) {}

    void skip_separators() {
        while (pos_ < data_.size()) {
            const char c = data_[pos_];
            if (c == '#') {
                while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
            } else if (is_space(c)) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    long next_int(const char* what) {
        skip_separators();
        if (pos_ >= data_.size()) {
            throw IoError("truncated header (missing " + std::string(what) + "): " + path_);
        }
        bool any = false;
        long value = 0;
        while (pos_ < data_.size() && data_[pos_] >= '0' && data_[pos_] <= '9') {
            value = value * 10 + (data_[pos_] - '0');
            if (value > 1'000'000'000L) {
                throw IoError("implausible " + std::string(what) + ": " + path_);
            }
            ++pos_;
            any = true;
        }
        if (!any) {
            throw IoError("malformed " + std::string(what) + ": " + path_);
        }
        return value;
    }

    std::size_t pos() const { return pos_; }

    static bool is_space(char c) {
        return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
    }

private:
    std::string_view data_;
    std::size_t pos_;
    std::string path_;
};

}  // namespace

std::string to_string(Channel ch) {
    switch (ch) {
        case Channel::R: return "r";
        case Channel::G: return "g";
        case Channel::B: return "b";
        case Channel::Gray: return "gray";
    }
    throw InternalError("unknown channel tag");
}

Channel parse_channel(const std::string& name) {
    if (name == "r" || name == "R") return Channel::R;
    if (name == "g" || name == "G") return Channel::G;
    if (name == "b" || name == "B") return Channel::B;
    if (name == "gray" || name == "grey") return Channel::Gray;
    throw ValueError("unknown channel '" + name + "' (expected r, g, b, or gray)");
}

void validate(const Image& img) {
    if (img.width <= 0 || img.height <= 0) {
        throw ValueError("image dimensions must be positive");
    }
    if (img.planes.size() != 1 && img.planes.size() != 3) {
        throw ValueError("image must have 1 or 3 channel planes");
    }
    const std::size_t expected = img.pixel_count();
    for (const auto& plane : img.planes) {
        if (plane.size() != expected) {
            throw ValueError("channel plane size does not match width*height");
        }
        for (const double v : plane) {
            if (!(v >= 0.0 && v <= 1.0)) {
                throw ValueError("intensity outside [0, 1]");
            }
        }
    }
}

std::vector<Channel> channels_of(const Image& img) {
    if (img.channel_count() == 1) return {Channel::Gray};
    if (img.channel_count() == 3) return {Channel::R, Channel::G, Channel::B};
    throw ValueError("image must have 1 or 3 channel planes");
}

Image load_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open image file: " + path.string());
    }
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw IoError("read failed: " + path.string());
    }

    if (data.size() < 2 || data[0] != 'P' ||
        (data[1] != '2' && data[1] != '3' && data[1] != '5' && data[1] != '6')) {
        throw IoError("unsupported format (expected PGM/PPM magic P2/P3/P5/P6): " + path.string());
    }
    const char magic = data[1];
    const bool binary = magic == '5' || magic == '6';
    const int channels = (magic == '3' || magic == '6') ? 3 : 1;

    TokenReader reader(data, 2, path.string());
    const long width = reader.next_int("width");
    const long height = reader.next_int("height");
    const long max_value = reader.next_int("max value");
    if (width == 0 || height == 0) {
        throw IoError("zero-dimension image: " + path.string());
    }
    if (max_value < 1 || max_value > 65535) {
        throw IoError("max value out of range [1, 65535]: " + path.string());
    }

    Image img;
    img.width = static_cast<int>(width);
    img.height = static_cast<int>(height);
    const std::size_t pixels = img.pixel_count();
    img.planes.assign(channels, std::vector<double>(pixels));

    const std::size_t samples = pixels * channels;
    const double scale = 1.0 / static_cast<double>(max_value);

    if (binary) {
        // A single whitespace byte separates the max value from the raster.
        std::size_t pos = reader.pos();
        if (pos >= data.size() || !TokenReader::is_space(data[pos])) {
            throw IoError("malformed raster separator: " + path.string());
        }
        ++pos;
        const int bytes_per_sample = max_value > 255 ? 2 : 1;
        if (data.size() - pos < samples * bytes_per_sample) {
            throw IoError("truncated pixel data: " + path.string());
        }
        const auto* raw = reinterpret_cast<const unsigned char*>(data.data()) + pos;
        for (std::size_t i = 0; i < samples; ++i) {
            long value;
            if (bytes_per_sample == 2) {
                value = (static_cast<long>(raw[2 * i]) << 8) | raw[2 * i + 1];  // big-endian
            } else {
                value = raw[i];
            }
            if (value > max_value) {
                throw IoError("sample exceeds max value: " + path.string());
            }
            img.planes[i % channels][i / channels] = static_cast<double>(value) * scale;
        }
    } else {
        for (std::size_t i = 0; i < samples; ++i) {
            const long value = reader.next_int("sample");
            if (value > max_value) {
                throw IoError("sample exceeds max value: " + path.string());
            }
            img.planes[i % channels][i / channels] = static_cast<double>(value) * scale;
        }
    }
    return img;
}

void save_image(const Image& img, const std::filesystem::path& path, int max_value) {
    validate(img);
    if (max_value < 1 || max_value > 65535) {
        throw ValueError("max value out of range [1, 65535]");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write image file: " + path.string());
    }
    const int channels = img.channel_count();
    out << (channels == 3 ? "P6" : "P5") << "\n"
        << img.width << " " << img.height << "\n"
        << max_value << "\n";

    const std::size_t pixels = img.pixel_count();
    std::string raster;
    const int bytes_per_sample = max_value > 255 ? 2 : 1;
    raster.reserve(pixels * channels * bytes_per_sample);
    for (std::size_t p = 0; p < pixels; ++p) {
        for (int c = 0; c < channels; ++c) {
            const auto value = static_cast<long>(std::llround(img.planes[c][p] * max_value));
            if (bytes_per_sample == 2) {
                raster.push_back(static_cast<char>((value >> 8) & 0xff));
            }
            raster.push_back(static_cast<char>(value & 0xff));
        }
    }
    out.write(raster.data(), static_cast<std::streamsize>(raster.size()));
    out.flush();
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

const std::vector<double>& channel_samples(const Image& img, Channel ch) {
    const int channels = img.channel_count();
    if (ch == Channel::Gray) {
        if (channels != 1) {
            throw ValueError("channel 'gray' requested on a " + std::to_string(channels) +
                             "-channel image");
        }
        return img.planes[0];
    }
    if (channels != 3) {
        throw ValueError("channel '" + to_string(ch) + "' requested on a " +
                         std::to_string(channels) + "-channel image");
    }
    switch (ch) {
        case Channel::R: return img.planes[0];
        case Channel::G: return img.planes[1];
        case Channel::B: return img.planes[2];
        default: break;
    }
    throw InternalError("unreachable channel dispatch");
}

std::vector<std::filesystem::path> list_corpus(const std::filesystem::path& dir,
                                               const std::string& pattern) {
    if (!std::filesystem::is_directory(dir)) {
        throw IoError("directory missing: " + dir.string());
    }
    std::vector<std::filesystem::path> paths;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (fnmatch(pattern.c_str(), name.c_str(), 0) == 0) {
            paths.push_back(entry.path());
        }
    }
    std::sort(paths.begin(), paths.end(), [](const auto& a, const auto& b) {
        return a.string() < b.string();
    });
    return paths;
}

}  // namespace driftscope
