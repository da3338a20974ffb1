#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace driftscope {

/// Identifies one channel plane of an Image. Gray is only valid on
/// single-channel images, R/G/B only on three-channel ones.
enum class Channel { R, G, B, Gray };

std::string to_string(Channel ch);
Channel parse_channel(const std::string& name);

/// Channel-separated raster with intensities normalized to [0, 1].
///
/// Planes are stored row-major; plane order is R, G, B for color images.
/// Images are immutable by convention once built: every operation in this
/// library takes them by const reference and returns fresh values, so they
/// are safe to share across concurrent workers.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::vector<double>> planes;

    std::size_t pixel_count() const {
        return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    }
    /// Total value count across planes (width * height * channels).
    std::size_t element_count() const { return planes.size() * pixel_count(); }
    int channel_count() const { return static_cast<int>(planes.size()); }
};

/// Throws ValueError unless the Image invariants hold: 1 or 3 planes, every
/// plane of size width*height, every intensity in [0, 1].
void validate(const Image& img);

/// The channel ids present on an image: {R, G, B} or {Gray}.
std::vector<Channel> channels_of(const Image& img);

/// Loads a PGM/PPM file (magic P2, P3, P5 or P6). Intensities are divided
/// by the header max value, so an 8-bit 255 maps to 1.0. Two-byte samples
/// (max value > 255) are big-endian per the Netpbm convention.
/// Throws IoError for missing files, unsupported formats, zero dimensions,
/// or truncated pixel data.
Image load_image(const std::filesystem::path& path);

/// Writes binary PGM (one plane) or PPM (three planes), quantizing each
/// intensity to round(v * max_value).
void save_image(const Image& img, const std::filesystem::path& path, int max_value = 255);

/// Full plane of the requested channel, row-major. Throws ValueError when
/// the channel does not match the image's channel count.
const std::vector<double>& channel_samples(const Image& img, Channel ch);

/// Regular files directly under `dir` whose filename matches `pattern`
/// (shell glob), sorted lexicographically by path. Listing is pure
/// bookkeeping: unreadable entries still appear and are recorded as skips
/// by whatever loads them later.
std::vector<std::filesystem::path> list_corpus(const std::filesystem::path& dir,
                                               const std::string& pattern = "*.p[gpn]m");

}  // namespace driftscope
