#pragma once

#include <cstddef>
#include <vector>

#include "tagc/errors.hpp"

namespace tagc {

// Rec.709-style luma weights, used both for the luminance factor and for
// the grayscale conversion feeding the metrics.
inline constexpr double kWeightR = 0.2126;
inline constexpr double kWeightG = 0.7152;
inline constexpr double kWeightB = 0.0722;

// Planar floating-point image, samples in [0, 1], row-major planes.
// Treated as immutable once filled; every pipeline operation returns a
// fresh image.
class ImagePlanar {
public:
    ImagePlanar() = default;

    ImagePlanar(int width, int height, int channels, double fill = 0.0)
        : width_(width), height_(height), channels_(channels) {
        if (width < 1 || height < 1)
            throw ShapeError("image dimensions must be at least 1x1");
        if (channels != 1 && channels != 3)
            throw ShapeError("image must have 1 or 3 channels");
        planes_.assign(static_cast<std::size_t>(channels),
                       std::vector<double>(pixel_count(), fill));
    }

    int width() const { return width_; }
    int height() const { return height_; }
    int channels() const { return channels_; }
    std::size_t pixel_count() const {
        return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
    }

    std::vector<double>& plane(int c) { return planes_.at(static_cast<std::size_t>(c)); }
    const std::vector<double>& plane(int c) const {
        return planes_.at(static_cast<std::size_t>(c));
    }

    double at(int c, int x, int y) const {
        return planes_[static_cast<std::size_t>(c)]
                      [static_cast<std::size_t>(y) * width_ + x];
    }
    double& at(int c, int x, int y) {
        return planes_[static_cast<std::size_t>(c)]
                      [static_cast<std::size_t>(y) * width_ + x];
    }

    bool same_shape(const ImagePlanar& other) const {
        return width_ == other.width_ && height_ == other.height_ &&
               channels_ == other.channels_;
    }

private:
    int width_ = 0;
    int height_ = 0;
    int channels_ = 0;
    std::vector<std::vector<double>> planes_;
};

struct ChannelStats {
    double mean_r = 0.0;
    double mean_g = 0.0;
    double mean_b = 0.0;
};

// Per-plane arithmetic means. A 1-channel image replicates its single
// mean into all three fields.
ChannelStats channel_means(const ImagePlanar& img);

// Weighted grayscale conversion; 1-channel input is returned unchanged.
ImagePlanar to_grayscale(const ImagePlanar& img);

}  // namespace tagc
