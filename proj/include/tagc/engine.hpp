#pragma once

#include <utility>

#include "tagc/image.hpp"

namespace tagc {

struct EnhancementConfig {
    double gamma_control = 5.0;  // must keep gamma > 0 for all inputs
    double amplitude = 1.0;      // output scale, > 0
};

// Per-image analysis record produced alongside the enhanced image.
struct TagcAnalysis {
    ChannelStats stats;
    double luminance = 0.0;   // weighted sum of channel means
    double avg_color = 0.0;   // mean of the three channel means
    double gamma = 0.0;       // adaptive gamma for this image
};

double luminance_factor(const ChannelStats& stats);

double average_color_factor(const ChannelStats& stats);

// gamma_control + (0.5 - L) * (1 - mu) - 2 * L. Throws ConfigError if the
// result is not strictly positive.
double adaptive_gamma(double luminance, double avg_color,
                      const EnhancementConfig& cfg = {});

// Per-sample map v -> amplitude * v^(2/gamma), clamped to [0, 1].
ImagePlanar apply_gamma(const ImagePlanar& img, double gamma, double amplitude);

// Full pipeline: channel means -> L -> mu -> gamma -> correction.
std::pair<ImagePlanar, TagcAnalysis> enhance(const ImagePlanar& img,
                                             const EnhancementConfig& cfg = {});

// Conventional gamma correction with a caller-supplied constant gamma.
ImagePlanar fixed_gamma_baseline(const ImagePlanar& img, double gamma);

}  // namespace tagc
