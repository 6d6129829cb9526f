#include "tagc/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tagc {

double luminance_factor(const ChannelStats& stats) {
    return kWeightR * stats.mean_r + kWeightG * stats.mean_g +
           kWeightB * stats.mean_b;
}

double average_color_factor(const ChannelStats& stats) {
    return (stats.mean_r + stats.mean_g + stats.mean_b) / 3.0;
}

double adaptive_gamma(double luminance, double avg_color,
                      const EnhancementConfig& cfg) {
    const double gamma = cfg.gamma_control +
                         (0.5 - luminance) * (1.0 - avg_color) -
                         2.0 * luminance;
    if (gamma <= 0.0)
        throw ConfigError("gamma_control " + std::to_string(cfg.gamma_control) +
                          " yields non-positive gamma " + std::to_string(gamma));
    return gamma;
}

ImagePlanar apply_gamma(const ImagePlanar& img, double gamma, double amplitude) {
    if (gamma <= 0.0)
        throw ConfigError("gamma must be > 0, got " + std::to_string(gamma));
    if (amplitude <= 0.0)
        throw ConfigError("amplitude must be > 0, got " + std::to_string(amplitude));

    const double exponent = 2.0 / gamma;
    ImagePlanar out(img.width(), img.height(), img.channels());
    for (int c = 0; c < img.channels(); ++c) {
        const auto& src = img.plane(c);
        auto& dst = out.plane(c);
        for (std::size_t i = 0; i < src.size(); ++i)
            dst[i] = std::clamp(amplitude * std::pow(src[i], exponent), 0.0, 1.0);
    }
    return out;
}

std::pair<ImagePlanar, TagcAnalysis> enhance(const ImagePlanar& img,
                                             const EnhancementConfig& cfg) {
    TagcAnalysis analysis;
    analysis.stats = channel_means(img);
    analysis.luminance = luminance_factor(analysis.stats);
    analysis.avg_color = average_color_factor(analysis.stats);
    analysis.gamma = adaptive_gamma(analysis.luminance, analysis.avg_color, cfg);
    return {apply_gamma(img, analysis.gamma, cfg.amplitude), analysis};
}

ImagePlanar fixed_gamma_baseline(const ImagePlanar& img, double gamma) {
    return apply_gamma(img, gamma, 1.0);
}

}  // namespace tagc
