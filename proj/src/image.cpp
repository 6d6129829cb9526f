#include "tagc/image.hpp"

namespace tagc {

ChannelStats channel_means(const ImagePlanar& img) {
    auto plane_mean = [&](int c) {
        double sum = 0.0;
        for (double v : img.plane(c)) sum += v;
        return sum / static_cast<double>(img.pixel_count());
    };
    if (img.channels() == 1) {
        const double m = plane_mean(0);
        return {m, m, m};
    }
    return {plane_mean(0), plane_mean(1), plane_mean(2)};
}

ImagePlanar to_grayscale(const ImagePlanar& img) {
    if (img.channels() == 1) return img;
    ImagePlanar out(img.width(), img.height(), 1);
    const auto& r = img.plane(0);
    const auto& g = img.plane(1);
    const auto& b = img.plane(2);
    auto& y = out.plane(0);
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] = kWeightR * r[i] + kWeightG * g[i] + kWeightB * b[i];
    return out;
}

}  // namespace tagc
