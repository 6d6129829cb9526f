#pragma once

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <random>
#include <string>

#include "tagc/image.hpp"

namespace tagc::test {

inline ImagePlanar constant_image(int w, int h, int channels, double value) {
    return ImagePlanar(w, h, channels, value);
}

inline ImagePlanar random_image(std::mt19937& rng, int w, int h, int channels) {
    ImagePlanar img(w, h, channels);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int c = 0; c < channels; ++c)
        for (auto& v : img.plane(c)) v = dist(rng);
    return img;
}

// Smooth "natural-looking" texture: heavily blurred noise plus a gradient,
// so that NIQE patch selection and phase congruency have structure to bite on.
inline ImagePlanar textured_image(std::mt19937& rng, int w, int h, int channels,
                                  double lo = 0.1, double hi = 0.9) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> noise(static_cast<std::size_t>(w) * h);
    for (auto& v : noise) v = dist(rng);
    // crude separable box blur, 3 passes
    for (int pass = 0; pass < 3; ++pass) {
        std::vector<double> tmp(noise.size());
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                double acc = 0.0;
                for (int k = -2; k <= 2; ++k) {
                    int xi = std::clamp(x + k, 0, w - 1);
                    acc += noise[static_cast<std::size_t>(y) * w + xi];
                }
                tmp[static_cast<std::size_t>(y) * w + x] = acc / 5.0;
            }
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                double acc = 0.0;
                for (int k = -2; k <= 2; ++k) {
                    int yi = std::clamp(y + k, 0, h - 1);
                    acc += tmp[static_cast<std::size_t>(yi) * w + x];
                }
                noise[static_cast<std::size_t>(y) * w + x] = acc / 5.0;
            }
    }
    double mn = noise[0], mx = noise[0];
    for (double v : noise) {
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    }
    ImagePlanar img(w, h, channels);
    for (int c = 0; c < channels; ++c)
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const double tex = (noise[static_cast<std::size_t>(y) * w + x] - mn) /
                                   (mx - mn + 1e-12);
                const double grad = 0.25 * x / std::max(1, w - 1);
                double v = lo + (hi - lo) * (0.75 * tex + grad);
                img.at(c, x, y) = std::clamp(v, 0.0, 1.0);
            }
    return img;
}

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        path_ = std::filesystem::temp_directory_path() /
                ("tagc_test_" + tag + "_" + std::to_string(::getpid()));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline std::filesystem::path data_dir() { return TAGC_TEST_DATA_DIR; }

}  // namespace tagc::test
