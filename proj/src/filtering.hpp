#pragma once

// Small convolution helpers shared by the metric implementations.

#include <cmath>
#include <cstddef>
#include <vector>

namespace tagc::detail {

// Symmetric (edge-repeating) reflection of an out-of-range index.
inline int reflect_index(int i, int n) {
    while (i < 0 || i >= n) {
        if (i < 0) i = -i - 1;
        if (i >= n) i = 2 * n - 1 - i;
    }
    return i;
}

inline std::vector<double> gaussian_kernel(int size, double sigma) {
    std::vector<double> k(static_cast<std::size_t>(size));
    const double half = (size - 1) / 2.0;
    double sum = 0.0;
    for (int i = 0; i < size; ++i) {
        const double d = i - half;
        k[static_cast<std::size_t>(i)] = std::exp(-d * d / (2.0 * sigma * sigma));
        sum += k[static_cast<std::size_t>(i)];
    }
    for (auto& v : k) v /= sum;
    return k;
}

// Separable correlation with symmetric padding; kernel length must be odd.
inline std::vector<double> filter_separable_reflect(const std::vector<double>& src,
                                                    int width, int height,
                                                    const std::vector<double>& kernel) {
    const int radius = static_cast<int>(kernel.size()) / 2;
    std::vector<double> tmp(src.size()), out(src.size());
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                const int xi = reflect_index(x + k, width);
                acc += kernel[static_cast<std::size_t>(k + radius)] *
                       src[static_cast<std::size_t>(y) * width + xi];
            }
            tmp[static_cast<std::size_t>(y) * width + x] = acc;
        }
    }
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                const int yi = reflect_index(y + k, height);
                acc += kernel[static_cast<std::size_t>(k + radius)] *
                       tmp[static_cast<std::size_t>(yi) * width + x];
            }
            out[static_cast<std::size_t>(y) * width + x] = acc;
        }
    }
    return out;
}

// 2-D correlation with zero padding ("same" size); kernel is kh x kw
// row-major with odd dimensions.
inline std::vector<double> filter2_same_zero(const std::vector<double>& src,
                                             int width, int height,
                                             const std::vector<double>& kernel,
                                             int kw, int kh) {
    const int rx = kw / 2, ry = kh / 2;
    std::vector<double> out(src.size(), 0.0);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            double acc = 0.0;
            for (int j = -ry; j <= ry; ++j) {
                const int yi = y + j;
                if (yi < 0 || yi >= height) continue;
                for (int i = -rx; i <= rx; ++i) {
                    const int xi = x + i;
                    if (xi < 0 || xi >= width) continue;
                    acc += kernel[static_cast<std::size_t>(j + ry) * kw + (i + rx)] *
                           src[static_cast<std::size_t>(yi) * width + xi];
                }
            }
            out[static_cast<std::size_t>(y) * width + x] = acc;
        }
    }
    return out;
}

}  // namespace tagc::detail
