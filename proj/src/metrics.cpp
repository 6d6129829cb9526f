#include "tagc/metrics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "filtering.hpp"

namespace tagc {

namespace {

void require_same_shape(const ImagePlanar& a, const ImagePlanar& b) {
    if (!a.same_shape(b))
        throw ShapeError("image shapes differ: " + std::to_string(a.width()) + "x" +
                         std::to_string(a.height()) + "x" + std::to_string(a.channels()) +
                         " vs " + std::to_string(b.width()) + "x" +
                         std::to_string(b.height()) + "x" + std::to_string(b.channels()));
}

}  // namespace

double psnr(const ImagePlanar& reference, const ImagePlanar& test) {
    require_same_shape(reference, test);
    double sum_sq = 0.0;
    for (int c = 0; c < reference.channels(); ++c) {
        const auto& a = reference.plane(c);
        const auto& b = test.plane(c);
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double d = a[i] - b[i];
            sum_sq += d * d;
        }
    }
    const double mse =
        sum_sq / (static_cast<double>(reference.pixel_count()) * reference.channels());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(1.0 / mse);
}

double ssim(const ImagePlanar& reference, const ImagePlanar& test,
            const SsimParams& params) {
    require_same_shape(reference, test);
    if (reference.width() < params.window || reference.height() < params.window)
        throw ShapeError("image smaller than the " + std::to_string(params.window) +
                         "x" + std::to_string(params.window) + " SSIM window");

    const ImagePlanar g1 = to_grayscale(reference);
    const ImagePlanar g2 = to_grayscale(test);
    const int w = g1.width(), h = g1.height();
    const auto& x = g1.plane(0);
    const auto& y = g2.plane(0);

    const auto kernel = detail::gaussian_kernel(params.window, params.sigma);
    auto blur = [&](const std::vector<double>& p) {
        return detail::filter_separable_reflect(p, w, h, kernel);
    };

    std::vector<double> xx(x.size()), yy(x.size()), xy(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        xx[i] = x[i] * x[i];
        yy[i] = y[i] * y[i];
        xy[i] = x[i] * y[i];
    }
    const auto mu1 = blur(x);
    const auto mu2 = blur(y);
    const auto s11 = blur(xx);
    const auto s22 = blur(yy);
    const auto s12 = blur(xy);

    const double c1 = (params.k1 * params.dynamic_range) * (params.k1 * params.dynamic_range);
    const double c2 = (params.k2 * params.dynamic_range) * (params.k2 * params.dynamic_range);

    double total = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double var1 = s11[i] - mu1[i] * mu1[i];
        const double var2 = s22[i] - mu2[i] * mu2[i];
        const double cov = s12[i] - mu1[i] * mu2[i];
        const double num = (2.0 * mu1[i] * mu2[i] + c1) * (2.0 * cov + c2);
        const double den = (mu1[i] * mu1[i] + mu2[i] * mu2[i] + c1) * (var1 + var2 + c2);
        total += num / den;
    }
    return total / static_cast<double>(x.size());
}

}  // namespace tagc
