#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <fftw3.h>

#include "filtering.hpp"
#include "tagc/metrics.hpp"

namespace tagc {

namespace {

using cplx = std::complex<double>;

constexpr double kEpsilon = 1e-4;

// Normalized frequency coordinate with DC at index 0 (ifftshift layout),
// denominator n for even n and n-1 for odd n.
double freq_coord(int i, int n) {
    const int half = (n - 1) / 2;
    const double shifted = (i <= half) ? i : i - n;
    const double denom = (n % 2) ? n - 1 : n;
    return shifted / denom;
}

struct Plane {
    std::vector<double> data;
    int width = 0;
    int height = 0;

    Plane() = default;
    Plane(int w, int h, double fill = 0.0)
        : data(static_cast<std::size_t>(w) * h, fill), width(w), height(h) {}
    std::size_t size() const { return data.size(); }
    double& operator[](std::size_t i) { return data[i]; }
    double operator[](std::size_t i) const { return data[i]; }
};

std::vector<cplx> fft2(const Plane& p) {
    std::vector<cplx> in(p.size()), out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) in[i] = p[i];
    fftw_plan plan = fftw_plan_dft_2d(p.height, p.width,
                                      reinterpret_cast<fftw_complex*>(in.data()),
                                      reinterpret_cast<fftw_complex*>(out.data()),
                                      FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    return out;
}

std::vector<cplx> ifft2(std::vector<cplx> in, int width, int height) {
    std::vector<cplx> out(in.size());
    fftw_plan plan = fftw_plan_dft_2d(height, width,
                                      reinterpret_cast<fftw_complex*>(in.data()),
                                      reinterpret_cast<fftw_complex*>(out.data()),
                                      FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    const double scale = 1.0 / (static_cast<double>(width) * height);
    for (auto& v : out) v *= scale;
    return out;
}

double median(std::vector<double> v) {
    const std::size_t n = v.size();
    const std::size_t mid = n / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double hi = v[mid];
    if (n % 2) return hi;
    double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
}

// Log-Gabor phase congruency map (sum over orientations of noise-gated
// energy over total amplitude).
Plane phase_congruency(const Plane& im, const FsimParams& params) {
    const int w = im.width, h = im.height;
    const std::size_t n = im.size();
    const auto imfft = fft2(im);

    std::vector<double> radius(n), sin_theta(n), cos_theta(n), lowpass(n);
    for (int y = 0; y < h; ++y) {
        const double fy = freq_coord(y, h);
        for (int x = 0; x < w; ++x) {
            const double fx = freq_coord(x, w);
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            const double r = std::sqrt(fx * fx + fy * fy);
            radius[i] = (i == 0) ? 1.0 : r;
            const double theta = std::atan2(-fy, fx);
            sin_theta[i] = std::sin(theta);
            cos_theta[i] = std::cos(theta);
            // Butterworth low-pass, cutoff 0.45, order 15.
            lowpass[i] = 1.0 / (1.0 + std::pow(r / 0.45, 30.0));
        }
    }

    const int nscale = params.scales;
    std::vector<std::vector<double>> log_gabor(static_cast<std::size_t>(nscale));
    for (int s = 0; s < nscale; ++s) {
        const double fo =
            1.0 / (params.min_wavelength * std::pow(params.wavelength_mult, s));
        const double denom = 2.0 * std::log(params.sigma_onf) * std::log(params.sigma_onf);
        auto& lg = log_gabor[static_cast<std::size_t>(s)];
        lg.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double lr = std::log(radius[i] / fo);
            lg[i] = std::exp(-lr * lr / denom) * lowpass[i];
        }
        lg[0] = 0.0;
    }

    const double theta_sigma =
        std::numbers::pi / params.orientations / params.dtheta_on_sigma;
    Plane energy_all(w, h), an_all(w, h);

    for (int o = 0; o < params.orientations; ++o) {
        const double angle = o * std::numbers::pi / params.orientations;
        std::vector<double> spread(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double ds = sin_theta[i] * std::cos(angle) - cos_theta[i] * std::sin(angle);
            const double dc = cos_theta[i] * std::cos(angle) + sin_theta[i] * std::sin(angle);
            const double dtheta = std::abs(std::atan2(ds, dc));
            spread[i] = std::exp(-dtheta * dtheta / (2.0 * theta_sigma * theta_sigma));
        }

        std::vector<double> sum_e(n, 0.0), sum_o(n, 0.0), sum_an(n, 0.0);
        std::vector<std::vector<cplx>> eo(static_cast<std::size_t>(nscale));
        std::vector<std::vector<double>> ifft_filter(static_cast<std::size_t>(nscale));
        double em_n = 0.0;

        for (int s = 0; s < nscale; ++s) {
            std::vector<double> filter(n);
            for (std::size_t i = 0; i < n; ++i)
                filter[i] = log_gabor[static_cast<std::size_t>(s)][i] * spread[i];

            std::vector<cplx> filter_c(n);
            for (std::size_t i = 0; i < n; ++i) filter_c[i] = filter[i];
            auto filt_spatial = ifft2(filter_c, w, h);
            auto& iff = ifft_filter[static_cast<std::size_t>(s)];
            iff.resize(n);
            const double scale = std::sqrt(static_cast<double>(n));
            for (std::size_t i = 0; i < n; ++i) iff[i] = filt_spatial[i].real() * scale;

            std::vector<cplx> prod(n);
            for (std::size_t i = 0; i < n; ++i) prod[i] = imfft[i] * filter[i];
            eo[static_cast<std::size_t>(s)] = ifft2(std::move(prod), w, h);

            const auto& e = eo[static_cast<std::size_t>(s)];
            for (std::size_t i = 0; i < n; ++i) {
                sum_an[i] += std::abs(e[i]);
                sum_e[i] += e[i].real();
                sum_o[i] += e[i].imag();
            }
            if (s == 0)
                for (std::size_t i = 0; i < n; ++i) em_n += filter[i] * filter[i];
        }

        std::vector<double> energy(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double x_energy =
                std::sqrt(sum_e[i] * sum_e[i] + sum_o[i] * sum_o[i]) + kEpsilon;
            const double mean_e = sum_e[i] / x_energy;
            const double mean_o = sum_o[i] / x_energy;
            for (int s = 0; s < nscale; ++s) {
                const cplx& v = eo[static_cast<std::size_t>(s)][i];
                energy[i] += v.real() * mean_e + v.imag() * mean_o -
                             std::abs(v.real() * mean_o - v.imag() * mean_e);
            }
        }

        // Noise threshold estimated from the smallest-scale response.
        std::vector<double> e2n(n);
        for (std::size_t i = 0; i < n; ++i) e2n[i] = std::norm(eo[0][i]);
        const double mean_e2n = median(std::move(e2n)) / std::log(2.0);
        const double noise_power = mean_e2n / em_n;

        double sum_est_an2 = 0.0, sum_est_aiaj = 0.0;
        for (int s = 0; s < nscale; ++s) {
            const auto& fs = ifft_filter[static_cast<std::size_t>(s)];
            for (std::size_t i = 0; i < n; ++i) sum_est_an2 += fs[i] * fs[i];
            for (int t = s + 1; t < nscale; ++t) {
                const auto& ft = ifft_filter[static_cast<std::size_t>(t)];
                for (std::size_t i = 0; i < n; ++i) sum_est_aiaj += fs[i] * ft[i];
            }
        }
        const double est_noise_energy2 =
            2.0 * noise_power * sum_est_an2 + 4.0 * noise_power * sum_est_aiaj;
        const double tau = std::sqrt(est_noise_energy2 / 2.0);
        const double est_noise_energy = tau * std::sqrt(std::numbers::pi / 2.0);
        const double est_noise_sigma =
            std::sqrt((2.0 - std::numbers::pi / 2.0) * tau * tau);
        const double threshold =
            (est_noise_energy + params.noise_k * est_noise_sigma) / 1.7;

        for (std::size_t i = 0; i < n; ++i) {
            energy_all[i] += std::max(energy[i] - threshold, 0.0);
            an_all[i] += sum_an[i];
        }
    }

    Plane pc(w, h);
    for (std::size_t i = 0; i < n; ++i) pc[i] = energy_all[i] / (an_all[i] + kEpsilon);
    return pc;
}

// Box-average then subsample by factor f, matching "same"-size zero-padded
// convolution sampled at every f-th position.
Plane downsample(const Plane& src, int f) {
    if (f <= 1) return src;
    const int hi = (f - 1) / 2;
    const int lo = hi - (f - 1);
    const int ow = (src.width + f - 1) / f;
    const int oh = (src.height + f - 1) / f;
    Plane out(ow, oh);
    const double inv = 1.0 / (static_cast<double>(f) * f);
    for (int oy = 0; oy < oh; ++oy) {
        for (int ox = 0; ox < ow; ++ox) {
            const int cx = ox * f, cy = oy * f;
            double acc = 0.0;
            for (int j = lo; j <= hi; ++j) {
                const int y = cy + j;
                if (y < 0 || y >= src.height) continue;
                for (int i = lo; i <= hi; ++i) {
                    const int x = cx + i;
                    if (x < 0 || x >= src.width) continue;
                    acc += src[static_cast<std::size_t>(y) * src.width + x];
                }
            }
            out[static_cast<std::size_t>(oy) * ow + ox] = acc * inv;
        }
    }
    return out;
}

Plane gradient_magnitude(const Plane& im) {
    // Scharr operator, 1/16 normalization.
    const std::vector<double> dx = {3 / 16.0,  0.0, -3 / 16.0,
                                    10 / 16.0, 0.0, -10 / 16.0,
                                    3 / 16.0,  0.0, -3 / 16.0};
    const std::vector<double> dy = {3 / 16.0,  10 / 16.0,  3 / 16.0,
                                    0.0,       0.0,        0.0,
                                    -3 / 16.0, -10 / 16.0, -3 / 16.0};
    const auto gx = detail::filter2_same_zero(im.data, im.width, im.height, dx, 3, 3);
    const auto gy = detail::filter2_same_zero(im.data, im.width, im.height, dy, 3, 3);
    Plane g(im.width, im.height);
    for (std::size_t i = 0; i < g.size(); ++i)
        g[i] = std::sqrt(gx[i] * gx[i] + gy[i] * gy[i]);
    return g;
}

Plane to_gray255(const ImagePlanar& img) {
    const ImagePlanar gray = to_grayscale(img);
    Plane p(gray.width(), gray.height());
    const auto& src = gray.plane(0);
    for (std::size_t i = 0; i < src.size(); ++i) p[i] = src[i] * 255.0;
    return p;
}

}  // namespace

double fsim(const ImagePlanar& reference, const ImagePlanar& test,
            const FsimParams& params) {
    if (reference.width() != test.width() || reference.height() != test.height())
        throw ShapeError("fsim requires equal image dimensions");

    Plane im1 = to_gray255(reference);
    Plane im2 = to_gray255(test);

    const int min_dim = std::min(im1.width, im1.height);
    const int f = std::max(1, static_cast<int>(std::lround(min_dim / 256.0)));
    im1 = downsample(im1, f);
    im2 = downsample(im2, f);

    const Plane pc1 = phase_congruency(im1, params);
    const Plane pc2 = phase_congruency(im2, params);
    const Plane g1 = gradient_magnitude(im1);
    const Plane g2 = gradient_magnitude(im2);

    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < pc1.size(); ++i) {
        const double s_pc = (2.0 * pc1[i] * pc2[i] + params.t1) /
                            (pc1[i] * pc1[i] + pc2[i] * pc2[i] + params.t1);
        const double s_g = (2.0 * g1[i] * g2[i] + params.t2) /
                           (g1[i] * g1[i] + g2[i] * g2[i] + params.t2);
        const double pcm = std::max(pc1[i], pc2[i]);
        num += s_pc * s_g * pcm;
        den += pcm;
    }
    return num / den;
}

}  // namespace tagc
