#pragma once

#include <optional>

#include "tagc/image.hpp"

namespace tagc {

struct QualityScores {
    std::optional<double> psnr;
    std::optional<double> ssim;
    std::optional<double> fsim;
};

// Joint-channel MSE on the [0, 1] scale; identical images yield +infinity.
double psnr(const ImagePlanar& reference, const ImagePlanar& test);

struct SsimParams {
    int window = 11;
    double sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
    double dynamic_range = 1.0;
};

// Mean of the local SSIM map over the grayscale pair, Gaussian-windowed
// with reflective padding.
double ssim(const ImagePlanar& reference, const ImagePlanar& test,
            const SsimParams& params = {});

struct FsimParams {
    int scales = 4;
    int orientations = 4;
    double min_wavelength = 6.0;
    double wavelength_mult = 2.0;
    double sigma_onf = 0.55;
    double dtheta_on_sigma = 1.2;
    double noise_k = 2.0;
    double t1 = 0.85;    // phase congruency stability constant
    double t2 = 160.0;   // gradient stability constant, [0, 255] scale
};

// Phase-congruency + Scharr-gradient feature similarity on the grayscale
// pair, scaled to [0, 255] internally.
double fsim(const ImagePlanar& reference, const ImagePlanar& test,
            const FsimParams& params = {});

}  // namespace tagc
