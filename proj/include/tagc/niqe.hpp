#pragma once

#include <array>
#include <filesystem>
#include <vector>

#include "tagc/image.hpp"

namespace tagc {

inline constexpr int kNiqeFeatureCount = 36;

struct NiqeParams {
    int patch_size = 96;
    int scales = 2;
    double sharpness_fraction = 0.75;
};

// Pristine-corpus statistics of the natural-scene-statistics features.
struct NiqeModel {
    std::vector<double> feature_mean;  // length 36
    std::vector<double> feature_cov;   // 36x36 row-major, symmetric PSD
    NiqeParams params;
};

// Mean-subtracted contrast-normalized coefficients of a grayscale image on
// the [0, 255] scale; 7x7 Gaussian (sigma 7/6) local statistics.
std::vector<double> mscn_coefficients(const ImagePlanar& gray);

struct AggdFit {
    double alpha = 0.0;
    double left_sigma = 0.0;
    double right_sigma = 0.0;
};

// Moment-matching asymmetric generalized Gaussian fit over the standard
// alpha grid [0.2, 10] with step 0.001.
AggdFit fit_aggd(const std::vector<double>& samples);

// Per-selected-patch feature vectors: AGGD fits of the MSCN field and its
// four pairwise products at two scales, 18 features per scale.
std::vector<std::array<double, kNiqeFeatureCount>> niqe_features(
    const ImagePlanar& gray, const NiqeParams& params = {});

// Pools patch features across every decodable image in the directory.
NiqeModel fit_niqe_model(const std::filesystem::path& pristine_dir,
                         const NiqeParams& params = {});

// Mahalanobis-style distance between model statistics and the image's
// pooled patch statistics; lower is better.
double niqe_score(const ImagePlanar& img, const NiqeModel& model);

void save_niqe_model(const NiqeModel& model, const std::filesystem::path& path);
NiqeModel load_niqe_model(const std::filesystem::path& path);

}  // namespace tagc
