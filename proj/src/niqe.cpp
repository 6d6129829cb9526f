#include "tagc/niqe.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>
#include <utility>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "filtering.hpp"
#include "tagc/image_io.hpp"

namespace tagc {

namespace {

constexpr int kModelVersion = 1;
constexpr int kFeaturesPerScale = 18;

struct LocalStats {
    std::vector<double> mscn;
    std::vector<double> sigma;  // local deviation, drives patch selection
    int width = 0;
    int height = 0;
};

std::vector<double> gray255(const ImagePlanar& img) {
    const ImagePlanar gray = to_grayscale(img);
    std::vector<double> out(gray.plane(0));
    for (auto& v : out) v *= 255.0;
    return out;
}

LocalStats local_stats(const std::vector<double>& plane, int width, int height) {
    static const std::vector<double> kernel = detail::gaussian_kernel(7, 7.0 / 6.0);
    std::vector<double> sq(plane.size());
    for (std::size_t i = 0; i < plane.size(); ++i) sq[i] = plane[i] * plane[i];
    const auto mu = detail::filter_separable_reflect(plane, width, height, kernel);
    const auto mu_sq = detail::filter_separable_reflect(sq, width, height, kernel);

    LocalStats stats;
    stats.width = width;
    stats.height = height;
    stats.mscn.resize(plane.size());
    stats.sigma.resize(plane.size());
    for (std::size_t i = 0; i < plane.size(); ++i) {
        stats.sigma[i] = std::sqrt(std::max(0.0, mu_sq[i] - mu[i] * mu[i]));
        stats.mscn[i] = (plane[i] - mu[i]) / (stats.sigma[i] + 1.0);
    }
    return stats;
}

std::vector<double> half_size(const std::vector<double>& plane, int width, int height,
                              int& out_w, int& out_h) {
    out_w = width / 2;
    out_h = height / 2;
    std::vector<double> out(static_cast<std::size_t>(out_w) * out_h);
    for (int y = 0; y < out_h; ++y)
        for (int x = 0; x < out_w; ++x) {
            const std::size_t i0 = static_cast<std::size_t>(2 * y) * width + 2 * x;
            out[static_cast<std::size_t>(y) * out_w + x] =
                0.25 * (plane[i0] + plane[i0 + 1] + plane[i0 + width] +
                        plane[i0 + width + 1]);
        }
    return out;
}

std::vector<double> extract_block(const std::vector<double>& plane, int width,
                                  int x0, int y0, int size) {
    std::vector<double> block;
    block.reserve(static_cast<std::size_t>(size) * size);
    for (int y = y0; y < y0 + size; ++y)
        for (int x = x0; x < x0 + size; ++x)
            block.push_back(plane[static_cast<std::size_t>(y) * width + x]);
    return block;
}

// 18 features of one MSCN block: AGGD of the coefficients themselves plus
// alpha/eta/variances of the four circularly shifted pairwise products.
void block_features(const std::vector<double>& block, int size, double* out) {
    const AggdFit base = fit_aggd(block);
    out[0] = base.alpha;
    out[1] = (base.left_sigma * base.left_sigma +
              base.right_sigma * base.right_sigma) / 2.0;

    constexpr int shifts[4][2] = {{0, 1}, {1, 0}, {1, 1}, {-1, 1}};
    for (int s = 0; s < 4; ++s) {
        std::vector<double> prod(block.size());
        for (int y = 0; y < size; ++y)
            for (int x = 0; x < size; ++x) {
                const int ys = ((y - shifts[s][0]) % size + size) % size;
                const int xs = ((x - shifts[s][1]) % size + size) % size;
                prod[static_cast<std::size_t>(y) * size + x] =
                    block[static_cast<std::size_t>(y) * size + x] *
                    block[static_cast<std::size_t>(ys) * size + xs];
            }
        const AggdFit fit = fit_aggd(prod);
        const double ratio =
            std::tgamma(2.0 / fit.alpha) / std::tgamma(1.0 / fit.alpha);
        const double norm =
            std::sqrt(std::tgamma(1.0 / fit.alpha) / std::tgamma(3.0 / fit.alpha));
        const double eta = (fit.right_sigma - fit.left_sigma) * ratio * norm;
        double* f = out + 2 + 4 * s;
        f[0] = fit.alpha;
        f[1] = eta;
        f[2] = fit.left_sigma * fit.left_sigma;
        f[3] = fit.right_sigma * fit.right_sigma;
    }
}

// alpha -> Gamma(2/a)^2 / (Gamma(1/a) * Gamma(3/a)) over the fit grid.
const std::vector<std::pair<double, double>>& alpha_grid() {
    static const std::vector<std::pair<double, double>> grid = [] {
        std::vector<std::pair<double, double>> g;
        for (int i = 0; i <= 9800; ++i) {
            const double a = 0.2 + 0.001 * i;
            const double r = std::tgamma(2.0 / a) * std::tgamma(2.0 / a) /
                             (std::tgamma(1.0 / a) * std::tgamma(3.0 / a));
            g.emplace_back(a, r);
        }
        return g;
    }();
    return grid;
}

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                             static_cast<Eigen::Index>(v.size()));
}

void pooled_stats(const std::vector<std::array<double, kNiqeFeatureCount>>& feats,
                  Eigen::VectorXd& mean, Eigen::MatrixXd& cov) {
    const auto n = static_cast<Eigen::Index>(feats.size());
    Eigen::MatrixXd m(n, kNiqeFeatureCount);
    for (Eigen::Index i = 0; i < n; ++i)
        for (int j = 0; j < kNiqeFeatureCount; ++j) m(i, j) = feats[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    mean = m.colwise().mean();
    Eigen::MatrixXd centered = m.rowwise() - mean.transpose();
    if (n > 1)
        cov = centered.transpose() * centered / static_cast<double>(n - 1);
    else
        cov = Eigen::MatrixXd::Zero(kNiqeFeatureCount, kNiqeFeatureCount);
}

}  // namespace

std::vector<double> mscn_coefficients(const ImagePlanar& gray) {
    const auto plane = gray255(gray);
    return local_stats(plane, gray.width(), gray.height()).mscn;
}

AggdFit fit_aggd(const std::vector<double>& samples) {
    if (samples.size() < 2)
        throw DegenerateError("AGGD fit needs at least 2 samples");

    double left_sq = 0.0, right_sq = 0.0, abs_sum = 0.0, sq_sum = 0.0;
    std::size_t n_left = 0, n_right = 0;
    for (double v : samples) {
        abs_sum += std::abs(v);
        sq_sum += v * v;
        if (v < 0.0) {
            left_sq += v * v;
            ++n_left;
        } else if (v > 0.0) {
            right_sq += v * v;
            ++n_right;
        }
    }
    if (sq_sum == 0.0)
        throw DegenerateError("AGGD fit on an all-zero sample set");

    const double n = static_cast<double>(samples.size());
    const double left_std = n_left ? std::sqrt(left_sq / static_cast<double>(n_left)) : 0.0;
    const double right_std =
        n_right ? std::sqrt(right_sq / static_cast<double>(n_right)) : 0.0;

    const double rhat = (abs_sum / n) * (abs_sum / n) / (sq_sum / n);
    double rhat_norm;
    if (right_std == 0.0 || left_std == 0.0) {
        // One-sided sample set; the asymmetry correction tends to 1.
        rhat_norm = rhat;
    } else {
        const double g = left_std / right_std;
        rhat_norm = rhat * (g * g * g + 1.0) * (g + 1.0) /
                    ((g * g + 1.0) * (g * g + 1.0));
    }

    double best_alpha = 0.2;
    double best_err = std::numeric_limits<double>::infinity();
    for (const auto& [alpha, r] : alpha_grid()) {
        const double err = (r - rhat_norm) * (r - rhat_norm);
        if (err < best_err) {
            best_err = err;
            best_alpha = alpha;
        }
    }
    return {best_alpha, left_std, right_std};
}

std::vector<std::array<double, kNiqeFeatureCount>> niqe_features(
    const ImagePlanar& gray, const NiqeParams& params) {
    if (params.scales != 2)
        throw ConfigError("niqe_features supports exactly 2 scales");
    if (params.patch_size < 8 || params.patch_size % 2 != 0)
        throw ConfigError("patch_size must be even and at least 8");

    const int w = gray.width(), h = gray.height();
    const int patch = params.patch_size;
    const int blocks_x = w / patch, blocks_y = h / patch;
    if (blocks_x < 1 || blocks_y < 1)
        throw ShapeError("image smaller than one " + std::to_string(patch) + "x" +
                         std::to_string(patch) + " patch");

    const auto plane = gray255(gray);
    const LocalStats scale1 = local_stats(plane, w, h);

    // Sharpness gate: mean local deviation per block, thresholded against
    // the sharpest block. Selection at scale 1 is reused at scale 2.
    std::vector<std::pair<int, int>> selected;
    std::vector<double> sharpness(static_cast<std::size_t>(blocks_x) * blocks_y);
    double max_sharpness = 0.0;
    for (int by = 0; by < blocks_y; ++by)
        for (int bx = 0; bx < blocks_x; ++bx) {
            double acc = 0.0;
            for (int y = by * patch; y < (by + 1) * patch; ++y)
                for (int x = bx * patch; x < (bx + 1) * patch; ++x)
                    acc += scale1.sigma[static_cast<std::size_t>(y) * w + x];
            const double s = acc / (static_cast<double>(patch) * patch);
            sharpness[static_cast<std::size_t>(by) * blocks_x + bx] = s;
            max_sharpness = std::max(max_sharpness, s);
        }
    // Flat images have only rounding residue in the deviation field; on the
    // [0, 255] scale anything below this is no contrast at all.
    if (max_sharpness < 1e-3)
        throw EmptySelectionError("no patch passed the sharpness gate (flat image)");
    for (int by = 0; by < blocks_y; ++by)
        for (int bx = 0; bx < blocks_x; ++bx)
            if (sharpness[static_cast<std::size_t>(by) * blocks_x + bx] >
                params.sharpness_fraction * max_sharpness)
                selected.emplace_back(bx, by);
    if (selected.empty())
        throw EmptySelectionError("no patch passed the sharpness gate");

    int w2 = 0, h2 = 0;
    const auto half = half_size(plane, w, h, w2, h2);
    const LocalStats scale2 = local_stats(half, w2, h2);
    const int patch2 = patch / 2;

    std::vector<std::array<double, kNiqeFeatureCount>> features;
    features.reserve(selected.size());
    for (const auto& [bx, by] : selected) {
        std::array<double, kNiqeFeatureCount> f{};
        const auto b1 = extract_block(scale1.mscn, w, bx * patch, by * patch, patch);
        block_features(b1, patch, f.data());
        const auto b2 =
            extract_block(scale2.mscn, w2, bx * patch2, by * patch2, patch2);
        block_features(b2, patch2, f.data() + kFeaturesPerScale);
        features.push_back(f);
    }
    return features;
}

NiqeModel fit_niqe_model(const std::filesystem::path& pristine_dir,
                         const NiqeParams& params) {
    if (!std::filesystem::is_directory(pristine_dir))
        throw IoError("not a directory: " + pristine_dir.string());

    std::vector<std::filesystem::path> paths;
    for (const auto& entry : std::filesystem::directory_iterator(pristine_dir))
        if (entry.is_regular_file()) paths.push_back(entry.path());
    std::sort(paths.begin(), paths.end());

    std::vector<std::array<double, kNiqeFeatureCount>> pooled;
    for (const auto& path : paths) {
        try {
            const ImagePlanar img = load_image(path);
            auto feats = niqe_features(to_grayscale(img), params);
            pooled.insert(pooled.end(), feats.begin(), feats.end());
        } catch (const Error&) {
            // Undecodable or too-small entries do not poison the corpus.
        }
    }
    if (pooled.size() < 2)
        throw EmptySelectionError("pristine corpus yielded fewer than 2 patches: " +
                                  pristine_dir.string());

    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
    pooled_stats(pooled, mean, cov);

    NiqeModel model;
    model.params = params;
    model.feature_mean.assign(mean.data(), mean.data() + mean.size());
    model.feature_cov.resize(static_cast<std::size_t>(kNiqeFeatureCount) *
                             kNiqeFeatureCount);
    for (int i = 0; i < kNiqeFeatureCount; ++i)
        for (int j = 0; j < kNiqeFeatureCount; ++j)
            model.feature_cov[static_cast<std::size_t>(i) * kNiqeFeatureCount + j] =
                cov(i, j);
    return model;
}

double niqe_score(const ImagePlanar& img, const NiqeModel& model) {
    if (model.feature_mean.size() != kNiqeFeatureCount ||
        model.feature_cov.size() !=
            static_cast<std::size_t>(kNiqeFeatureCount) * kNiqeFeatureCount)
        throw ValidationError("NIQE model has wrong feature dimensions");

    const auto feats = niqe_features(to_grayscale(img), model.params);
    Eigen::VectorXd test_mean;
    Eigen::MatrixXd test_cov;
    pooled_stats(feats, test_mean, test_cov);

    const Eigen::VectorXd model_mean = to_eigen(model.feature_mean);
    Eigen::MatrixXd model_cov(kNiqeFeatureCount, kNiqeFeatureCount);
    for (int i = 0; i < kNiqeFeatureCount; ++i)
        for (int j = 0; j < kNiqeFeatureCount; ++j)
            model_cov(i, j) =
                model.feature_cov[static_cast<std::size_t>(i) * kNiqeFeatureCount + j];

    const Eigen::MatrixXd pooled_cov = (model_cov + test_cov) / 2.0;
    const Eigen::VectorXd diff = model_mean - test_mean;

    Eigen::FullPivLU<Eigen::MatrixXd> lu(pooled_cov);
    Eigen::VectorXd solved;
    if (lu.isInvertible()) {
        solved = lu.solve(diff);
    } else {
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(pooled_cov);
        solved = cod.pseudoInverse() * diff;
    }
    return std::sqrt(std::max(0.0, diff.dot(solved)));
}

void save_niqe_model(const NiqeModel& model, const std::filesystem::path& path) {
    nlohmann::json j;
    j["version"] = kModelVersion;
    j["patch_size"] = model.params.patch_size;
    j["scales"] = model.params.scales;
    j["sharpness_fraction"] = model.params.sharpness_fraction;
    j["feature_mean"] = model.feature_mean;
    nlohmann::json cov = nlohmann::json::array();
    for (int i = 0; i < kNiqeFeatureCount; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int k = 0; k < kNiqeFeatureCount; ++k)
            row.push_back(model.feature_cov[static_cast<std::size_t>(i) *
                                            kNiqeFeatureCount + k]);
        cov.push_back(std::move(row));
    }
    j["feature_cov"] = std::move(cov);

    std::ofstream out(path);
    if (!out) throw IoError("cannot write NIQE model: " + path.string());
    out << j.dump(2) << "\n";
    if (!out) throw IoError("failed writing NIQE model: " + path.string());
}

NiqeModel load_niqe_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read NIQE model: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("NIQE model is not valid JSON: " +
                              std::string(e.what()));
    }

    try {
        NiqeModel model;
        if (j.at("version").get<int>() != kModelVersion)
            throw ValidationError("unsupported NIQE model version");
        model.params.patch_size = j.at("patch_size").get<int>();
        model.params.scales = j.at("scales").get<int>();
        model.params.sharpness_fraction = j.at("sharpness_fraction").get<double>();
        model.feature_mean = j.at("feature_mean").get<std::vector<double>>();
        const auto& cov = j.at("feature_cov");
        if (model.feature_mean.size() != kNiqeFeatureCount ||
            cov.size() != kNiqeFeatureCount)
            throw ValidationError("NIQE model has wrong feature dimensions");
        model.feature_cov.reserve(static_cast<std::size_t>(kNiqeFeatureCount) *
                                  kNiqeFeatureCount);
        for (const auto& row : cov) {
            if (row.size() != kNiqeFeatureCount)
                throw ValidationError("NIQE model covariance row has wrong length");
            for (const auto& v : row) model.feature_cov.push_back(v.get<double>());
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("NIQE model field error: " + std::string(e.what()));
    }
}

}  // namespace tagc
