#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include <Eigen/Dense>

#include "tagc/image_io.hpp"
#include "tagc/niqe.hpp"
#include "test_util.hpp"

using namespace tagc;
using tagc::test::TempDir;

namespace {

NiqeParams small_params() {
    NiqeParams p;
    p.patch_size = 32;  // keeps the synthetic corpora small
    return p;
}

void write_corpus(const std::filesystem::path& dir, std::mt19937& rng, int count,
                  int size = 96) {
    std::filesystem::create_directories(dir);
    for (int i = 0; i < count; ++i) {
        const ImagePlanar img = tagc::test::textured_image(rng, size, size, 1);
        save_image(img, dir / ("img" + std::to_string(i) + ".png"));
    }
}

}  // namespace

TEST_CASE("mscn coefficients") {
    SUBCASE("constant image gives all zeros") {
        const auto mscn = mscn_coefficients(ImagePlanar(16, 16, 1, 0.5));
        for (double v : mscn) CHECK(v == doctest::Approx(0.0));
    }
    SUBCASE("mean near zero on a textured image") {
        std::mt19937 rng(8);
        const ImagePlanar img = tagc::test::textured_image(rng, 128, 128, 1);
        const auto mscn = mscn_coefficients(img);
        double mean = 0.0;
        for (double v : mscn) mean += v;
        mean /= static_cast<double>(mscn.size());
        CHECK(std::abs(mean) < 0.1);
    }
    SUBCASE("deterministic") {
        std::mt19937 rng(9);
        const ImagePlanar img = tagc::test::random_image(rng, 24, 24, 1);
        CHECK(mscn_coefficients(img) == mscn_coefficients(img));
    }
}

TEST_CASE("fit_aggd recovers known distributions") {
    std::mt19937 rng(10);
    std::vector<double> samples(100000);

    SUBCASE("Gaussian: alpha near 2, symmetric sigmas") {
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (auto& v : samples) v = gauss(rng);
        const AggdFit fit = fit_aggd(samples);
        CHECK(fit.alpha == doctest::Approx(2.0).epsilon(0.1));
        CHECK(fit.left_sigma == doctest::Approx(fit.right_sigma).epsilon(0.1));
    }
    SUBCASE("Laplacian: alpha near 1") {
        std::exponential_distribution<double> expo(1.0);
        std::bernoulli_distribution coin(0.5);
        for (auto& v : samples) v = (coin(rng) ? 1.0 : -1.0) * expo(rng);
        const AggdFit fit = fit_aggd(samples);
        CHECK(fit.alpha == doctest::Approx(1.0).epsilon(0.1));
    }
    SUBCASE("mirroring swaps the side estimates") {
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (auto& v : samples) v = gauss(rng) + 0.3;
        const AggdFit fit = fit_aggd(samples);
        std::vector<double> mirrored(samples);
        for (auto& v : mirrored) v = -v;
        const AggdFit swap = fit_aggd(mirrored);
        CHECK(swap.left_sigma == doctest::Approx(fit.right_sigma));
        CHECK(swap.right_sigma == doctest::Approx(fit.left_sigma));
        CHECK(swap.alpha == doctest::Approx(fit.alpha));
    }
    SUBCASE("degenerate inputs") {
        CHECK_THROWS_AS(fit_aggd({0.0, 0.0, 0.0}), DegenerateError);
        CHECK_THROWS_AS(fit_aggd({1.0}), DegenerateError);
    }
}

TEST_CASE("niqe_features") {
    const NiqeParams params = small_params();

    SUBCASE("selected patches carry 36 features") {
        std::mt19937 rng(11);
        const ImagePlanar img = tagc::test::textured_image(rng, 96, 96, 1);
        const auto feats = niqe_features(img, params);
        CHECK(!feats.empty());
        for (const auto& f : feats) CHECK(f.size() == 36);
    }
    SUBCASE("constant image fails the sharpness gate") {
        CHECK_THROWS_AS(niqe_features(ImagePlanar(96, 96, 1, 0.4), params),
                        EmptySelectionError);
    }
    SUBCASE("white noise selects every patch") {
        std::mt19937 rng(12);
        const ImagePlanar img = tagc::test::random_image(rng, 96, 96, 1);
        const auto feats = niqe_features(img, params);
        CHECK(feats.size() == 9);  // 3x3 grid of 32px patches
    }
    SUBCASE("image smaller than a patch") {
        std::mt19937 rng(13);
        const ImagePlanar img = tagc::test::random_image(rng, 16, 16, 1);
        CHECK_THROWS_AS(niqe_features(img, params), ShapeError);
    }
}

TEST_CASE("fit_niqe_model and serialization") {
    TempDir tmp("niqe_model");
    std::mt19937 rng(14);
    const auto corpus = tmp.path() / "pristine";
    write_corpus(corpus, rng, 6);
    const NiqeModel model = fit_niqe_model(corpus, small_params());

    SUBCASE("round-trip is bit-exact") {
        const auto path = tmp.path() / "model.json";
        save_niqe_model(model, path);
        const NiqeModel back = load_niqe_model(path);
        CHECK(back.feature_mean == model.feature_mean);
        CHECK(back.feature_cov == model.feature_cov);
        CHECK(back.params.patch_size == model.params.patch_size);
        CHECK(back.params.sharpness_fraction == model.params.sharpness_fraction);
    }
    SUBCASE("disjoint corpora give different models") {
        const auto corpus2 = tmp.path() / "pristine2";
        write_corpus(corpus2, rng, 6, 128);
        const NiqeModel other = fit_niqe_model(corpus2, small_params());
        CHECK(other.feature_mean != model.feature_mean);
    }
    SUBCASE("covariance is symmetric positive semidefinite") {
        Eigen::MatrixXd cov(36, 36);
        for (int i = 0; i < 36; ++i)
            for (int j = 0; j < 36; ++j)
                cov(i, j) = model.feature_cov[static_cast<std::size_t>(i) * 36 + j];
        CHECK((cov - cov.transpose()).cwiseAbs().maxCoeff() < 1e-10);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
        CHECK(es.eigenvalues().minCoeff() > -1e-8);
    }
    SUBCASE("empty corpus errors") {
        const auto empty = tmp.path() / "empty";
        std::filesystem::create_directories(empty);
        CHECK_THROWS_AS(fit_niqe_model(empty, small_params()), EmptySelectionError);
    }
    SUBCASE("invalid model files are rejected") {
        const auto bad = tmp.path() / "bad.json";
        std::ofstream(bad) << "{\"version\": 1}";
        CHECK_THROWS_AS(load_niqe_model(bad), ValidationError);
        std::ofstream(bad) << "not json";
        CHECK_THROWS_AS(load_niqe_model(bad), ValidationError);
    }
}

TEST_CASE("niqe_score") {
    TempDir tmp("niqe_score");
    std::mt19937 rng(15);
    const auto corpus = tmp.path() / "pristine";
    write_corpus(corpus, rng, 8);
    const NiqeModel model = fit_niqe_model(corpus, small_params());

    const ImagePlanar clean = tagc::test::textured_image(rng, 96, 96, 1);

    SUBCASE("deterministic") {
        CHECK(niqe_score(clean, model) == niqe_score(clean, model));
    }
    SUBCASE("strong noise raises the score") {
        ImagePlanar noisy = clean;
        std::normal_distribution<double> noise(0.0, 0.1);
        std::mt19937 nrng(16);
        for (auto& v : noisy.plane(0)) v = std::clamp(v + noise(nrng), 0.0, 1.0);
        CHECK(niqe_score(noisy, model) > niqe_score(clean, model));
    }
    SUBCASE("no selected patches errors") {
        CHECK_THROWS_AS(niqe_score(ImagePlanar(96, 96, 1, 0.5), model),
                        EmptySelectionError);
    }
}
