// Command-line front end: enhancement, metrics, NIQE model fitting and
// scoring, batch evaluation, histogram export.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tagc/engine.hpp"
#include "tagc/errors.hpp"
#include "tagc/harness.hpp"
#include "tagc/image_io.hpp"
#include "tagc/metrics.hpp"
#include "tagc/niqe.hpp"

namespace {

void print_metric(const std::string& name, double value, bool lone) {
    if (lone)
        std::printf("%.3f\n", value);
    else
        std::printf("%s %.3f\n", name.c_str(), value);
}

int run(int argc, char** argv) {
    CLI::App app{"TAGC low-light image enhancement and evaluation"};
    app.require_subcommand(1);

    // enhance
    std::string enh_in, enh_out;
    tagc::EnhancementConfig cfg;
    bool dump_analysis = false;
    auto* enh = app.add_subcommand("enhance", "Enhance a low-light image");
    enh->add_option("input", enh_in, "Input image (PNG/JPEG)")->required();
    enh->add_option("output", enh_out, "Output PNG path")->required();
    enh->add_option("--gamma-c", cfg.gamma_control, "Gamma control parameter");
    enh->add_option("--amplitude", cfg.amplitude, "Output amplitude");
    enh->add_flag("--dump-analysis", dump_analysis, "Print L, mu, gamma");

    // metrics
    std::string met_ref, met_test;
    bool want_psnr = false, want_ssim = false, want_fsim = false;
    auto* met = app.add_subcommand("metrics", "Full-reference quality metrics");
    met->add_option("--ref", met_ref, "Reference image")->required();
    met->add_option("--test", met_test, "Test image")->required();
    met->add_flag("--psnr", want_psnr, "Compute PSNR");
    met->add_flag("--ssim", want_ssim, "Compute SSIM");
    met->add_flag("--fsim", want_fsim, "Compute FSIM");

    // niqe
    std::string niqe_model_path, niqe_img;
    auto* niqe_cmd = app.add_subcommand("niqe", "Score an image with a NIQE model");
    niqe_cmd->add_option("--model", niqe_model_path, "NIQE model JSON")->required();
    niqe_cmd->add_option("image", niqe_img, "Image to score")->required();

    // niqe-fit
    std::string fit_dir, fit_out;
    tagc::NiqeParams niqe_params;
    auto* fit = app.add_subcommand("niqe-fit", "Fit a NIQE model from pristine images");
    fit->add_option("--pristine-dir", fit_dir, "Directory of pristine images")->required();
    fit->add_option("--out", fit_out, "Output model JSON path")->required();
    fit->add_option("--patch-size", niqe_params.patch_size, "Patch size in pixels");
    fit->add_option("--sharpness-fraction", niqe_params.sharpness_fraction,
                    "Sharpness selection fraction");

    // eval
    std::vector<std::string> eval_manifests;
    std::string eval_out_dir, eval_format = "csv";
    auto* eval_cmd = app.add_subcommand("eval", "Run a dataset evaluation");
    eval_cmd->add_option("--manifest", eval_manifests, "Dataset manifest JSON (repeatable)")
        ->required();
    eval_cmd->add_option("--out-dir", eval_out_dir, "Directory for enhanced images");
    eval_cmd->add_option("--format", eval_format, "Report format")
        ->check(CLI::IsMember({"csv", "markdown"}));
    eval_cmd->add_option("--gamma-c", cfg.gamma_control, "Gamma control parameter");
    eval_cmd->add_option("--amplitude", cfg.amplitude, "Output amplitude");

    // histogram
    std::string hist_img;
    int hist_bins = 256;
    auto* hist = app.add_subcommand("histogram", "Export a grayscale intensity histogram");
    hist->add_option("image", hist_img, "Input image")->required();
    hist->add_option("--bins", hist_bins, "Number of bins");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (*enh) {
        auto [enhanced, analysis] = tagc::enhance(tagc::load_image(enh_in), cfg);
        tagc::save_image(enhanced, enh_out);
        if (dump_analysis)
            std::printf("L %.6f\nmu %.6f\ngamma %.6f\n", analysis.luminance,
                        analysis.avg_color, analysis.gamma);
    } else if (*met) {
        if (!want_psnr && !want_ssim && !want_fsim)
            want_psnr = want_ssim = want_fsim = true;
        const tagc::ImagePlanar ref = tagc::load_image(met_ref);
        const tagc::ImagePlanar test = tagc::load_image(met_test);
        const bool lone = (want_psnr + want_ssim + want_fsim) == 1;
        if (want_psnr) print_metric("psnr", tagc::psnr(ref, test), lone);
        if (want_ssim) print_metric("ssim", tagc::ssim(ref, test), lone);
        if (want_fsim) print_metric("fsim", tagc::fsim(ref, test), lone);
    } else if (*niqe_cmd) {
        const tagc::NiqeModel model = tagc::load_niqe_model(niqe_model_path);
        std::printf("%.3f\n", tagc::niqe_score(tagc::load_image(niqe_img), model));
    } else if (*fit) {
        const tagc::NiqeModel model = tagc::fit_niqe_model(fit_dir, niqe_params);
        tagc::save_niqe_model(model, fit_out);
    } else if (*eval_cmd) {
        const auto format = eval_format == "markdown" ? tagc::ReportFormat::Markdown
                                                      : tagc::ReportFormat::Csv;
        std::vector<tagc::EvalReport> reports;
        for (const auto& manifest_path : eval_manifests) {
            const tagc::DatasetManifest manifest = tagc::load_manifest(manifest_path);
            tagc::EvalOptions options;
            if (!eval_out_dir.empty()) options.output_dir = eval_out_dir;
            reports.push_back(manifest.mode == tagc::DatasetManifest::Mode::Paired
                                  ? tagc::run_paired_eval(manifest, cfg, options)
                                  : tagc::run_unpaired_eval(manifest, cfg, options));
            if (reports.size() > 1) std::cout << "\n";
            std::cout << tagc::render_report(reports.back(), format);
        }
        if (reports.size() > 1) {
            const tagc::EvalRow avg = tagc::cross_dataset_average(reports);
            std::cout << "\ncross-dataset average:";
            auto emit = [](const char* name, const std::optional<double>& v) {
                if (v) std::printf(" %s %.3f", name, *v);
            };
            emit("psnr", avg.psnr);
            emit("ssim", avg.ssim);
            emit("fsim", avg.fsim);
            emit("niqe", avg.niqe);
            std::cout << "\n";
        }
    } else if (*hist) {
        std::cout << tagc::export_histogram(tagc::load_image(hist_img), hist_bins);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const tagc::Error& e) {
        std::string msg = e.what();
        for (auto& c : msg)
            if (c == '\n') c = ' ';
        std::fprintf(stderr, "error: %s\n", msg.c_str());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
