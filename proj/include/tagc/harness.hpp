#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tagc/engine.hpp"
#include "tagc/image.hpp"

namespace tagc {

struct ManifestEntry {
    std::filesystem::path low;
    std::optional<std::filesystem::path> ground_truth;
};

struct DatasetManifest {
    enum class Mode { Paired, Unpaired };

    std::string name;
    Mode mode = Mode::Paired;
    std::optional<std::filesystem::path> niqe_model_path;  // unpaired only
    std::vector<ManifestEntry> entries;
};

DatasetManifest load_manifest(const std::filesystem::path& path);

struct EvalRow {
    std::string image;
    double gamma = 0.0;
    std::optional<double> psnr;
    std::optional<double> ssim;
    std::optional<double> fsim;
    std::optional<double> niqe;
    std::optional<std::string> error;  // failed rows carry no metrics
};

struct EvalReport {
    std::string dataset;
    EnhancementConfig config;
    std::string timestamp;  // metadata only, never rendered
    std::vector<EvalRow> rows;
    EvalRow aggregate;  // arithmetic means over non-failed rows
};

struct EvalOptions {
    std::optional<std::filesystem::path> output_dir;  // write enhanced images
    // When set, applies fixed_gamma_baseline with this gamma instead of
    // the adaptive pipeline (gamma 2 gives the identity mapping).
    std::optional<double> baseline_gamma;
};

EvalReport run_paired_eval(const DatasetManifest& manifest,
                           const EnhancementConfig& cfg = {},
                           const EvalOptions& options = {});

EvalReport run_unpaired_eval(const DatasetManifest& manifest,
                             const EnhancementConfig& cfg = {},
                             const EvalOptions& options = {});

// Mean of the per-dataset aggregates, for multi-dataset comparisons
// (each metric averaged over the reports that carry it).
EvalRow cross_dataset_average(const std::vector<EvalReport>& reports);

enum class ReportFormat { Csv, Markdown };

// Deterministic rendering, 3-decimal values matching the table convention.
std::string render_report(const EvalReport& report, ReportFormat format);

// Grayscale intensity histogram as "bin,count" CSV text.
std::string export_histogram(const ImagePlanar& img, int bins);

}  // namespace tagc
