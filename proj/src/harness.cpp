#include "tagc/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tagc/image_io.hpp"
#include "tagc/metrics.hpp"
#include "tagc/niqe.hpp"

namespace tagc {

namespace {

std::string now_iso8601() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

std::string format3(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

std::string cell(const std::optional<double>& v) {
    return v ? format3(*v) : std::string();
}

// Arithmetic means over rows that carry metrics; PSNR averaged in dB.
EvalRow aggregate_rows(const std::vector<EvalRow>& rows) {
    EvalRow agg;
    agg.image = "mean";
    double gamma_sum = 0.0, psnr_sum = 0.0, ssim_sum = 0.0, fsim_sum = 0.0,
           niqe_sum = 0.0;
    int n = 0, n_psnr = 0, n_ssim = 0, n_fsim = 0, n_niqe = 0;
    for (const auto& row : rows) {
        if (row.error) continue;
        ++n;
        gamma_sum += row.gamma;
        if (row.psnr) { psnr_sum += *row.psnr; ++n_psnr; }
        if (row.ssim) { ssim_sum += *row.ssim; ++n_ssim; }
        if (row.fsim) { fsim_sum += *row.fsim; ++n_fsim; }
        if (row.niqe) { niqe_sum += *row.niqe; ++n_niqe; }
    }
    if (n > 0) agg.gamma = gamma_sum / n;
    if (n_psnr > 0) agg.psnr = psnr_sum / n_psnr;
    if (n_ssim > 0) agg.ssim = ssim_sum / n_ssim;
    if (n_fsim > 0) agg.fsim = fsim_sum / n_fsim;
    if (n_niqe > 0) agg.niqe = niqe_sum / n_niqe;
    return agg;
}

ImagePlanar enhance_entry(const ImagePlanar& low, const EnhancementConfig& cfg,
                          const EvalOptions& options, double& gamma_used) {
    if (options.baseline_gamma) {
        gamma_used = *options.baseline_gamma;
        return fixed_gamma_baseline(low, gamma_used);
    }
    auto [enhanced, analysis] = enhance(low, cfg);
    gamma_used = analysis.gamma;
    return enhanced;
}

void maybe_write_output(const ImagePlanar& enhanced, const ManifestEntry& entry,
                        const EvalOptions& options) {
    if (!options.output_dir) return;
    std::filesystem::create_directories(*options.output_dir);
    std::filesystem::path out =
        *options.output_dir / entry.low.filename().replace_extension(".png");
    save_image(enhanced, out);
}

void check_any_succeeded(const EvalReport& report) {
    for (const auto& row : report.rows)
        if (!row.error) return;
    throw Error("every image in dataset '" + report.dataset + "' failed");
}

}  // namespace

DatasetManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read manifest: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("manifest is not valid JSON: " + std::string(e.what()));
    }

    DatasetManifest m;
    if (!j.contains("name") || !j["name"].is_string())
        throw ValidationError("manifest field 'name' missing or not a string");
    m.name = j["name"].get<std::string>();

    if (!j.contains("mode") || !j["mode"].is_string())
        throw ValidationError("manifest field 'mode' missing or not a string");
    const std::string mode = j["mode"].get<std::string>();
    if (mode == "paired")
        m.mode = DatasetManifest::Mode::Paired;
    else if (mode == "unpaired")
        m.mode = DatasetManifest::Mode::Unpaired;
    else
        throw ValidationError("manifest field 'mode' must be 'paired' or 'unpaired', got '" +
                              mode + "'");

    if (j.contains("niqe_model_path")) {
        if (!j["niqe_model_path"].is_string())
            throw ValidationError("manifest field 'niqe_model_path' must be a string");
        m.niqe_model_path = std::filesystem::path(j["niqe_model_path"].get<std::string>());
    }

    if (!j.contains("entries") || !j["entries"].is_array())
        throw ValidationError("manifest field 'entries' missing or not an array");
    if (j["entries"].empty())
        throw ValidationError("manifest field 'entries' must be non-empty");

    const std::filesystem::path base = path.parent_path();
    auto resolve = [&](const std::string& p) {
        std::filesystem::path fp(p);
        return fp.is_absolute() ? fp : base / fp;
    };

    for (const auto& e : j["entries"]) {
        if (!e.is_object() || !e.contains("low") || !e["low"].is_string())
            throw ValidationError("manifest entry field 'low' missing or not a string");
        ManifestEntry entry;
        entry.low = resolve(e["low"].get<std::string>());
        if (e.contains("gt")) {
            if (!e["gt"].is_string())
                throw ValidationError("manifest entry field 'gt' must be a string");
            entry.ground_truth = resolve(e["gt"].get<std::string>());
        }
        m.entries.push_back(std::move(entry));
    }

    const bool paired = m.mode == DatasetManifest::Mode::Paired;
    for (const auto& entry : m.entries) {
        if (paired && !entry.ground_truth)
            throw ValidationError("paired manifest entry for '" + entry.low.string() +
                                  "' lacks field 'gt'");
        if (!paired && entry.ground_truth)
            throw ValidationError("unpaired manifest entry for '" + entry.low.string() +
                                  "' must not set field 'gt'");
    }
    if (!paired && !m.niqe_model_path)
        throw ValidationError("unpaired manifest requires field 'niqe_model_path'");
    if (!paired) m.niqe_model_path = resolve(m.niqe_model_path->string());

    std::string missing;
    auto check_exists = [&](const std::filesystem::path& p) {
        if (!std::filesystem::exists(p)) missing += "\n  " + p.string();
    };
    for (const auto& entry : m.entries) {
        check_exists(entry.low);
        if (entry.ground_truth) check_exists(*entry.ground_truth);
    }
    if (m.niqe_model_path) check_exists(*m.niqe_model_path);
    if (!missing.empty())
        throw ValidationError("manifest references missing files:" + missing);

    return m;
}

EvalReport run_paired_eval(const DatasetManifest& manifest,
                           const EnhancementConfig& cfg,
                           const EvalOptions& options) {
    if (manifest.mode != DatasetManifest::Mode::Paired)
        throw ValidationError("run_paired_eval requires a paired manifest");

    EvalReport report;
    report.dataset = manifest.name;
    report.config = cfg;
    report.timestamp = now_iso8601();

    for (const auto& entry : manifest.entries) {
        EvalRow row;
        row.image = entry.low.filename().string();
        try {
            const ImagePlanar low = load_image(entry.low);
            const ImagePlanar gt = load_image(*entry.ground_truth);
            const ImagePlanar enhanced = enhance_entry(low, cfg, options, row.gamma);
            row.psnr = psnr(gt, enhanced);
            row.ssim = ssim(gt, enhanced);
            row.fsim = fsim(gt, enhanced);
            maybe_write_output(enhanced, entry, options);
        } catch (const Error& e) {
            row.error = e.what();
        }
        report.rows.push_back(std::move(row));
    }
    check_any_succeeded(report);
    report.aggregate = aggregate_rows(report.rows);
    return report;
}

EvalReport run_unpaired_eval(const DatasetManifest& manifest,
                             const EnhancementConfig& cfg,
                             const EvalOptions& options) {
    if (manifest.mode != DatasetManifest::Mode::Unpaired)
        throw ValidationError("run_unpaired_eval requires an unpaired manifest");

    const NiqeModel model = load_niqe_model(*manifest.niqe_model_path);

    EvalReport report;
    report.dataset = manifest.name;
    report.config = cfg;
    report.timestamp = now_iso8601();

    for (const auto& entry : manifest.entries) {
        EvalRow row;
        row.image = entry.low.filename().string();
        try {
            const ImagePlanar low = load_image(entry.low);
            const ImagePlanar enhanced = enhance_entry(low, cfg, options, row.gamma);
            row.niqe = niqe_score(enhanced, model);
            maybe_write_output(enhanced, entry, options);
        } catch (const Error& e) {
            row.error = e.what();
        }
        report.rows.push_back(std::move(row));
    }
    check_any_succeeded(report);
    report.aggregate = aggregate_rows(report.rows);
    return report;
}

EvalRow cross_dataset_average(const std::vector<EvalReport>& reports) {
    std::vector<EvalRow> aggregates;
    aggregates.reserve(reports.size());
    for (const auto& r : reports) aggregates.push_back(r.aggregate);
    EvalRow avg = aggregate_rows(aggregates);
    avg.image = "average";
    return avg;
}

std::string render_report(const EvalReport& report, ReportFormat format) {
    std::ostringstream out;
    if (format == ReportFormat::Csv) {
        out << "image,gamma,psnr,ssim,fsim,niqe\n";
        for (const auto& row : report.rows) {
            if (row.error) {
                out << row.image << ",,,,,\n";
                continue;
            }
            out << row.image << ',' << format3(row.gamma) << ',' << cell(row.psnr)
                << ',' << cell(row.ssim) << ',' << cell(row.fsim) << ','
                << cell(row.niqe) << '\n';
        }
        const auto& agg = report.aggregate;
        out << agg.image << ',' << format3(agg.gamma) << ',' << cell(agg.psnr) << ','
            << cell(agg.ssim) << ',' << cell(agg.fsim) << ',' << cell(agg.niqe)
            << '\n';
        return out.str();
    }

    // Markdown table shaped like the benchmark tables: metrics as columns
    // with direction arrows, aggregate as the final row.
    const bool has_psnr = report.aggregate.psnr.has_value();
    const bool has_ssim = report.aggregate.ssim.has_value();
    const bool has_fsim = report.aggregate.fsim.has_value();
    const bool has_niqe = report.aggregate.niqe.has_value();

    out << "| Image | Gamma |";
    if (has_psnr) out << " PSNR ↑ |";
    if (has_ssim) out << " SSIM ↑ |";
    if (has_fsim) out << " FSIM ↑ |";
    if (has_niqe) out << " NIQE ↓ |";
    out << "\n|---|---|";
    if (has_psnr) out << "---|";
    if (has_ssim) out << "---|";
    if (has_fsim) out << "---|";
    if (has_niqe) out << "---|";
    out << '\n';

    auto emit = [&](const EvalRow& row, const std::string& label) {
        out << "| " << label << " | ";
        if (row.error) {
            out << "failed |";
        } else {
            out << format3(row.gamma) << " |";
        }
        auto metric = [&](bool enabled, const std::optional<double>& v) {
            if (!enabled) return;
            out << ' ' << (row.error || !v ? std::string("-") : format3(*v)) << " |";
        };
        metric(has_psnr, row.psnr);
        metric(has_ssim, row.ssim);
        metric(has_fsim, row.fsim);
        metric(has_niqe, row.niqe);
        out << '\n';
    };
    for (const auto& row : report.rows) emit(row, row.image);
    emit(report.aggregate, "**mean**");
    return out.str();
}

std::string export_histogram(const ImagePlanar& img, int bins) {
    if (bins < 2) throw ConfigError("histogram needs at least 2 bins");
    const ImagePlanar gray = to_grayscale(img);
    std::vector<long long> counts(static_cast<std::size_t>(bins), 0);
    for (double v : gray.plane(0)) {
        int bin = static_cast<int>(v * bins);
        if (bin >= bins) bin = bins - 1;
        if (bin < 0) bin = 0;
        ++counts[static_cast<std::size_t>(bin)];
    }
    std::ostringstream out;
    out << "bin,count\n";
    for (int i = 0; i < bins; ++i) out << i << ',' << counts[static_cast<std::size_t>(i)] << '\n';
    return out.str();
}

}  // namespace tagc
