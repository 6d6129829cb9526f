#include "tagc/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

namespace tagc {

namespace {

std::string lower_extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

}  // namespace

std::uint8_t quantize_sample(double v) {
    const double clamped = std::clamp(v, 0.0, 1.0);
    // llround ties away from zero, matching the stated quantization rule.
    return static_cast<std::uint8_t>(std::llround(clamped * 255.0));
}

ImagePlanar load_image(const std::filesystem::path& path) {
    cv::Mat mat = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
    if (mat.empty()) {
        if (!std::filesystem::exists(path))
            throw IoError("cannot read file: " + path.string());
        throw FormatError("undecodable image file: " + path.string());
    }
    if (mat.depth() != CV_8U)
        throw FormatError("unsupported bit depth (" +
                          std::to_string(8 * (1 << (mat.depth() / 2))) +
                          " bits per sample): " + path.string());

    const int src_channels = mat.channels();
    if (src_channels != 1 && src_channels != 3 && src_channels != 4)
        throw FormatError("unsupported channel count (" +
                          std::to_string(src_channels) + "): " + path.string());

    const int out_channels = src_channels == 1 ? 1 : 3;
    ImagePlanar img(mat.cols, mat.rows, out_channels);
    for (int y = 0; y < mat.rows; ++y) {
        const std::uint8_t* row = mat.ptr<std::uint8_t>(y);
        for (int x = 0; x < mat.cols; ++x) {
            if (src_channels == 1) {
                img.at(0, x, y) = row[x] / 255.0;
            } else {
                // OpenCV decodes as BGR(A); alpha, if present, is dropped.
                const std::uint8_t* px = row + x * src_channels;
                img.at(0, x, y) = px[2] / 255.0;
                img.at(1, x, y) = px[1] / 255.0;
                img.at(2, x, y) = px[0] / 255.0;
            }
        }
    }
    return img;
}

void save_image(const ImagePlanar& img, const std::filesystem::path& path) {
    if (lower_extension(path) != ".png")
        throw FormatError("save_image writes 8-bit PNG only (want a .png path): " +
                          path.string());

    const int type = img.channels() == 1 ? CV_8UC1 : CV_8UC3;
    cv::Mat mat(img.height(), img.width(), type);
    for (int y = 0; y < img.height(); ++y) {
        std::uint8_t* row = mat.ptr<std::uint8_t>(y);
        for (int x = 0; x < img.width(); ++x) {
            if (img.channels() == 1) {
                row[x] = quantize_sample(img.at(0, x, y));
            } else {
                std::uint8_t* px = row + x * 3;
                px[0] = quantize_sample(img.at(2, x, y));
                px[1] = quantize_sample(img.at(1, x, y));
                px[2] = quantize_sample(img.at(0, x, y));
            }
        }
    }

    bool ok = false;
    try {
        ok = cv::imwrite(path.string(), mat);
    } catch (const cv::Exception& e) {
        throw IoError("cannot write " + path.string() + ": " + e.err);
    }
    if (!ok) throw IoError("cannot write " + path.string());
}

}  // namespace tagc
