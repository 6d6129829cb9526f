#pragma once

#include <cstdint>
#include <filesystem>

#include "tagc/image.hpp"

namespace tagc {

// Decodes an 8-bit PNG or JPEG. Codes map to code/255 exactly; alpha is
// dropped; grayscale sources yield 1-channel images.
ImagePlanar load_image(const std::filesystem::path& path);

// Writes an 8-bit PNG (.png extension required). Samples are clamped to
// [0, 1] and quantized with round-half-away-from-zero.
void save_image(const ImagePlanar& img, const std::filesystem::path& path);

// Quantization rule shared by save_image and the tests.
std::uint8_t quantize_sample(double v);

}  // namespace tagc
