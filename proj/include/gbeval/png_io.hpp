#pragma once

#include <filesystem>
#include <string>

#include "gbeval/raster.hpp"

namespace gbeval {

// PNG is the only image format: grayscale 8/16-bit in, grayscale and RGB
// 8-bit out. Probability values are decoded linearly as s / s_max with
// s_max = 255 or 65535, so a save/load round trip stays within
// 1/(2*s_max) per pixel.

ProbabilityMap load_probability_map(const std::filesystem::path& path);
ProbabilityMap load_probability_map(const std::filesystem::path& path, int& source_depth);

// strict (default): pixels must be exactly 0 or 255; lenient: s >= 128 is true
BinaryMask load_mask(const std::filesystem::path& path, bool lenient = false);

void save_probability_map(const ProbabilityMap& map, const std::filesystem::path& path,
                          int depth = 16);
void save_mask(const BinaryMask& mask, const std::filesystem::path& path);
void save_rgb(const RgbImage& img, const std::filesystem::path& path);

}  // namespace gbeval
