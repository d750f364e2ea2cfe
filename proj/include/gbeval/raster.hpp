#pragma once

#include <cstdint>
#include <vector>

#include "gbeval/errors.hpp"

namespace gbeval {

// All rasters are row-major with a top-left origin and (row, col) indexing.
// Types are treated as immutable after construction and are safe to share
// across threads.

struct ProbabilityMap {
    int width = 0;
    int height = 0;
    std::vector<double> values;  // in [0,1]

    double at(int row, int col) const { return values[static_cast<size_t>(row) * width + col]; }
    double& at(int row, int col) { return values[static_cast<size_t>(row) * width + col]; }
    size_t pixel_count() const { return static_cast<size_t>(width) * height; }
};

struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> values;  // 0 or 1; 1 = grain boundary

    uint8_t at(int row, int col) const { return values[static_cast<size_t>(row) * width + col]; }
    uint8_t& at(int row, int col) { return values[static_cast<size_t>(row) * width + col]; }
    size_t pixel_count() const { return static_cast<size_t>(width) * height; }
};

struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> values;  // 3 bytes per pixel, RGB order

    const uint8_t* at(int row, int col) const {
        return values.data() + 3 * (static_cast<size_t>(row) * width + col);
    }
    uint8_t* at(int row, int col) {
        return values.data() + 3 * (static_cast<size_t>(row) * width + col);
    }
    size_t pixel_count() const { return static_cast<size_t>(width) * height; }
};

struct LabelMap {
    int width = 0;
    int height = 0;
    std::vector<int32_t> labels;  // 0 = background, components 1..K dense

    int32_t at(int row, int col) const { return labels[static_cast<size_t>(row) * width + col]; }
    int32_t& at(int row, int col) { return labels[static_cast<size_t>(row) * width + col]; }
    size_t pixel_count() const { return static_cast<size_t>(width) * height; }
};

inline ProbabilityMap make_probability_map(int width, int height, double fill = 0.0) {
    if (width <= 0 || height <= 0) throw DataError("probability map dimensions must be positive");
    if (fill < 0.0 || fill > 1.0) throw DataError("probability value outside [0,1]");
    return ProbabilityMap{width, height, std::vector<double>(static_cast<size_t>(width) * height, fill)};
}

inline BinaryMask make_mask(int width, int height, bool fill = false) {
    if (width <= 0 || height <= 0) throw DataError("mask dimensions must be positive");
    return BinaryMask{width, height,
                      std::vector<uint8_t>(static_cast<size_t>(width) * height, fill ? 1 : 0)};
}

inline RgbImage make_rgb(int width, int height) {
    if (width <= 0 || height <= 0) throw DataError("image dimensions must be positive");
    return RgbImage{width, height, std::vector<uint8_t>(3 * static_cast<size_t>(width) * height, 0)};
}

void validate(const ProbabilityMap& map);

template <typename A, typename B>
void require_same_shape(const A& a, const B& b, const char* what) {
    if (a.width != b.width || a.height != b.height)
        throw DataError(std::string(what) + ": dimension mismatch (" + std::to_string(a.width) +
                        "x" + std::to_string(a.height) + " vs " + std::to_string(b.width) + "x" +
                        std::to_string(b.height) + ")");
}

}  // namespace gbeval
