#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gbeval/errors.hpp"
#include "gbeval/raster.hpp"

namespace gbeval {

namespace detail {

template <typename Img>
Img make_like(const Img& src, int width, int height) {
    Img out;
    out.width = width;
    out.height = height;
    out.values.resize(static_cast<size_t>(width) * height);
    return out;
}

}  // namespace detail

// Non-overlapping tiles in TL, TR, BL, BR order. Requires even dimensions.
template <typename Img>
std::array<Img, 4> quarter(const Img& img) {
    if (img.width % 2 != 0 || img.height % 2 != 0)
        throw DataError("quartering requires even dimensions, got " + std::to_string(img.width) +
                        "x" + std::to_string(img.height));
    const int hw = img.width / 2;
    const int hh = img.height / 2;
    std::array<Img, 4> tiles{detail::make_like(img, hw, hh), detail::make_like(img, hw, hh),
                             detail::make_like(img, hw, hh), detail::make_like(img, hw, hh)};
    for (int r = 0; r < img.height; ++r) {
        for (int c = 0; c < img.width; ++c) {
            const int q = (r < hh ? 0 : 2) + (c < hw ? 0 : 1);
            tiles[q].at(r % hh, c % hw) = img.at(r, c);
        }
    }
    return tiles;
}

// The eight square-symmetry images: identity, three rotations, two axis
// flips, and the two diagonal flips. Requires a square input so a mask can
// receive the identical transform as its image.
template <typename Img>
std::array<Img, 8> augment_d4(const Img& img) {
    if (img.width != img.height)
        throw DataError("dihedral augmentation requires a square image");
    const int n = img.width;
    std::array<Img, 8> out;
    for (auto& o : out) o = detail::make_like(img, n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            const auto v = img.at(r, c);
            out[0].at(r, c) = v;                          // identity
            out[1].at(c, n - 1 - r) = v;                  // rot90 (clockwise)
            out[2].at(n - 1 - r, n - 1 - c) = v;          // rot180
            out[3].at(n - 1 - c, r) = v;                  // rot270
            out[4].at(r, n - 1 - c) = v;                  // horizontal flip
            out[5].at(n - 1 - r, c) = v;                  // vertical flip
            out[6].at(c, r) = v;                          // hflip . rot90 (transpose)
            out[7].at(n - 1 - c, n - 1 - r) = v;          // vflip . rot90 (anti-transpose)
        }
    }
    return out;
}

struct ImagePair {
    std::string image_path;
    std::string annotation_path;
    std::string origin_id;
    std::optional<int> quadrant;  // 0..3, set iff produced by quartering

    // pair identifier referenced by fold validation sets
    std::string id() const {
        return quadrant ? origin_id + ":q" + std::to_string(*quadrant) : origin_id;
    }
};

struct FoldSpec {
    int fold_index = 0;
    std::vector<std::string> validation_ids;  // sorted, unique
};

struct DatasetManifest {
    int version = 1;
    uint64_t rng_seed = 0;
    int k = 0;
    bool augment_d4 = true;
    std::vector<ImagePair> pairs;
    std::vector<FoldSpec> folds;

    std::vector<std::string> training_ids(int fold_index) const;
    // training pairs times 8 when dihedral augmentation is on
    size_t effective_training_count(int fold_index) const;
};

// Deterministic seeded shuffle of [0, pair_count) then a contiguous
// partition; the first pair_count % k folds take the extra item.
std::vector<FoldSpec> build_folds(const std::vector<std::string>& pair_ids, int k,
                                  uint64_t rng_seed);

// Structural invariants only (sizes, disjointness, coverage).
void validate_manifest(const DatasetManifest& m);
// Also checks that every referenced file exists, resolving relative paths
// against base_dir.
void validate_manifest_files(const DatasetManifest& m, const std::filesystem::path& base_dir);

void write_manifest(const DatasetManifest& m, const std::filesystem::path& path);
DatasetManifest read_manifest(const std::filesystem::path& path, bool check_files = true);

}  // namespace gbeval
