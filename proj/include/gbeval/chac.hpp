#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gbeval/raster.hpp"

namespace gbeval {

using PixelCoord = std::pair<int, int>;  // (row, col)

// Closed outer boundary of a component; closure is implicit (first != last).
// Consecutive points are 8-neighbors.
using Contour = std::vector<PixelCoord>;

struct Grain {
    int32_t label = 0;
    uint64_t area_px = 0;
    Contour contour;
    std::vector<PixelCoord> hull;
    double hull_area = 0.0;
    double contour_area = 0.0;
    double solidity = 0.0;  // contour_area / hull_area, clamped to 1
    double centroid_row = 0.0;
    double centroid_col = 0.0;
    bool touches_border = false;
};

struct ChacConfig {
    double binarize_threshold = 0.5;
    int connectivity = 4;  // interiors; boundaries are traced 8-connected
    uint64_t min_area_px = 50;
    double solidity_threshold = 0.90;
    bool include_border_grains = false;
    int closing_iterations = 0;

    void validate() const;
};

struct GrainSet {
    std::string image_id;
    std::vector<Grain> grains;
    ChacConfig config;
};

struct GrainStats {
    uint64_t count = 0;
    std::optional<double> mean_area;
    std::vector<double> area_edges;    // histogram over [0, max area]
    std::vector<uint64_t> area_counts;
};

// Flood-fill labeling over true pixels; labels 1..K are dense and assigned
// in raster order of each component's first pixel.
LabelMap connected_components(const BinaryMask& mask, int connectivity = 4);

// Moore boundary tracing with Jacob's stopping criterion, starting from the
// component's topmost-leftmost pixel. Counterclockwise with respect to
// (x=col, y=row) shoelace orientation. A single-pixel component yields a
// length-1 contour.
Contour trace_contour(const LabelMap& labels, int32_t label);

// Monotone-chain hull, counterclockwise, collinear points excluded.
// All-collinear input degenerates to its two extreme endpoints.
std::vector<PixelCoord> convex_hull(std::vector<PixelCoord> points);

double polygon_area(const std::vector<PixelCoord>& vertices);

BinaryMask morphological_close(const BinaryMask& mask, int iterations);

GrainSet detect_grains(const BinaryMask& boundary_mask, const ChacConfig& cfg,
                       const std::string& image_id = "");
GrainSet detect_grains(const ProbabilityMap& map, const ChacConfig& cfg,
                       const std::string& image_id = "");

// detect_grains plus the interior label map, for overlay rendering
struct ChacDetection {
    GrainSet set;
    LabelMap interior_labels;
};
ChacDetection detect_grains_full(const BinaryMask& boundary_mask, const ChacConfig& cfg,
                                 const std::string& image_id = "");

GrainStats grain_stats(const GrainSet& gs);

// Accepted grains in seeded random colors, rejected components in gray.
RgbImage render_grain_overlay(const ChacDetection& det, uint64_t color_seed);

ChacConfig chac_config_from_json_file(const std::filesystem::path& path);

std::string grains_csv_header();
void write_grains_csv(const std::vector<GrainSet>& sets, const std::filesystem::path& path);

}  // namespace gbeval
