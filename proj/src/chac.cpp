#include "gbeval/chac.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gbeval/errors.hpp"
#include "gbeval/metrics.hpp"
#include "gbeval/rng.hpp"

namespace gbeval {

namespace {

// 8-neighborhood in clockwise ring order starting west
constexpr int kRingRow[8] = {0, -1, -1, -1, 0, 1, 1, 1};
constexpr int kRingCol[8] = {-1, -1, 0, 1, 1, 1, 0, -1};

int ring_index(int drow, int dcol) {
    for (int i = 0; i < 8; ++i)
        if (kRingRow[i] == drow && kRingCol[i] == dcol) return i;
    throw DataError("backtrack is not an 8-neighbor");
}

int64_t cross(const PixelCoord& o, const PixelCoord& a, const PixelCoord& b) {
    // x = col, y = row
    const int64_t ax = a.second - o.second, ay = a.first - o.first;
    const int64_t bx = b.second - o.second, by = b.first - o.first;
    return ax * by - ay * bx;
}

BinaryMask dilate3x3(const BinaryMask& m) {
    BinaryMask out = make_mask(m.width, m.height, false);
    for (int r = 0; r < m.height; ++r)
        for (int c = 0; c < m.width; ++c) {
            if (!m.at(r, c)) continue;
            for (int dr = -1; dr <= 1; ++dr)
                for (int dc = -1; dc <= 1; ++dc) {
                    const int rr = r + dr, cc = c + dc;
                    if (rr >= 0 && rr < m.height && cc >= 0 && cc < m.width) out.at(rr, cc) = 1;
                }
        }
    return out;
}

BinaryMask erode3x3(const BinaryMask& m) {
    BinaryMask out = make_mask(m.width, m.height, false);
    for (int r = 0; r < m.height; ++r)
        for (int c = 0; c < m.width; ++c) {
            bool all = true;
            for (int dr = -1; dr <= 1 && all; ++dr)
                for (int dc = -1; dc <= 1 && all; ++dc) {
                    const int rr = r + dr, cc = c + dc;
                    if (rr < 0 || rr >= m.height || cc < 0 || cc >= m.width || !m.at(rr, cc))
                        all = false;
                }
            out.at(r, c) = all ? 1 : 0;
        }
    return out;
}

}  // namespace

void ChacConfig::validate() const {
    if (!(binarize_threshold > 0.0 && binarize_threshold < 1.0))
        throw ConfigError("chac: binarize_threshold must be in (0,1)");
    if (connectivity != 4 && connectivity != 8)
        throw ConfigError("chac: connectivity must be 4 or 8");
    if (min_area_px < 1) throw ConfigError("chac: min_area_px must be at least 1");
    if (!(solidity_threshold > 0.0 && solidity_threshold <= 1.0))
        throw ConfigError("chac: solidity_threshold must be in (0,1]");
    if (closing_iterations < 0) throw ConfigError("chac: closing_iterations must be >= 0");
}

LabelMap connected_components(const BinaryMask& mask, int connectivity) {
    if (connectivity != 4 && connectivity != 8)
        throw ConfigError("connectivity must be 4 or 8");
    LabelMap labels{mask.width, mask.height,
                    std::vector<int32_t>(mask.pixel_count(), 0)};
    const int n_off = connectivity;
    const int off_r[8] = {-1, 0, 1, 0, -1, -1, 1, 1};
    const int off_c[8] = {0, -1, 0, 1, -1, 1, -1, 1};

    int32_t next = 0;
    std::vector<size_t> stack;
    for (int r = 0; r < mask.height; ++r) {
        for (int c = 0; c < mask.width; ++c) {
            const size_t i = static_cast<size_t>(r) * mask.width + c;
            if (!mask.values[i] || labels.labels[i]) continue;
            ++next;
            labels.labels[i] = next;
            stack.push_back(i);
            while (!stack.empty()) {
                const size_t j = stack.back();
                stack.pop_back();
                const int jr = static_cast<int>(j) / mask.width;
                const int jc = static_cast<int>(j) % mask.width;
                for (int k = 0; k < n_off; ++k) {
                    const int rr = jr + off_r[k], cc = jc + off_c[k];
                    if (rr < 0 || rr >= mask.height || cc < 0 || cc >= mask.width) continue;
                    const size_t jj = static_cast<size_t>(rr) * mask.width + cc;
                    if (mask.values[jj] && !labels.labels[jj]) {
                        labels.labels[jj] = next;
                        stack.push_back(jj);
                    }
                }
            }
        }
    }
    return labels;
}

Contour trace_contour(const LabelMap& labels, int32_t label) {
    const int W = labels.width, H = labels.height;
    auto is_fg = [&](int r, int c) {
        return r >= 0 && r < H && c >= 0 && c < W && labels.at(r, c) == label;
    };

    // topmost-leftmost pixel of the component
    PixelCoord start{-1, -1};
    for (int r = 0; r < H && start.first < 0; ++r)
        for (int c = 0; c < W; ++c)
            if (labels.at(r, c) == label) {
                start = {r, c};
                break;
            }
    if (start.first < 0) throw DataError("trace_contour: unknown label " + std::to_string(label));

    Contour contour{start};
    PixelCoord p = start;
    PixelCoord b{start.first, start.second - 1};  // west neighbor, always background
    const PixelCoord b0 = b;

    const size_t max_steps = 4 * labels.pixel_count() + 8;
    for (size_t step = 0; step < max_steps; ++step) {
        const int bi = ring_index(b.first - p.first, b.second - p.second);
        PixelCoord next{-1, -1};
        PixelCoord next_b = b;
        for (int k = 1; k <= 8; ++k) {
            const int idx = (bi + k) % 8;
            const int rr = p.first + kRingRow[idx];
            const int cc = p.second + kRingCol[idx];
            if (is_fg(rr, cc)) {
                next = {rr, cc};
                const int prev = (bi + k - 1) % 8;
                next_b = {p.first + kRingRow[prev], p.second + kRingCol[prev]};
                break;
            }
        }
        if (next.first < 0) return contour;  // isolated pixel
        if (next == start && next_b == b0) return contour;  // Jacob's criterion
        contour.push_back(next);
        p = next;
        b = next_b;
    }
    return contour;
}

std::vector<PixelCoord> convex_hull(std::vector<PixelCoord> points) {
    if (points.empty()) throw DataError("convex_hull: empty point set");
    std::sort(points.begin(), points.end(),
              [](const PixelCoord& a, const PixelCoord& b) {
                  return a.second != b.second ? a.second < b.second : a.first < b.first;
              });
    points.erase(std::unique(points.begin(), points.end()), points.end());
    const size_t n = points.size();
    if (n <= 2) return points;

    std::vector<PixelCoord> hull(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i) {  // lower
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
        hull[k++] = points[i];
    }
    const size_t lower = k + 1;
    for (size_t i = n - 1; i-- > 0;) {  // upper
        while (k >= lower && cross(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
        hull[k++] = points[i];
    }
    hull.resize(k - 1);
    return hull;
}

double polygon_area(const std::vector<PixelCoord>& vertices) {
    if (vertices.size() < 3) return 0.0;
    int64_t twice = 0;
    for (size_t i = 0; i < vertices.size(); ++i) {
        const auto& a = vertices[i];
        const auto& b = vertices[(i + 1) % vertices.size()];
        // x = col, y = row
        twice += static_cast<int64_t>(a.second) * b.first -
                 static_cast<int64_t>(b.second) * a.first;
    }
    return std::abs(static_cast<double>(twice)) / 2.0;
}

BinaryMask morphological_close(const BinaryMask& mask, int iterations) {
    BinaryMask out = mask;
    for (int i = 0; i < iterations; ++i) out = dilate3x3(out);
    for (int i = 0; i < iterations; ++i) out = erode3x3(out);
    return out;
}

ChacDetection detect_grains_full(const BinaryMask& boundary_mask, const ChacConfig& cfg,
                                 const std::string& image_id) {
    cfg.validate();
    BinaryMask boundary = cfg.closing_iterations > 0
                              ? morphological_close(boundary_mask, cfg.closing_iterations)
                              : boundary_mask;

    // grain interiors are the non-boundary pixels
    BinaryMask interiors = make_mask(boundary.width, boundary.height, false);
    for (size_t i = 0; i < boundary.values.size(); ++i)
        interiors.values[i] = boundary.values[i] ? 0 : 1;

    ChacDetection det;
    det.interior_labels = connected_components(interiors, cfg.connectivity);
    det.set.image_id = image_id;
    det.set.config = cfg;

    int32_t max_label = 0;
    for (int32_t l : det.interior_labels.labels) max_label = std::max(max_label, l);

    struct Acc {
        uint64_t area = 0;
        double row_sum = 0.0, col_sum = 0.0;
        bool border = false;
    };
    std::vector<Acc> acc(static_cast<size_t>(max_label) + 1);
    for (int r = 0; r < det.interior_labels.height; ++r)
        for (int c = 0; c < det.interior_labels.width; ++c) {
            const int32_t l = det.interior_labels.at(r, c);
            if (!l) continue;
            Acc& a = acc[l];
            ++a.area;
            a.row_sum += r;
            a.col_sum += c;
            if (r == 0 || c == 0 || r == det.interior_labels.height - 1 ||
                c == det.interior_labels.width - 1)
                a.border = true;
        }

    for (int32_t l = 1; l <= max_label; ++l) {
        const Acc& a = acc[l];
        if (a.area < cfg.min_area_px) continue;
        if (a.border && !cfg.include_border_grains) continue;

        Grain g;
        g.label = l;
        g.area_px = a.area;
        g.centroid_row = a.row_sum / static_cast<double>(a.area);
        g.centroid_col = a.col_sum / static_cast<double>(a.area);
        g.touches_border = a.border;
        g.contour = trace_contour(det.interior_labels, l);
        g.hull = convex_hull(g.contour);
        g.contour_area = polygon_area(g.contour);
        g.hull_area = polygon_area(g.hull);
        // degenerate (point/line) components are trivially convex
        g.solidity = g.hull_area < 1e-12 ? 1.0 : std::min(1.0, g.contour_area / g.hull_area);
        if (g.solidity < cfg.solidity_threshold) continue;

        det.set.grains.push_back(std::move(g));
    }
    return det;
}

GrainSet detect_grains(const BinaryMask& boundary_mask, const ChacConfig& cfg,
                       const std::string& image_id) {
    return detect_grains_full(boundary_mask, cfg, image_id).set;
}

GrainSet detect_grains(const ProbabilityMap& map, const ChacConfig& cfg,
                       const std::string& image_id) {
    return detect_grains(binarize(map, cfg.binarize_threshold), cfg, image_id);
}

GrainStats grain_stats(const GrainSet& gs) {
    GrainStats st;
    st.count = gs.grains.size();
    if (gs.grains.empty()) return st;

    double sum = 0.0;
    uint64_t max_area = 0;
    for (const auto& g : gs.grains) {
        sum += static_cast<double>(g.area_px);
        max_area = std::max(max_area, g.area_px);
    }
    st.mean_area = sum / static_cast<double>(gs.grains.size());

    const int bins = 10;
    const double hi = static_cast<double>(max_area);
    st.area_edges.resize(bins + 1);
    for (int i = 0; i <= bins; ++i) st.area_edges[i] = hi * i / bins;
    st.area_counts.assign(bins, 0);
    for (const auto& g : gs.grains) {
        int b = hi > 0 ? static_cast<int>(std::floor(g.area_px / hi * bins)) : 0;
        if (b >= bins) b = bins - 1;
        ++st.area_counts[b];
    }
    return st;
}

RgbImage render_grain_overlay(const ChacDetection& det, uint64_t color_seed) {
    int32_t max_label = 0;
    for (int32_t l : det.interior_labels.labels) max_label = std::max(max_label, l);

    // gray for every component, then a seeded random color per accepted grain
    std::vector<std::array<uint8_t, 3>> palette(static_cast<size_t>(max_label) + 1,
                                                {96, 96, 96});
    Rng rng(color_seed);
    for (const auto& g : det.set.grains) {
        palette[g.label] = {static_cast<uint8_t>(64 + rng.next_below(192)),
                            static_cast<uint8_t>(64 + rng.next_below(192)),
                            static_cast<uint8_t>(64 + rng.next_below(192))};
    }

    RgbImage out = make_rgb(det.interior_labels.width, det.interior_labels.height);
    for (int r = 0; r < out.height; ++r)
        for (int c = 0; c < out.width; ++c) {
            const int32_t l = det.interior_labels.at(r, c);
            uint8_t* px = out.at(r, c);
            if (!l) {
                px[0] = px[1] = px[2] = 0;  // boundary pixels stay black
            } else {
                px[0] = palette[l][0];
                px[1] = palette[l][1];
                px[2] = palette[l][2];
            }
        }
    return out;
}

ChacConfig chac_config_from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open chac config: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("chac config is not valid JSON: " + std::string(e.what()));
    }
    ChacConfig cfg;
    try {
        cfg.binarize_threshold = j.value("binarize_threshold", cfg.binarize_threshold);
        cfg.connectivity = j.value("connectivity", cfg.connectivity);
        cfg.min_area_px = j.value("min_area_px", cfg.min_area_px);
        cfg.solidity_threshold = j.value("solidity_threshold", cfg.solidity_threshold);
        cfg.include_border_grains = j.value("include_border_grains", cfg.include_border_grains);
        cfg.closing_iterations = j.value("closing_iterations", cfg.closing_iterations);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("chac config schema violation: " + std::string(e.what()));
    }
    for (const auto& [key, _] : j.items()) {
        static const std::set<std::string> known{"binarize_threshold",    "connectivity",
                                                 "min_area_px",           "solidity_threshold",
                                                 "include_border_grains", "closing_iterations"};
        if (!known.count(key)) throw ConfigError("chac config: unknown key '" + key + "'");
    }
    cfg.validate();
    return cfg;
}

std::string grains_csv_header() {
    return "image_id,label,area_px,solidity,centroid_row,centroid_col,touches_border";
}

void write_grains_csv(const std::vector<GrainSet>& sets, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write grains CSV: " + path.string());
    out << grains_csv_header() << "\n";
    for (const auto& gs : sets) {
        for (const auto& g : gs.grains) {
            std::ostringstream row;
            row.precision(9);
            row << gs.image_id << ',' << g.label << ',' << g.area_px << ',' << g.solidity << ','
                << g.centroid_row << ',' << g.centroid_col << ',' << (g.touches_border ? 1 : 0);
            out << row.str() << "\n";
        }
    }
}

}  // namespace gbeval
