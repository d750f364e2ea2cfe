#include "gbeval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gbeval/errors.hpp"

namespace gbeval {

namespace {

void check_confidence(const ConfidenceConfig& cfg) {
    if (!(cfg.t > 0.0 && cfg.t < 0.5))
        throw ConfigError("confidence threshold t must satisfy 0 < t < 0.5");
}

std::string format_optional(const std::optional<double>& v) {
    if (!v) return "NA";
    std::ostringstream os;
    os.precision(9);
    os << *v;
    return os.str();
}

}  // namespace

uint64_t Histogram::total() const {
    return std::accumulate(counts.begin(), counts.end(), uint64_t{0});
}

BinaryMask binarize(const ProbabilityMap& map, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0))
        throw ConfigError("binarization threshold must satisfy 0 < threshold < 1");
    BinaryMask out{map.width, map.height, std::vector<uint8_t>(map.pixel_count())};
    for (size_t i = 0; i < map.values.size(); ++i)
        out.values[i] = map.values[i] >= threshold ? 1 : 0;
    return out;
}

ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& gt) {
    require_same_shape(pred, gt, "confusion");
    ConfusionCounts c;
    for (size_t i = 0; i < pred.values.size(); ++i) {
        const bool p = pred.values[i] != 0;
        const bool y = gt.values[i] != 0;
        if (p && y)
            ++c.tp;
        else if (p && !y)
            ++c.fp;
        else if (!p && y)
            ++c.fn;
        else
            ++c.tn;
    }
    return c;
}

std::optional<double> precision(const ConfusionCounts& c) {
    const uint64_t denom = c.tp + c.fp;
    if (denom == 0) return std::nullopt;
    return static_cast<double>(c.tp) / static_cast<double>(denom);
}

std::optional<double> recall(const ConfusionCounts& c) {
    const uint64_t denom = c.tp + c.fn;
    if (denom == 0) return std::nullopt;
    return static_cast<double>(c.tp) / static_cast<double>(denom);
}

std::optional<double> f1(const ConfusionCounts& c) {
    const auto p = precision(c);
    const auto r = recall(c);
    if (!p || !r) return std::nullopt;
    if (*p + *r == 0.0) return std::nullopt;
    return 2.0 * *p * *r / (*p + *r);
}

double certainty(const ProbabilityMap& map, const ConfidenceConfig& cfg) {
    check_confidence(cfg);
    const double hi = 1.0 - cfg.t;
    uint64_t confident = 0;
    for (double v : map.values)
        if (v <= cfg.t || v >= hi) ++confident;
    return static_cast<double>(confident) / static_cast<double>(map.pixel_count());
}

std::optional<double> abundance(const ProbabilityMap& map, const ConfidenceConfig& cfg) {
    check_confidence(cfg);
    const double hi = 1.0 - cfg.t;
    uint64_t confident = 0;
    uint64_t positive = 0;
    for (double v : map.values) {
        if (v >= hi) {
            ++confident;
            ++positive;
        } else if (v <= cfg.t) {
            ++confident;
        }
    }
    if (confident == 0) return std::nullopt;
    return static_cast<double>(positive) / static_cast<double>(confident);
}

Histogram histogram(const ProbabilityMap& map, int bin_count) {
    if (bin_count < 2) throw ConfigError("histogram needs at least 2 bins");
    Histogram h;
    h.bin_count = bin_count;
    h.edges.resize(bin_count + 1);
    for (int i = 0; i <= bin_count; ++i) h.edges[i] = static_cast<double>(i) / bin_count;
    h.counts.assign(bin_count, 0);
    for (double v : map.values) {
        int bin = static_cast<int>(std::floor(v * bin_count));
        if (bin >= bin_count) bin = bin_count - 1;  // value 1.0 closes the last bin
        if (bin < 0) bin = 0;
        ++h.counts[bin];
    }
    return h;
}

ConfidencePair confidence_from_histogram(const Histogram& h, const ConfidenceConfig& cfg) {
    check_confidence(cfg);
    const double edge_tol = 1e-9;
    int low_edge = -1;
    int high_edge = -1;
    for (int i = 0; i <= h.bin_count; ++i) {
        if (std::abs(h.edges[i] - cfg.t) <= edge_tol) low_edge = i;
        if (std::abs(h.edges[i] - (1.0 - cfg.t)) <= edge_tol) high_edge = i;
    }
    if (low_edge < 0 || high_edge < 0)
        throw ConfigError("confidence threshold does not align with a histogram bin edge");

    uint64_t low = 0;
    for (int i = 0; i < low_edge; ++i) low += h.counts[i];
    uint64_t high = 0;
    for (int i = high_edge; i < h.bin_count; ++i) high += h.counts[i];

    ConfidencePair out;
    const uint64_t confident = low + high;
    const uint64_t total = h.total();
    out.certainty = total == 0 ? 0.0 : static_cast<double>(confident) / static_cast<double>(total);
    if (confident > 0)
        out.abundance = static_cast<double>(high) / static_cast<double>(confident);
    return out;
}

double bce(const ProbabilityMap& map, const BinaryMask& gt, double eps) {
    require_same_shape(map, gt, "bce");
    double sum = 0.0;
    for (size_t i = 0; i < map.values.size(); ++i) {
        const double pc = std::clamp(map.values[i], eps, 1.0 - eps);
        sum += gt.values[i] ? std::log(pc) : std::log(1.0 - pc);
    }
    return -sum / static_cast<double>(map.pixel_count());
}

std::string metrics_csv_header() { return "image_id,precision,recall,f1,certainty,abundance"; }

std::string metrics_csv_row(const std::string& image_id, const MetricBundle& m) {
    std::ostringstream os;
    os << image_id << ',' << format_optional(m.precision) << ',' << format_optional(m.recall)
       << ',' << format_optional(m.f1) << ',' << format_optional(m.certainty) << ','
       << format_optional(m.abundance);
    return os.str();
}

}  // namespace gbeval
