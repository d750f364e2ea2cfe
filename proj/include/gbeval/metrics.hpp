#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gbeval/raster.hpp"

namespace gbeval {

struct ConfusionCounts {
    uint64_t tp = 0;
    uint64_t fp = 0;
    uint64_t fn = 0;
    uint64_t tn = 0;

    uint64_t total() const { return tp + fp + fn + tn; }
    ConfusionCounts& operator+=(const ConfusionCounts& o) {
        tp += o.tp;
        fp += o.fp;
        fn += o.fn;
        tn += o.tn;
        return *this;
    }
};

struct ConfidenceConfig {
    double t = 0.15;  // confident tails: p <= t or p >= 1-t; requires 0 < t < 0.5
};

struct Histogram {
    int bin_count = 0;
    std::vector<double> edges;    // bin_count+1 ascending, edges[0]=0, edges[last]=1
    std::vector<uint64_t> counts;

    uint64_t total() const;
};

// Absent values mean the metric is undefined for the inputs; they are
// serialized as "NA", never as zero.
struct MetricBundle {
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
    std::optional<double> certainty;
    std::optional<double> abundance;
    std::optional<int64_t> grain_count;
};

BinaryMask binarize(const ProbabilityMap& map, double threshold);
ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& gt);

std::optional<double> precision(const ConfusionCounts& c);
std::optional<double> recall(const ConfusionCounts& c);
std::optional<double> f1(const ConfusionCounts& c);

double certainty(const ProbabilityMap& map, const ConfidenceConfig& cfg);
std::optional<double> abundance(const ProbabilityMap& map, const ConfidenceConfig& cfg);

Histogram histogram(const ProbabilityMap& map, int bin_count = 20);

// Requires t (and therefore 1-t) to sit on a bin edge; pixels exactly equal
// to t are attributed to the bin starting at t, so results match the direct
// path for any input whose pixels avoid that single value.
struct ConfidencePair {
    double certainty = 0.0;
    std::optional<double> abundance;
};
ConfidencePair confidence_from_histogram(const Histogram& h, const ConfidenceConfig& cfg);

// mean negative log-likelihood with probabilities clamped to [eps, 1-eps]
double bce(const ProbabilityMap& map, const BinaryMask& gt, double eps = 1e-7);

std::string metrics_csv_header();
std::string metrics_csv_row(const std::string& image_id, const MetricBundle& m);

}  // namespace gbeval
