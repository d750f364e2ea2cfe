#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace gbeval {

// Seeded generator with pinned draw algorithms. mt19937_64 output is fully
// specified by the standard; the bounded and real draws below avoid
// std::uniform_*_distribution, whose results are implementation-defined.
// Every random decision in the toolkit flows through this type, so a seed
// pins all outputs byte-for-byte.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    // [0, n); multiply-shift mapping, bias below 2^-64
    uint64_t next_below(uint64_t n) {
        return static_cast<uint64_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // [0, 1)
    double next_real01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool next_bernoulli(double p) { return next_real01() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // first k entries of a shuffled [0, n) index vector
    std::vector<size_t> sample_indices(size_t n, size_t k) {
        std::vector<size_t> idx(n);
        for (size_t i = 0; i < n; ++i) idx[i] = i;
        shuffle(idx);
        idx.resize(k < n ? k : n);
        return idx;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace gbeval
