#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace pwla {

// mt19937 with hand-rolled draws. The engine is bit-exact by the standard;
// std::uniform_*_distribution is implementation-defined, and reports must be
// reproducible across toolchains, so the mapping is done here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(static_cast<std::uint32_t>(seed)) {}

    // uniform in [0,1), 53 random bits
    double uniform01() {
        const std::uint64_t hi = gen_();
        const std::uint64_t lo = gen_();
        return static_cast<double>(((hi << 32) | lo) >> 11) * 0x1.0p-53;
    }

    // uniform in [lo,hi)
    double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

    // uniform integer in [0,n), n > 0 (Lemire multiply-shift)
    std::uint32_t below(std::uint32_t n) {
        return static_cast<std::uint32_t>((static_cast<std::uint64_t>(gen_()) * n) >> 32);
    }

    // Fisher-Yates
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[below(static_cast<std::uint32_t>(i))]);
    }

private:
    std::mt19937 gen_;
};

} // namespace pwla
