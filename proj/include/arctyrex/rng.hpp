#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

#include "arctyrex/torus.hpp"

namespace arctyrex {

using Seed = std::array<uint8_t, 32>;

/// Parses up to 64 hex digits (optional 0x prefix), left-padded with zeros.
Seed parse_seed(std::string_view hex);
Seed random_seed();

/// ChaCha20 keystream as a uniform random bit generator. Identical seed and
/// stream id reproduce the same sequence on every platform.
class Rng {
public:
    using result_type = uint32_t;

    explicit Rng(const Seed& seed, uint64_t stream = 0);
    static Rng from_entropy();

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<uint32_t>::max(); }
    result_type operator()();

    int32_t bit() { return static_cast<int32_t>((*this)() & 1u); }
    Torus32 uniform_torus() { return Torus32((*this)()); }
    /// Centered Gaussian with the given standard deviation, rounded to Torus32.
    Torus32 gaussian_torus(double stddev);

private:
    void refill();

    Seed key_;
    std::array<uint8_t, 12> nonce_{};
    uint32_t block_ = 0;
    std::array<uint32_t, 64> buffer_{};
    size_t pos_ = 64;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace arctyrex
