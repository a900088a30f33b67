#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "arctyrex/torus.hpp"

namespace arctyrex {

/// Every constant of the cryptosystem.
struct ParamSet {
    uint32_t n = 512;              // LWE dimension
    uint32_t ring_n = 1024;        // ring dimension N
    double lwe_noise_std = 0.0;    // fraction of the torus
    double rlwe_noise_std = 0.0;   // fraction of the torus
    uint32_t bg_bits = 10;         // gadget base log2
    uint32_t gadget_levels = 2;    // l
    uint32_t ks_base_bits = 2;
    uint32_t ks_levels = 8;
    Torus32 mu = Torus32::fraction(8);

    /// 110-bit set: n = 512, N = 1024, LWE noise 2^-15, ring noise 25e-9.
    static ParamSet default_110();
    /// 128-bit variant with n = 630; other constants as default_110.
    static ParamSet security_128();
    /// "default" / "110", "128". Throws ParamError for anything else.
    static ParamSet by_name(std::string_view name);

    /// Throws ParamError describing the first violated constraint.
    void validate() const;

    uint32_t gadget_base() const { return uint32_t{1} << bg_bits; }
    uint32_t ks_base() const { return uint32_t{1} << ks_base_bits; }

    /// FNV-1a over the serialized parameter block; identifies compatible files.
    uint64_t hash() const;

    friend bool operator==(const ParamSet&, const ParamSet&) = default;
};

std::string describe(const ParamSet& p);

}  // namespace arctyrex
