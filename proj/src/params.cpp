#include "arctyrex/params.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "arctyrex/error.hpp"

namespace arctyrex {

ParamSet ParamSet::default_110() {
    ParamSet p;
    p.n = 512;
    p.ring_n = 1024;
    p.lwe_noise_std = std::ldexp(1.0, -15);
    p.rlwe_noise_std = 25e-9;
    p.bg_bits = 10;
    p.gadget_levels = 2;
    p.ks_base_bits = 2;
    p.ks_levels = 8;
    p.mu = Torus32::fraction(8);
    return p;
}

ParamSet ParamSet::security_128() {
    ParamSet p = default_110();
    p.n = 630;
    return p;
}

ParamSet ParamSet::by_name(std::string_view name) {
    if (name == "default" || name == "110") return default_110();
    if (name == "128") return security_128();
    throw ParamError("unknown parameter set '" + std::string(name) + "' (expected default, 110, 128)");
}

void ParamSet::validate() const {
    if (n == 0) throw ParamError("LWE dimension n must be positive");
    if (ring_n == 0 || !std::has_single_bit(ring_n)) {
        throw ParamError("ring dimension N must be a power of two");
    }
    if (bg_bits == 0 || gadget_levels == 0) throw ParamError("gadget base and levels must be positive");
    if (gadget_levels * bg_bits > 32) {
        throw ParamError("gadget decomposition l*Bg_bits = " + std::to_string(gadget_levels * bg_bits) +
                         " exceeds 32 bits");
    }
    if (ks_base_bits == 0 || ks_levels == 0) throw ParamError("keyswitch base and levels must be positive");
    if (ks_levels * ks_base_bits > 32) {
        throw ParamError("keyswitch decomposition ks_levels*ks_base_bits = " +
                         std::to_string(ks_levels * ks_base_bits) + " exceeds 32 bits");
    }
    // External-product accumulators must stay below Q/2 to be read back exactly:
    // 2l * N * 2^(Bg_bits-1) * 2^32 < 2^63.
    const double bound = std::log2(2.0 * gadget_levels) + std::log2(ring_n) + (bg_bits - 1) + 32;
    if (bound >= 63) throw ParamError("gadget parameters overflow the NTT modulus");
    if (!(lwe_noise_std >= 0) || !(rlwe_noise_std >= 0) || lwe_noise_std >= 0.5 || rlwe_noise_std >= 0.5) {
        throw ParamError("noise standard deviations must lie in [0, 0.5)");
    }
    if (mu.raw == 0) throw ParamError("encoding constant mu must be non-zero");
}

uint64_t ParamSet::hash() const {
    uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](uint64_t v, int bytes) {
        for (int i = 0; i < bytes; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    };
    mix(n, 4);
    mix(ring_n, 4);
    mix(std::bit_cast<uint64_t>(lwe_noise_std), 8);
    mix(std::bit_cast<uint64_t>(rlwe_noise_std), 8);
    mix(bg_bits, 4);
    mix(gadget_levels, 4);
    mix(ks_base_bits, 4);
    mix(ks_levels, 4);
    mix(mu.raw, 4);
    return h;
}

std::string describe(const ParamSet& p) {
    std::ostringstream os;
    os << "n=" << p.n << " N=" << p.ring_n << " lwe_noise=" << p.lwe_noise_std
       << " rlwe_noise=" << p.rlwe_noise_std << " Bg_bits=" << p.bg_bits << " l=" << p.gadget_levels
       << " ks_base_bits=" << p.ks_base_bits << " ks_levels=" << p.ks_levels
       << " mu=" << p.mu.to_double();
    return os.str();
}

}  // namespace arctyrex
