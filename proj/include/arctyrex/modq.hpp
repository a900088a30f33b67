#pragma once

// Arithmetic modulo the NTT prime Q = 2^64 - 2^32 + 1.

#include <cstdint>

namespace arctyrex::modq {

inline constexpr uint64_t kModulus = 0xFFFFFFFF00000001ULL;
// Multiplicative generator of Z_Q^*.
inline constexpr uint64_t kGenerator = 12037493425763644479ULL;
// 2^64 mod Q.
inline constexpr uint64_t kEpsilon = 0xFFFFFFFFULL;

// Carries and borrows are folded back arithmetically (carry * epsilon) rather
// than with a conditional: transform data is random, so a branch would
// mispredict half the time and GCC turns selects on carries into branches.

/// Congruent value below 2^64 from a + b with a, b < 2^64 and no double wrap.
constexpr uint64_t fold_carry(unsigned __int128 sum) {
    const auto lo = static_cast<uint64_t>(sum);
    const auto carry = static_cast<uint64_t>(sum >> 64);
    return lo + carry * kEpsilon;
}

constexpr uint64_t canonical(uint64_t r) {
    const uint64_t reduced = r - kModulus;
    return r >= kModulus ? reduced : r;
}

/// a + b for a < 2^64 (not necessarily reduced) and b < Q; the result is
/// congruent but may exceed Q.
constexpr uint64_t add_lazy(uint64_t a, uint64_t b) {
    return fold_carry(static_cast<unsigned __int128>(a) + b);
}

/// a - b for a < 2^64 and b < Q; the result is congruent but may exceed Q.
constexpr uint64_t sub_lazy(uint64_t a, uint64_t b) {
    // a + (Q - b) stays below 2^65, and a wrap past 2^64 is worth epsilon.
    return fold_carry(static_cast<unsigned __int128>(a) + (kModulus - b));
}

constexpr uint64_t add(uint64_t a, uint64_t b) { return canonical(add_lazy(a, b)); }
constexpr uint64_t sub(uint64_t a, uint64_t b) { return canonical(sub_lazy(a, b)); }
constexpr uint64_t neg(uint64_t a) { return a == 0 ? 0 : kModulus - a; }

/// Reduces hi * 2^64 + lo modulo Q using 2^64 = 2^32 - 1 and 2^96 = -1.
constexpr uint64_t reduce128(uint64_t hi, uint64_t lo) {
    const uint64_t hi_hi = hi >> 32;
    const uint64_t hi_lo = hi & kEpsilon;

    // lo - hi_hi; on underflow add Q back once, i.e. subtract epsilon.
    const unsigned __int128 diff = static_cast<unsigned __int128>(lo) - hi_hi;
    const uint64_t borrow = static_cast<uint64_t>(diff >> 64) & 1;
    const uint64_t t0 = static_cast<uint64_t>(diff) - borrow * kEpsilon;

    const uint64_t t1 = hi_lo * kEpsilon;
    return canonical(fold_carry(static_cast<unsigned __int128>(t0) + t1));
}

constexpr uint64_t mul(uint64_t a, uint64_t b) {
    const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    return reduce128(static_cast<uint64_t>(p >> 64), static_cast<uint64_t>(p));
}

constexpr uint64_t pow(uint64_t base, uint64_t exp) {
    uint64_t result = 1;
    while (exp != 0) {
        if (exp & 1) result = mul(result, base);
        base = mul(base, base);
        exp >>= 1;
    }
    return result;
}

/// Fermat inverse; a must be non-zero.
constexpr uint64_t inverse(uint64_t a) { return pow(a, kModulus - 2); }

/// Maps a signed value with |v| < Q/2 to its residue.
constexpr uint64_t from_signed(int64_t v) {
    const auto sign = static_cast<uint64_t>(v >> 63);
    return static_cast<uint64_t>(v) + (sign & kModulus);
}

/// Inverse of from_signed: residues above Q/2 are read as negative.
constexpr int64_t to_signed(uint64_t r) {
    const uint64_t negative = r > kModulus / 2;
    return static_cast<int64_t>(r - (negative * kModulus));
}

/// to_signed(r) mod 2^32; Q = 1 mod 2^32 makes this a single subtraction.
constexpr uint32_t to_torus_raw(uint64_t r) {
    return static_cast<uint32_t>(r - static_cast<uint64_t>(r > kModulus / 2));
}

}  // namespace arctyrex::modq
