#include "arctyrex/rng.hpp"

#include <sodium.h>

#include <cstring>

#include "arctyrex/error.hpp"

namespace arctyrex {

namespace {

void ensure_sodium() {
    static const int status = sodium_init();
    if (status < 0) throw Error("libsodium initialisation failed");
}

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

Seed parse_seed(std::string_view hex) {
    if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
    if (hex.empty() || hex.size() > 64) throw ParamError("seed must be 1 to 64 hex digits");
    std::string padded(64 - hex.size(), '0');
    padded.append(hex);
    Seed seed{};
    for (size_t i = 0; i < seed.size(); ++i) {
        const int hi = hex_value(padded[2 * i]);
        const int lo = hex_value(padded[2 * i + 1]);
        if (hi < 0 || lo < 0) throw ParamError("seed contains a non-hex character");
        seed[i] = static_cast<uint8_t>(hi << 4 | lo);
    }
    return seed;
}

Seed random_seed() {
    ensure_sodium();
    Seed seed;
    randombytes_buf(seed.data(), seed.size());
    return seed;
}

Rng::Rng(const Seed& seed, uint64_t stream) : key_(seed) {
    ensure_sodium();
    for (int i = 0; i < 8; ++i) nonce_[i] = static_cast<uint8_t>(stream >> (8 * i));
}

Rng Rng::from_entropy() { return Rng(random_seed()); }

void Rng::refill() {
    static constexpr std::array<uint8_t, sizeof(uint32_t) * 64> zeros{};
    std::array<uint8_t, sizeof(uint32_t) * 64> bytes;
    crypto_stream_chacha20_ietf_xor_ic(bytes.data(), zeros.data(), bytes.size(), nonce_.data(), block_,
                                       key_.data());
    block_ += static_cast<uint32_t>(bytes.size() / 64);
    for (size_t i = 0; i < buffer_.size(); ++i) {
        buffer_[i] = static_cast<uint32_t>(bytes[4 * i]) | static_cast<uint32_t>(bytes[4 * i + 1]) << 8 |
                     static_cast<uint32_t>(bytes[4 * i + 2]) << 16 |
                     static_cast<uint32_t>(bytes[4 * i + 3]) << 24;
    }
    pos_ = 0;
}

Rng::result_type Rng::operator()() {
    if (pos_ == buffer_.size()) refill();
    return buffer_[pos_++];
}

Torus32 Rng::gaussian_torus(double stddev) {
    if (stddev == 0.0) return Torus32(0);
    return Torus32::from_double(normal_(*this) * stddev);
}

}  // namespace arctyrex
