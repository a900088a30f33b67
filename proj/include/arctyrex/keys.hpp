#pragma once

#include <memory>
#include <vector>

#include "arctyrex/lwe.hpp"
#include "arctyrex/ntt.hpp"
#include "arctyrex/params.hpp"
#include "arctyrex/rng.hpp"

namespace arctyrex {

/// Client-side material: the LWE key and the ring key.
struct SecretKey {
    ParamSet params;
    LweKey lwe;
    IntPolynomial ring;

    /// The ring key read as an LWE key of dimension N (sample-extraction key).
    LweKey extracted_lwe() const;
};

/// Keyswitching key: for each of N input coefficients, ks_levels digits and
/// 2^ks_base_bits - 1 non-zero digit values, an LWE ciphertext at dimension n.
/// Stored flat, one (n + 1)-word record per entry.
class KeyswitchKey {
public:
    KeyswitchKey() = default;
    KeyswitchKey(const ParamSet& p, std::vector<uint32_t> words);

    size_t input_dimension() const { return input_dim_; }
    size_t output_dimension() const { return output_dim_; }
    size_t levels() const { return levels_; }
    size_t digit_values() const { return digit_values_; }
    size_t entry_count() const { return input_dim_ * levels_ * digit_values_; }

    /// Record for coefficient i, level j, digit value v in [1, base).
    std::span<const uint32_t> entry(size_t i, size_t j, size_t v) const {
        const size_t idx = (i * levels_ + j) * digit_values_ + (v - 1);
        return {words_.data() + idx * (output_dim_ + 1), output_dim_ + 1};
    }
    std::span<const uint32_t> words() const { return words_; }

private:
    size_t input_dim_ = 0;
    size_t output_dim_ = 0;
    size_t levels_ = 0;
    size_t digit_values_ = 0;
    std::vector<uint32_t> words_;
};

/// Server-side material. Immutable once built; shared read-only by workers.
struct EvaluationKey {
    ParamSet params;
    std::shared_ptr<const NttTables> tables;
    std::vector<TgswCiphertext> bootstrapping_key;
    KeyswitchKey keyswitch_key;
};

struct KeySet {
    SecretKey secret;
    std::shared_ptr<const EvaluationKey> eval;
};

/// Deterministic in (params, seed). Throws ParamError for invalid params.
KeySet keygen(const ParamSet& params, const Seed& seed);

LweCiphertext encrypt_bit(const SecretKey& sk, bool bit, Rng& rng);
/// 1 iff the signed phase is strictly positive.
bool decrypt_bit(const SecretKey& sk, const LweCiphertext& ct);

}  // namespace arctyrex
