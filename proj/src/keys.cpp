#include "arctyrex/keys.hpp"

#include "arctyrex/error.hpp"

namespace arctyrex {

LweKey SecretKey::extracted_lwe() const {
    LweKey k;
    k.bits.assign(ring.coeffs().begin(), ring.coeffs().end());
    return k;
}

KeyswitchKey::KeyswitchKey(const ParamSet& p, std::vector<uint32_t> words)
    : input_dim_(p.ring_n),
      output_dim_(p.n),
      levels_(p.ks_levels),
      digit_values_(p.ks_base() - 1),
      words_(std::move(words)) {
    if (words_.size() != entry_count() * (output_dim_ + 1)) {
        throw DimensionError("keyswitch key size does not match parameters");
    }
}

KeySet keygen(const ParamSet& params, const Seed& seed) {
    params.validate();
    Rng rng(seed);

    SecretKey sk;
    sk.params = params;
    sk.lwe.bits.resize(params.n);
    for (auto& b : sk.lwe.bits) b = rng.bit();
    sk.ring = IntPolynomial(params.ring_n);
    for (auto& b : sk.ring.coeffs()) b = rng.bit();

    auto ek = std::make_shared<EvaluationKey>();
    ek->params = params;
    ek->tables = std::make_shared<const NttTables>(params.ring_n);

    ek->bootstrapping_key.reserve(params.n);
    for (uint32_t i = 0; i < params.n; ++i) {
        ek->bootstrapping_key.push_back(tgsw_encrypt(sk.ring, sk.lwe.bits[i], params.bg_bits,
                                                     params.gadget_levels, params.rlwe_noise_std, rng,
                                                     *ek->tables));
    }

    const size_t digit_values = params.ks_base() - 1;
    const size_t record = params.n + 1;
    std::vector<uint32_t> words(size_t{params.ring_n} * params.ks_levels * digit_values * record);
    size_t offset = 0;
    for (uint32_t i = 0; i < params.ring_n; ++i) {
        for (uint32_t j = 0; j < params.ks_levels; ++j) {
            const uint32_t scale = 32 - (j + 1) * params.ks_base_bits;
            for (size_t v = 1; v <= digit_values; ++v) {
                const auto msg = Torus32(static_cast<uint32_t>(
                    (static_cast<uint64_t>(v) * static_cast<uint32_t>(sk.ring[i])) << scale));
                const LweCiphertext c = lwe_encrypt(sk.lwe, msg, params.lwe_noise_std, rng);
                for (size_t k = 0; k < params.n; ++k) words[offset + k] = c.a[k].raw;
                words[offset + params.n] = c.b.raw;
                offset += record;
            }
        }
    }
    ek->keyswitch_key = KeyswitchKey(params, std::move(words));
    return KeySet{std::move(sk), std::move(ek)};
}

LweCiphertext encrypt_bit(const SecretKey& sk, bool bit, Rng& rng) {
    return lwe_encrypt(sk.lwe, bit ? sk.params.mu : -sk.params.mu, sk.params.lwe_noise_std, rng);
}

bool decrypt_bit(const SecretKey& sk, const LweCiphertext& ct) {
    return static_cast<int32_t>(phase(sk.lwe, ct).raw) > 0;
}

}  // namespace arctyrex
