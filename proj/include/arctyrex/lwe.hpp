#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "arctyrex/ntt.hpp"
#include "arctyrex/rng.hpp"
#include "arctyrex/torus.hpp"

namespace arctyrex {

/// Binary LWE secret.
struct LweKey {
    std::vector<int32_t> bits;
    size_t dimension() const { return bits.size(); }
};

/// Encryption of one torus value: mask a and body b, phase b - <a, s>.
struct LweCiphertext {
    std::vector<Torus32> a;
    Torus32 b;

    LweCiphertext() = default;
    explicit LweCiphertext(size_t dim) : a(dim) {}

    size_t dimension() const { return a.size(); }

    /// Noiseless encryption with zero mask.
    static LweCiphertext trivial(size_t dim, Torus32 message);

    LweCiphertext& operator+=(const LweCiphertext& o);
    LweCiphertext& operator-=(const LweCiphertext& o);
    friend LweCiphertext operator-(LweCiphertext c);
    friend bool operator==(const LweCiphertext&, const LweCiphertext&) = default;
};

Torus32 phase(const LweKey& key, const LweCiphertext& ct);
LweCiphertext lwe_encrypt(const LweKey& key, Torus32 message, double noise_std, Rng& rng);

/// One term of an integer-weighted ciphertext combination.
struct LinearTerm {
    int32_t weight;
    const LweCiphertext& ct;
};

/// constant + sum of weight * ct, componentwise. Adds no noise of its own.
LweCiphertext lwe_linear(std::initializer_list<LinearTerm> terms, Torus32 constant);
LweCiphertext lwe_linear(std::span<const int32_t> weights,
                         std::span<const LweCiphertext* const> cts, Torus32 constant);

/// Ring LWE ciphertext (a, b) with phase b - a * s.
struct TlweCiphertext {
    TorusPolynomial a;
    TorusPolynomial b;

    TlweCiphertext() = default;
    explicit TlweCiphertext(size_t n) : a(n), b(n) {}

    size_t ring_dimension() const { return a.size(); }
    static TlweCiphertext trivial(const TorusPolynomial& message);
    friend bool operator==(const TlweCiphertext&, const TlweCiphertext&) = default;
};

TorusPolynomial tlwe_phase(const IntPolynomial& key, const TlweCiphertext& ct, const NttTables& t);
TlweCiphertext tlwe_encrypt(const IntPolynomial& key, const TorusPolynomial& message,
                            double noise_std, Rng& rng, const NttTables& t);

/// Gadget-matrix encryption of a small integer: 2l TLWE rows kept together
/// with their transform-domain image, which is what the external product
/// consumes.
class TgswCiphertext {
public:
    TgswCiphertext() = default;
    TgswCiphertext(std::vector<TlweCiphertext> rows, const NttTables& t);

    size_t levels() const { return rows_.size() / 2; }
    size_t ring_dimension() const { return n_; }
    const std::vector<TlweCiphertext>& rows() const { return rows_; }

    /// Transform of row r, component c (0 = mask, 1 = body), pre-multiplied
    /// by N^-1 so products can use the unscaled inverse transform.
    std::span<const uint64_t> spectrum(size_t row, size_t component) const {
        return {spectrum_.data() + (2 * row + component) * n_, n_};
    }

private:
    size_t n_ = 0;
    std::vector<TlweCiphertext> rows_;
    std::vector<uint64_t> spectrum_;
};

/// Encrypts message under key with gadget base 2^bg_bits and `levels` rows
/// per component.
TgswCiphertext tgsw_encrypt(const IntPolynomial& key, int32_t message, uint32_t bg_bits,
                            uint32_t levels, double noise_std, Rng& rng, const NttTables& t);

}  // namespace arctyrex
