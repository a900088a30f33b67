#pragma once

// Negacyclic number theoretic transform over Q = 2^64 - 2^32 + 1.
//
// The forward transform folds the psi-twist into the Cooley-Tukey butterflies
// and leaves its output in bit-reversed order; the inverse undoes both. Only
// the composition and pointwise products are meaningful to callers.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "arctyrex/torus.hpp"

namespace arctyrex {

class NttTables {
public:
    /// Throws ParamError unless n is a power of two with 2n | Q - 1.
    explicit NttTables(size_t n);

    size_t size() const { return n_; }
    /// Primitive 2n-th root of unity g^((Q-1)/2n).
    uint64_t psi() const { return psi_; }
    /// psi^2, a primitive n-th root of unity.
    uint64_t omega() const { return omega_; }
    uint64_t n_inverse() const { return n_inverse_; }

    // psi powers in bit-reversed order, as consumed by the butterflies.
    std::span<const uint64_t> psi_powers() const { return psi_rev_; }
    std::span<const uint64_t> inverse_psi_powers() const { return psi_inv_rev_; }

private:
    size_t n_;
    uint64_t psi_;
    uint64_t omega_;
    uint64_t n_inverse_;
    std::vector<uint64_t> psi_rev_;
    std::vector<uint64_t> psi_inv_rev_;
};

/// In-place forward transform of residues mod Q.
void ntt_forward_inplace(std::span<uint64_t> values, const NttTables& t);
/// In-place inverse transform, including the 1/N scaling.
void ntt_inverse_inplace(std::span<uint64_t> values, const NttTables& t);

namespace detail {
/// Inverse transform without the 1/N scaling, for callers that fold the
/// scaling into a precomputed operand. Counted as an inverse transform.
void ntt_inverse_unscaled_inplace(std::span<uint64_t> values, const NttTables& t);
}  // namespace detail

std::vector<uint64_t> ntt_forward(std::span<const uint64_t> values, const NttTables& t);
std::vector<uint64_t> ntt_inverse(std::span<const uint64_t> values, const NttTables& t);

/// Lifts torus coefficients to residues by zero extension.
void lift_torus(std::span<const Torus32> in, std::span<uint64_t> out);
/// Lifts signed digits to residues.
void lift_int(std::span<const int32_t> in, std::span<uint64_t> out);
/// Reads residues as signed integers (|v| < Q/2) and reduces them mod 2^32.
void residues_to_torus(std::span<const uint64_t> in, std::span<Torus32> out);

/// p * q mod (X^N + 1) via the transform. Bit-exact with negacyclic_mul_naive
/// whenever N * max|p_i| < 2^31, which gadget digits always satisfy.
TorusPolynomial negacyclic_mul(const IntPolynomial& p, const TorusPolynomial& q,
                               const NttTables& t);

}  // namespace arctyrex
