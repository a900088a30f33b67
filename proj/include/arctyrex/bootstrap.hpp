#pragma once

// Gate bootstrapping pipeline: linear pre-combination (see gates.hpp), blind
// rotation of a test vector by the encrypted phase, sample extraction, and
// keyswitching back to the LWE dimension.

#include <vector>

#include "arctyrex/keys.hpp"
#include "arctyrex/lwe.hpp"
#include "arctyrex/params.hpp"

namespace arctyrex {

/// Balanced base-2^bg_bits digits d_1..d_l of every coefficient, d_1 most
/// significant, each in [-2^(bg_bits-1), 2^(bg_bits-1)). Rounds the dropped
/// low bits to nearest.
std::vector<IntPolynomial> gadget_decompose(const TorusPolynomial& p, const ParamSet& params);

/// g * c: 2l forward transforms of the decomposed operand, accumulation in the
/// transform domain, two inverse transforms.
TlweCiphertext external_product(const TgswCiphertext& g, const TlweCiphertext& c,
                                const ParamSet& params, const NttTables& t);

/// round(2N * x / 2^32) mod 2N, half-up.
int64_t discretize(Torus32 x, size_t ring_n);

/// Rotates test_vector by minus the discretized phase of ct, one external
/// product per key bit (always n of them).
TlweCiphertext blind_rotate(const TlweCiphertext& test_vector, const LweCiphertext& ct,
                            const EvaluationKey& ek);

/// Constant coefficient of c as an LWE ciphertext of dimension N under the
/// ring key coefficients.
LweCiphertext sample_extract(const TlweCiphertext& c);

/// Dimension N -> n under the LWE key.
LweCiphertext keyswitch(const LweCiphertext& ct, const EvaluationKey& ek);

/// Trivial TLWE whose body is mu in every coefficient.
TlweCiphertext constant_test_vector(size_t ring_n, Torus32 mu);

/// Blind rotation plus extraction; output at dimension N encrypting
/// +mu if phase(ct) is in [0, 1/2) else -mu.
LweCiphertext bootstrap_to_extracted(const LweCiphertext& ct, Torus32 mu, const EvaluationKey& ek);

/// Sign bootstrap with fresh noise, output at dimension n.
LweCiphertext gate_bootstrap(const LweCiphertext& ct, const EvaluationKey& ek);

}  // namespace arctyrex
