#pragma once

#include <span>

#include "arctyrex/gate_kind.hpp"
#include "arctyrex/keys.hpp"
#include "arctyrex/lwe.hpp"

namespace arctyrex {

/// Homomorphic evaluation of one gate. Bootstrapped two-input gates differ
/// only in their linear pre-combination; NOT/COPY/CONST are linear and
/// noiseless; MUX costs two bootstraps and a single keyswitch.
///
/// Throws DimensionError on an arity or dimension mismatch.
LweCiphertext eval_gate(GateKind kind, std::span<const LweCiphertext* const> inputs,
                        const EvaluationKey& ek);

LweCiphertext eval_gate(GateKind kind, std::initializer_list<const LweCiphertext*> inputs,
                        const EvaluationKey& ek);

/// Pre-bootstrap combination for a two-input bootstrapped gate.
LweCiphertext gate_linear_combination(GateKind kind, const LweCiphertext& x, const LweCiphertext& y,
                                      Torus32 mu);

}  // namespace arctyrex
