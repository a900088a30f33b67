#include "arctyrex/gates.hpp"

#include <string>

#include "arctyrex/bootstrap.hpp"
#include "arctyrex/error.hpp"

namespace arctyrex {

LweCiphertext gate_linear_combination(GateKind kind, const LweCiphertext& x, const LweCiphertext& y,
                                      Torus32 mu) {
    const Torus32 two_mu = 2 * mu;
    switch (kind) {
        case GateKind::And: return lwe_linear({{1, x}, {1, y}}, -mu);
        case GateKind::Or: return lwe_linear({{1, x}, {1, y}}, mu);
        case GateKind::Nand: return lwe_linear({{-1, x}, {-1, y}}, mu);
        case GateKind::Nor: return lwe_linear({{-1, x}, {-1, y}}, -mu);
        case GateKind::Xor: return lwe_linear({{2, x}, {2, y}}, two_mu);
        case GateKind::Xnor: return lwe_linear({{-2, x}, {-2, y}}, -two_mu);
        default: break;
    }
    throw DimensionError("no two-input linear combination for " + std::string(name(kind)));
}

LweCiphertext eval_gate(GateKind kind, std::span<const LweCiphertext* const> inputs,
                        const EvaluationKey& ek) {
    if (inputs.size() != arity(kind)) {
        throw DimensionError(std::string(name(kind)) + " expects " + std::to_string(arity(kind)) +
                             " inputs, got " + std::to_string(inputs.size()));
    }
    const ParamSet& p = ek.params;
    for (const LweCiphertext* in : inputs) {
        if (in->dimension() != p.n) {
            throw DimensionError(std::string(name(kind)) + ": input dimension " +
                                 std::to_string(in->dimension()) + ", expected " + std::to_string(p.n));
        }
    }

    switch (kind) {
        case GateKind::Not: return -*inputs[0];
        case GateKind::Copy: return *inputs[0];
        case GateKind::Const0: return LweCiphertext::trivial(p.n, -p.mu);
        case GateKind::Const1: return LweCiphertext::trivial(p.n, p.mu);
        case GateKind::Mux: {
            const LweCiphertext& sel = *inputs[0];
            const LweCiphertext& a = *inputs[1];
            const LweCiphertext& b = *inputs[2];
            // (sel AND a) + (NOT sel AND b) + mu, each term bootstrapped to +-mu.
            LweCiphertext sum = bootstrap_to_extracted(lwe_linear({{1, sel}, {1, a}}, -p.mu), p.mu, ek);
            sum += bootstrap_to_extracted(lwe_linear({{-1, sel}, {1, b}}, -p.mu), p.mu, ek);
            sum.b += p.mu;
            return keyswitch(sum, ek);
        }
        default:
            return gate_bootstrap(gate_linear_combination(kind, *inputs[0], *inputs[1], p.mu), ek);
    }
}

LweCiphertext eval_gate(GateKind kind, std::initializer_list<const LweCiphertext*> inputs,
                        const EvaluationKey& ek) {
    return eval_gate(kind, std::span<const LweCiphertext* const>(inputs.begin(), inputs.size()), ek);
}

}  // namespace arctyrex
