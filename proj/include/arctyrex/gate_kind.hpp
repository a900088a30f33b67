#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace arctyrex {

enum class GateKind : uint8_t {
    And,
    Or,
    Nand,
    Nor,
    Xor,
    Xnor,
    Not,
    Mux,
    Const0,
    Const1,
    Copy,
};

inline constexpr size_t kGateKindCount = 11;

inline constexpr std::array<GateKind, kGateKindCount> kAllGateKinds = {
    GateKind::And,  GateKind::Or,  GateKind::Nand,   GateKind::Nor,    GateKind::Xor, GateKind::Xnor,
    GateKind::Not,  GateKind::Mux, GateKind::Const0, GateKind::Const1, GateKind::Copy,
};

constexpr size_t arity(GateKind k) {
    switch (k) {
        case GateKind::Not:
        case GateKind::Copy:
            return 1;
        case GateKind::Mux:
            return 3;
        case GateKind::Const0:
        case GateKind::Const1:
            return 0;
        default:
            return 2;
    }
}

/// Number of gate bootstraps one evaluation of k performs.
constexpr uint32_t bootstrap_count(GateKind k) {
    switch (k) {
        case GateKind::Not:
        case GateKind::Copy:
        case GateKind::Const0:
        case GateKind::Const1:
            return 0;
        case GateKind::Mux:
            return 2;
        default:
            return 1;
    }
}

constexpr std::string_view name(GateKind k) {
    constexpr std::array<std::string_view, kGateKindCount> names = {
        "AND", "OR", "NAND", "NOR", "XOR", "XNOR", "NOT", "MUX", "CONST0", "CONST1", "COPY",
    };
    return names[static_cast<size_t>(k)];
}

constexpr std::optional<GateKind> gate_kind_from_name(std::string_view s) {
    for (GateKind k : kAllGateKinds) {
        if (name(k) == s) return k;
    }
    return std::nullopt;
}

/// Plaintext semantics; MUX(sel, a, b) = sel ? a : b.
constexpr bool evaluate_plain(GateKind k, bool x, bool y, bool z) {
    switch (k) {
        case GateKind::And: return x && y;
        case GateKind::Or: return x || y;
        case GateKind::Nand: return !(x && y);
        case GateKind::Nor: return !(x || y);
        case GateKind::Xor: return x != y;
        case GateKind::Xnor: return x == y;
        case GateKind::Not: return !x;
        case GateKind::Mux: return x ? y : z;
        case GateKind::Const0: return false;
        case GateKind::Const1: return true;
        case GateKind::Copy: return x;
    }
    return false;
}

}  // namespace arctyrex
