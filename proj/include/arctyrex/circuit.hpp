#pragma once

// Gate-level circuits in single-static-assignment form.
//
// Text format, one declaration per line ('#' starts a comment):
//
//   input a 8            eight wires, numbered consecutively from 0 across
//                        all input declarations in order
//   gate 16 XOR 0,8      wire 16 := XOR(wire 0, wire 8)
//   gate 17 CONST0       arity-0 gates take no operand field
//   output sum 16,17     named group of wires, least significant first
//
// Inputs come before the first gate. Gates appear in a valid sequential
// execution order and each wire is defined exactly once.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "arctyrex/error.hpp"
#include "arctyrex/gate_kind.hpp"

namespace arctyrex {

using WireId = uint32_t;

struct WireGroup {
    std::string name;
    std::vector<WireId> wires;  // least significant bit first

    size_t width() const { return wires.size(); }
    friend bool operator==(const WireGroup&, const WireGroup&) = default;
};

struct Gate {
    WireId id;  // the wire this gate defines
    GateKind kind;
    std::vector<WireId> operands;

    friend bool operator==(const Gate&, const Gate&) = default;
};

struct Circuit {
    std::vector<WireGroup> inputs;
    std::vector<WireGroup> outputs;
    std::vector<Gate> gates;

    /// One past the largest wire id in use; sizes per-wire tables.
    size_t wire_count() const;
    size_t input_bit_count() const;
    const WireGroup* find_input(std::string_view name) const;
    const WireGroup* find_output(std::string_view name) const;

    friend bool operator==(const Circuit&, const Circuit&) = default;
};

/// A problem found in a circuit. line is 1-based, or 0 when the circuit did
/// not come from text.
struct Diagnostic {
    size_t line = 0;
    std::string message;

    std::string to_string() const;
};

class ParseError : public Error {
public:
    explicit ParseError(std::vector<Diagnostic> diagnostics);
    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

/// Throws ParseError carrying every diagnostic found.
Circuit parse_circuit(std::string_view text);

/// Canonical text: inputs, then gates in execution order, then outputs.
std::string serialize_circuit(const Circuit& c);

/// Empty when c is well formed (SSA, arities, definition before use, outputs
/// defined, unique group names). Disconnected gates are allowed.
std::vector<Diagnostic> validate(const Circuit& c);

/// Wave index of every gate, by position in c.gates: 0 when no operand is
/// produced by a gate, else 1 + the largest operand wave. Circuit inputs are
/// not gates and contribute nothing.
std::vector<uint32_t> gate_levels(const Circuit& c);

struct TopologyReport {
    std::vector<size_t> level_widths;  // gates per level, all kinds counted
    size_t critical_path = 0;          // number of levels
    std::map<GateKind, size_t> gate_histogram;
    size_t total_gates = 0;
    size_t bootstrapped_gates = 0;  // two-input gates count 1, MUX counts 2
};

TopologyReport topology_stats(const Circuit& c);

// Fixture generators.

/// Ripple-carry adder: inputs a, b (width bits), output sum (width + 1 bits).
/// One CONST0 carry-in followed by width full-adder cells of
/// 2 XOR, 2 AND and 1 OR. Throws DimensionError for width 0.
Circuit gen_adder(size_t width);
/// Binary MUX tree selecting data[sel]: inputs sel (depth bits) and
/// data (2^depth bits), output out; 2^depth - 1 MUX gates.
Circuit gen_mux_tree(size_t depth);
/// length NOT gates in series from input x to output y.
Circuit gen_not_chain(size_t length);
/// `gates` independent gates of one kind, all in wave 0. Operands come from
/// inputs a, b, c (one bit per gate each, as many groups as the arity);
/// output out has one bit per gate.
Circuit gen_flat(size_t gates, GateKind kind);

// Plaintext evaluation.

using Bits = std::vector<uint8_t>;
using NamedBits = std::map<std::string, Bits>;

/// Evaluates c over plain bits. Throws DimensionError when an input group
/// is missing or has the wrong width.
NamedBits simulate_plain(const Circuit& c, const NamedBits& inputs);

/// Little-endian two's complement bits of value. Accepts
/// -2^(width-1) <= value < 2^width; throws DimensionError otherwise.
Bits encode_integer(int64_t value, size_t width);
/// Unsigned little-endian reading of up to 64 bits.
uint64_t decode_unsigned(const Bits& bits);

}  // namespace arctyrex
