#include "arctyrex/circuit.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <unordered_map>

namespace arctyrex {

namespace {

// Wire ids beyond this are rejected so per-wire tables stay allocatable.
constexpr WireId kMaxWireId = WireId{1} << 28;

std::string join_messages(const std::vector<Diagnostic>& ds) {
    std::string out;
    for (size_t i = 0; i < ds.size() && i < 20; ++i) {
        if (i) out += "\n";
        out += ds[i].to_string();
    }
    if (ds.size() > 20) out += "\n... " + std::to_string(ds.size() - 20) + " more";
    return out;
}

// Source lines of each declaration, when the circuit came from text.
struct SourceLines {
    std::vector<size_t> inputs;
    std::vector<size_t> gates;
    std::vector<size_t> outputs;
};

size_t line_of(const std::vector<size_t>* lines, size_t i) {
    return lines && i < lines->size() ? (*lines)[i] : 0;
}

std::vector<Diagnostic> check(const Circuit& c, const SourceLines* src) {
    std::vector<Diagnostic> out;
    auto report = [&](size_t line, std::string msg) { out.push_back({line, std::move(msg)}); };

    // Where each wire is first defined: inputs first, then gates in order.
    // Position p < input_bits means an input bit, else gate p - input_bits.
    std::unordered_map<WireId, size_t> first_def;
    std::unordered_map<std::string, size_t> names;
    WireId expected = 0;
    size_t position = 0;
    for (size_t g = 0; g < c.inputs.size(); ++g) {
        const WireGroup& in = c.inputs[g];
        const size_t line = line_of(src ? &src->inputs : nullptr, g);
        if (!names.emplace(in.name, g).second) report(line, "duplicate input name '" + in.name + "'");
        if (in.wires.empty()) report(line, "input '" + in.name + "' has width 0");
        for (WireId w : in.wires) {
            if (w != expected) {
                report(line, "input '" + in.name + "': wires must be numbered consecutively from 0");
                expected = w;
            }
            ++expected;
            if (!first_def.emplace(w, position++).second) {
                report(line, "wire " + std::to_string(w) + " defined twice");
            }
        }
    }
    const size_t input_bits = position;

    for (size_t g = 0; g < c.gates.size(); ++g) {
        const Gate& gate = c.gates[g];
        const size_t line = line_of(src ? &src->gates : nullptr, g);
        if (gate.id >= kMaxWireId) report(line, "wire id " + std::to_string(gate.id) + " too large");
        auto [it, fresh] = first_def.emplace(gate.id, input_bits + g);
        if (!fresh) {
            const size_t prev = it->second;
            std::string where;
            if (prev < input_bits) {
                where = "as a circuit input";
            } else if (const size_t pl = line_of(src ? &src->gates : nullptr, prev - input_bits); pl) {
                where = "at line " + std::to_string(pl);
            } else {
                where = "by gate " + std::to_string(prev - input_bits);
            }
            report(line, "duplicate definition of wire " + std::to_string(gate.id) + " (first defined " +
                             where + ")");
        }
    }

    for (size_t g = 0; g < c.gates.size(); ++g) {
        const Gate& gate = c.gates[g];
        const size_t line = line_of(src ? &src->gates : nullptr, g);
        if (gate.operands.size() != arity(gate.kind)) {
            report(line, std::string(name(gate.kind)) + " takes " + std::to_string(arity(gate.kind)) +
                             " operands, got " + std::to_string(gate.operands.size()));
        }
        for (WireId w : gate.operands) {
            auto it = first_def.find(w);
            if (it == first_def.end()) {
                report(line, "operand wire " + std::to_string(w) + " is never defined");
            } else if (it->second >= input_bits + g) {
                report(line, "use before definition of wire " + std::to_string(w));
            }
        }
    }

    names.clear();
    for (size_t o = 0; o < c.outputs.size(); ++o) {
        const WireGroup& grp = c.outputs[o];
        const size_t line = line_of(src ? &src->outputs : nullptr, o);
        if (!names.emplace(grp.name, o).second) report(line, "duplicate output name '" + grp.name + "'");
        if (grp.wires.empty()) report(line, "output '" + grp.name + "' has no wires");
        for (WireId w : grp.wires) {
            if (!first_def.contains(w)) {
                report(line, "output '" + grp.name + "' wire " + std::to_string(w) + " is never written");
            }
        }
    }
    return out;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    size_t start = 0;
    while (true) {
        const size_t pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

std::vector<std::string_view> tokens(std::string_view line) {
    std::vector<std::string_view> out;
    size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        const size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

bool parse_number(std::string_view s, uint64_t& value) {
    if (s.empty()) return false;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_wire_list(std::string_view s, std::vector<WireId>& wires) {
    for (std::string_view part : split(s, ',')) {
        uint64_t v = 0;
        if (!parse_number(part, v) || v >= kMaxWireId) return false;
        wires.push_back(static_cast<WireId>(v));
    }
    return true;
}

// Generators number wires consecutively: inputs first, then one per gate.
struct Builder {
    Circuit c;
    WireId next = 0;

    WireGroup input(std::string name, size_t width) {
        WireGroup g{std::move(name), {}};
        for (size_t i = 0; i < width; ++i) g.wires.push_back(next++);
        c.inputs.push_back(g);
        return g;
    }

    WireId gate(GateKind kind, std::vector<WireId> operands) {
        c.gates.push_back({next, kind, std::move(operands)});
        return next++;
    }
};

}  // namespace

size_t Circuit::wire_count() const {
    WireId top = 0;
    bool any = false;
    for (const auto& g : inputs) {
        for (WireId w : g.wires) {
            top = std::max(top, w);
            any = true;
        }
    }
    for (const auto& g : gates) {
        top = std::max(top, g.id);
        any = true;
    }
    return any ? size_t{top} + 1 : 0;
}

size_t Circuit::input_bit_count() const {
    size_t n = 0;
    for (const auto& g : inputs) n += g.width();
    return n;
}

const WireGroup* Circuit::find_input(std::string_view n) const {
    for (const auto& g : inputs) {
        if (g.name == n) return &g;
    }
    return nullptr;
}

const WireGroup* Circuit::find_output(std::string_view n) const {
    for (const auto& g : outputs) {
        if (g.name == n) return &g;
    }
    return nullptr;
}

std::string Diagnostic::to_string() const {
    return line ? "line " + std::to_string(line) + ": " + message : message;
}

ParseError::ParseError(std::vector<Diagnostic> diagnostics)
    : Error(join_messages(diagnostics)), diagnostics_(std::move(diagnostics)) {}

Circuit parse_circuit(std::string_view text) {
    Circuit c;
    SourceLines src;
    std::vector<Diagnostic> diags;
    size_t line_no = 0;
    size_t next_input_wire = 0;

    for (std::string_view line : split(text, '\n')) {
        ++line_no;
        if (const size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const auto tok = tokens(line);
        if (tok.empty()) continue;
        auto bad = [&](std::string msg) { diags.push_back({line_no, std::move(msg)}); };

        if (tok[0] == "input") {
            uint64_t width = 0;
            if (tok.size() != 3 || !parse_number(tok[2], width) || width >= kMaxWireId) {
                bad("syntax error: expected 'input <name> <width>'");
                continue;
            }
            if (!c.gates.empty()) {
                bad("input '" + std::string(tok[1]) + "' declared after the first gate");
                continue;
            }
            WireGroup g{std::string(tok[1]), {}};
            for (uint64_t i = 0; i < width; ++i) g.wires.push_back(static_cast<WireId>(next_input_wire++));
            c.inputs.push_back(std::move(g));
            src.inputs.push_back(line_no);
        } else if (tok[0] == "output") {
            WireGroup g{tok.size() > 1 ? std::string(tok[1]) : std::string(), {}};
            if (tok.size() != 3 || !parse_wire_list(tok[2], g.wires)) {
                bad("syntax error: expected 'output <name> <w0,w1,...>'");
                continue;
            }
            c.outputs.push_back(std::move(g));
            src.outputs.push_back(line_no);
        } else if (tok[0] == "gate") {
            uint64_t id = 0;
            if (tok.size() < 3 || tok.size() > 4 || !parse_number(tok[1], id) || id >= kMaxWireId) {
                bad("syntax error: expected 'gate <id> <OPCODE> [<arg,...>]'");
                continue;
            }
            const auto kind = gate_kind_from_name(tok[2]);
            if (!kind) {
                bad("unknown opcode '" + std::string(tok[2]) + "'");
                continue;
            }
            Gate gate{static_cast<WireId>(id), *kind, {}};
            if (tok.size() == 4 && !parse_wire_list(tok[3], gate.operands)) {
                bad("syntax error: bad operand list '" + std::string(tok[3]) + "'");
                continue;
            }
            c.gates.push_back(std::move(gate));
            src.gates.push_back(line_no);
        } else {
            bad("syntax error: unknown declaration '" + std::string(tok[0]) + "'");
        }
    }

    auto semantic = check(c, &src);
    diags.insert(diags.end(), semantic.begin(), semantic.end());
    if (!diags.empty()) {
        std::stable_sort(diags.begin(), diags.end(),
                         [](const Diagnostic& a, const Diagnostic& b) { return a.line < b.line; });
        throw ParseError(std::move(diags));
    }
    return c;
}

std::string serialize_circuit(const Circuit& c) {
    std::ostringstream out;
    for (const auto& g : c.inputs) out << "input " << g.name << ' ' << g.width() << '\n';
    for (const auto& g : c.gates) {
        out << "gate " << g.id << ' ' << name(g.kind);
        for (size_t i = 0; i < g.operands.size(); ++i) out << (i ? ',' : ' ') << g.operands[i];
        out << '\n';
    }
    for (const auto& g : c.outputs) {
        out << "output " << g.name;
        for (size_t i = 0; i < g.wires.size(); ++i) out << (i ? ',' : ' ') << g.wires[i];
        out << '\n';
    }
    return out.str();
}

std::vector<Diagnostic> validate(const Circuit& c) { return check(c, nullptr); }

std::vector<uint32_t> gate_levels(const Circuit& c) {
    // -1 marks circuit inputs and unused ids.
    std::vector<int64_t> wire_level(c.wire_count(), -1);
    std::vector<uint32_t> levels(c.gates.size());
    for (size_t g = 0; g < c.gates.size(); ++g) {
        int64_t deepest = -1;
        for (WireId w : c.gates[g].operands) deepest = std::max(deepest, wire_level[w]);
        levels[g] = static_cast<uint32_t>(deepest + 1);
        wire_level[c.gates[g].id] = deepest + 1;
    }
    return levels;
}

TopologyReport topology_stats(const Circuit& c) {
    TopologyReport r;
    for (uint32_t level : gate_levels(c)) {
        if (level >= r.level_widths.size()) r.level_widths.resize(level + 1, 0);
        ++r.level_widths[level];
    }
    for (const auto& g : c.gates) {
        ++r.gate_histogram[g.kind];
        r.bootstrapped_gates += bootstrap_count(g.kind);
    }
    r.critical_path = r.level_widths.size();
    r.total_gates = c.gates.size();
    return r;
}

Circuit gen_adder(size_t width) {
    if (width == 0) throw DimensionError("adder width must be at least 1");
    Builder builder;
    Circuit& c = builder.c;
    const WireGroup a = builder.input("a", width);
    const WireGroup b = builder.input("b", width);
    WireGroup sum{"sum", {}};
    WireId carry = builder.gate(GateKind::Const0, {});
    for (size_t i = 0; i < width; ++i) {
        const WireId half = builder.gate(GateKind::Xor, {a.wires[i], b.wires[i]});
        sum.wires.push_back(builder.gate(GateKind::Xor, {half, carry}));
        const WireId both = builder.gate(GateKind::And, {a.wires[i], b.wires[i]});
        const WireId propagated = builder.gate(GateKind::And, {half, carry});
        carry = builder.gate(GateKind::Or, {both, propagated});
    }
    sum.wires.push_back(carry);
    c.outputs.push_back(std::move(sum));
    return c;
}

Circuit gen_mux_tree(size_t depth) {
    if (depth == 0 || depth > 20) throw DimensionError("mux tree depth must be in [1, 20]");
    Builder builder;
    Circuit& c = builder.c;
    const WireGroup sel = builder.input("sel", depth);
    const WireGroup data = builder.input("data", size_t{1} << depth);
    std::vector<WireId> layer = data.wires;
    for (size_t d = 0; d < depth; ++d) {
        std::vector<WireId> next;
        for (size_t k = 0; k + 1 < layer.size(); k += 2) {
            // sel bit d set picks the odd (higher-index) entry.
            next.push_back(builder.gate(GateKind::Mux, {sel.wires[d], layer[k + 1], layer[k]}));
        }
        layer = std::move(next);
    }
    c.outputs.push_back({"out", layer});
    return c;
}

Circuit gen_not_chain(size_t length) {
    if (length == 0) throw DimensionError("NOT chain length must be at least 1");
    Builder builder;
    Circuit& c = builder.c;
    WireId w = builder.input("x", 1).wires[0];
    for (size_t i = 0; i < length; ++i) w = builder.gate(GateKind::Not, {w});
    c.outputs.push_back({"y", {w}});
    return c;
}

Circuit gen_flat(size_t gates, GateKind kind) {
    if (gates == 0) throw DimensionError("flat circuit needs at least one gate");
    Builder builder;
    Circuit& c = builder.c;
    static constexpr const char* kNames[] = {"a", "b", "c"};
    std::vector<WireGroup> ins;
    for (size_t k = 0; k < arity(kind); ++k) ins.push_back(builder.input(kNames[k], gates));
    WireGroup out{"out", {}};
    for (size_t g = 0; g < gates; ++g) {
        std::vector<WireId> ops;
        for (const auto& in : ins) ops.push_back(in.wires[g]);
        out.wires.push_back(builder.gate(kind, std::move(ops)));
    }
    c.outputs.push_back(std::move(out));
    return c;
}

NamedBits simulate_plain(const Circuit& c, const NamedBits& inputs) {
    std::vector<uint8_t> value(c.wire_count(), 0);
    for (const auto& grp : c.inputs) {
        auto it = inputs.find(grp.name);
        if (it == inputs.end()) throw DimensionError("missing input '" + grp.name + "'");
        if (it->second.size() != grp.width()) {
            throw DimensionError("input '" + grp.name + "' has " + std::to_string(it->second.size()) +
                                 " bits, expected " + std::to_string(grp.width()));
        }
        for (size_t i = 0; i < grp.width(); ++i) value[grp.wires[i]] = it->second[i] ? 1 : 0;
    }
    for (const auto& g : c.gates) {
        bool x = false, y = false, z = false;
        if (g.operands.size() > 0) x = value[g.operands[0]];
        if (g.operands.size() > 1) y = value[g.operands[1]];
        if (g.operands.size() > 2) z = value[g.operands[2]];
        value[g.id] = evaluate_plain(g.kind, x, y, z) ? 1 : 0;
    }
    NamedBits out;
    for (const auto& grp : c.outputs) {
        Bits bits;
        for (WireId w : grp.wires) bits.push_back(value[w]);
        out[grp.name] = std::move(bits);
    }
    return out;
}

Bits encode_integer(int64_t value, size_t width) {
    if (width == 0 || width > 64) throw DimensionError("integer width must be in [1, 64]");
    const bool fits = width == 64 ||
                      (value >= -(int64_t{1} << (width - 1)) && value < (int64_t{1} << width));
    if (!fits) {
        throw DimensionError("value " + std::to_string(value) + " does not fit in " + std::to_string(width) +
                             " bits");
    }
    Bits bits(width);
    const auto u = static_cast<uint64_t>(value);
    for (size_t i = 0; i < width; ++i) bits[i] = (u >> i) & 1;
    return bits;
}

uint64_t decode_unsigned(const Bits& bits) {
    if (bits.size() > 64) throw DimensionError("cannot decode more than 64 bits as an integer");
    uint64_t v = 0;
    for (size_t i = 0; i < bits.size(); ++i) v |= uint64_t{bits[i] != 0} << i;
    return v;
}

}  // namespace arctyrex
