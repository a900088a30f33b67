#include "arctyrex/schedule.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <sstream>

namespace arctyrex {

Waves partition_waves(const Circuit& c) {
    const size_t gates = c.gates.size();
    // Wire -> defining gate, or none for inputs.
    constexpr GateIndex kNone = std::numeric_limits<GateIndex>::max();
    std::vector<GateIndex> producer(c.wire_count(), kNone);
    for (size_t g = 0; g < gates; ++g) producer[c.gates[g].id] = static_cast<GateIndex>(g);

    // Successor lists in CSR form; one edge per operand occurrence.
    std::vector<uint32_t> pending(gates, 0);
    std::vector<size_t> offsets(gates + 1, 0);
    for (const Gate& gate : c.gates) {
        for (WireId w : gate.operands) {
            if (producer[w] != kNone) ++offsets[producer[w] + 1];
        }
    }
    for (size_t g = 0; g < gates; ++g) offsets[g + 1] += offsets[g];
    std::vector<GateIndex> successors(offsets[gates]);
    std::vector<size_t> fill(offsets.begin(), offsets.end() - 1);
    for (size_t g = 0; g < gates; ++g) {
        for (WireId w : c.gates[g].operands) {
            if (producer[w] == kNone) continue;
            successors[fill[producer[w]]++] = static_cast<GateIndex>(g);
            ++pending[g];
        }
    }

    Waves out;
    out.wave_of.assign(gates, 0);
    std::vector<bool> has_predecessor(gates);
    for (size_t g = 0; g < gates; ++g) has_predecessor[g] = pending[g] != 0;

    std::deque<GateIndex> ready;
    for (size_t g = 0; g < gates; ++g) {
        if (pending[g] == 0) ready.push_back(static_cast<GateIndex>(g));
    }
    // deepest[g]: largest wave among g's predecessors popped so far.
    std::vector<uint32_t> deepest(gates, 0);
    while (!ready.empty()) {
        const GateIndex g = ready.front();
        ready.pop_front();
        const uint32_t wave = has_predecessor[g] ? deepest[g] + 1 : 0;
        out.wave_of[g] = wave;
        if (wave >= out.waves.size()) out.waves.resize(wave + 1);
        out.waves[wave].push_back(g);
        for (size_t e = offsets[g]; e < offsets[g + 1]; ++e) {
            const GateIndex s = successors[e];
            deepest[s] = std::max(deepest[s], wave);
            if (--pending[s] == 0) ready.push_back(s);
        }
    }
    return out;
}

std::map<GateKind, std::vector<GateIndex>> batch_by_opcode(std::span<const GateIndex> wave, const Circuit& c) {
    std::map<GateKind, std::vector<GateIndex>> out;
    for (GateIndex g : wave) out[c.gates.at(g).kind].push_back(g);
    return out;
}

Batch Batch::create(GateKind opcode, std::vector<GateIndex> gates, uint32_t worker, uint32_t wave,
                    const Circuit& c) {
    for (GateIndex g : gates) {
        if (g >= c.gates.size()) throw ScheduleError("batch refers to gate " + std::to_string(g) + " out of range");
        if (c.gates[g].kind != opcode) {
            throw ScheduleError("mixed-opcode batch: gate " + std::to_string(g) + " is " +
                                std::string(name(c.gates[g].kind)) + ", batch is " + std::string(name(opcode)));
        }
    }
    return Batch(opcode, std::move(gates), worker, wave);
}

std::vector<Batch> split_batches(const std::map<GateKind, std::vector<GateIndex>>& by_opcode, uint32_t workers,
                                 uint32_t wave, const Circuit& c) {
    if (workers == 0) throw ScheduleError("worker count must be at least 1");
    std::vector<Batch> out;
    for (const auto& [kind, gates] : by_opcode) {
        const size_t base = gates.size() / workers;
        const size_t extra = gates.size() % workers;
        size_t start = 0;
        for (uint32_t w = 0; w < workers; ++w) {
            const size_t len = base + (w < extra ? 1 : 0);
            if (len == 0) continue;
            out.push_back(Batch::create(kind, {gates.begin() + start, gates.begin() + start + len}, w, wave, c));
            start += len;
        }
    }
    return out;
}

std::vector<Batch> split_ignoring_opcode(std::span<const GateIndex> wave_gates, uint32_t workers, uint32_t wave,
                                         const Circuit& c) {
    if (workers == 0) throw ScheduleError("worker count must be at least 1");
    std::vector<Batch> out;
    const size_t base = wave_gates.size() / workers;
    const size_t extra = wave_gates.size() % workers;
    size_t start = 0;
    for (uint32_t w = 0; w < workers; ++w) {
        const size_t len = base + (w < extra ? 1 : 0);
        for (auto& [kind, gates] : batch_by_opcode(wave_gates.subspan(start, len), c)) {
            out.push_back(Batch::create(kind, std::move(gates), w, wave, c));
        }
        start += len;
    }
    return out;
}

size_t Schedule::gate_count() const {
    size_t n = 0;
    for (const auto& wave : waves) {
        for (const auto& b : wave) n += b.size();
    }
    return n;
}

size_t Schedule::batch_count() const {
    size_t n = 0;
    for (const auto& wave : waves) n += wave.size();
    return n;
}

Schedule build_schedule(const Circuit& c, uint32_t workers) {
    if (workers == 0) throw ScheduleError("worker count must be at least 1");
    const Waves w = partition_waves(c);
    Schedule s;
    s.worker_count = workers;
    for (size_t i = 0; i < w.waves.size(); ++i) {
        s.waves.push_back(split_batches(batch_by_opcode(w.waves[i], c), workers, static_cast<uint32_t>(i), c));
    }
    return s;
}

CostModel CostModel::standard() {
    CostModel m;
    for (GateKind k : kAllGateKinds) {
        const uint32_t bootstraps = bootstrap_count(k);
        m.units[static_cast<size_t>(k)] = bootstraps == 0 ? 1 : 1024 * bootstraps;
    }
    return m;
}

double LoadReport::worst_imbalance() const {
    double worst = 1.0;
    for (double r : imbalance) worst = std::max(worst, r);
    return worst;
}

std::vector<uint64_t> worker_loads(std::span<const Batch> batches, uint32_t workers, const CostModel& m) {
    std::vector<uint64_t> loads(workers, 0);
    for (const Batch& b : batches) {
        if (b.worker() >= workers) throw ScheduleError("batch assigned to worker " + std::to_string(b.worker()) +
                                                       " of " + std::to_string(workers));
        loads[b.worker()] += m.of(b.opcode()) * b.size();
    }
    return loads;
}

double imbalance_ratio(std::span<const uint64_t> loads) {
    if (loads.empty()) return 1.0;
    const auto [lo, hi] = std::minmax_element(loads.begin(), loads.end());
    if (*hi == 0) return 1.0;
    if (*lo == 0) return std::numeric_limits<double>::infinity();
    return static_cast<double>(*hi) / static_cast<double>(*lo);
}

LoadReport estimate_load(const Schedule& s, const CostModel& m) {
    LoadReport r;
    for (const auto& wave : s.waves) {
        r.per_wave.push_back(worker_loads(wave, s.worker_count, m));
        r.imbalance.push_back(imbalance_ratio(r.per_wave.back()));
    }
    return r;
}

std::string schedule_csv(const Schedule& s, const CostModel& m) {
    std::ostringstream out;
    out << "wave,opcode,worker,count,cost_units\n";
    for (size_t w = 0; w < s.waves.size(); ++w) {
        for (const Batch& b : s.waves[w]) {
            out << w << ',' << name(b.opcode()) << ',' << b.worker() << ',' << b.size() << ','
                << m.of(b.opcode()) * b.size() << '\n';
        }
    }
    return out.str();
}

}  // namespace arctyrex
