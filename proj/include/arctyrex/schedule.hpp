#pragma once

// Wave partitioning and per-opcode work splitting.
//
// Gates are referred to by their position in Circuit::gates.

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "arctyrex/circuit.hpp"
#include "arctyrex/gate_kind.hpp"

namespace arctyrex {

using GateIndex = uint32_t;

struct Waves {
    std::vector<std::vector<GateIndex>> waves;
    std::vector<uint32_t> wave_of;  // by gate index
};

/// FIFO topological sort. Gates without gate predecessors are queued in
/// circuit order; a popped gate gets wave 0 if it has no predecessors, else
/// one more than its deepest predecessor. Linear in gates plus operand edges.
Waves partition_waves(const Circuit& c);

/// Groups a wave by opcode, keeping within-wave order.
std::map<GateKind, std::vector<GateIndex>> batch_by_opcode(std::span<const GateIndex> wave,
                                                           const Circuit& c);

/// Homogeneous slice of one wave assigned to one worker.
class Batch {
public:
    /// Throws ScheduleError when some gate's opcode is not `opcode`.
    static Batch create(GateKind opcode, std::vector<GateIndex> gates, uint32_t worker, uint32_t wave,
                        const Circuit& c);

    GateKind opcode() const { return opcode_; }
    const std::vector<GateIndex>& gates() const { return gates_; }
    uint32_t worker() const { return worker_; }
    uint32_t wave() const { return wave_; }
    size_t size() const { return gates_.size(); }

private:
    Batch(GateKind opcode, std::vector<GateIndex> gates, uint32_t worker, uint32_t wave)
        : opcode_(opcode), gates_(std::move(gates)), worker_(worker), wave_(wave) {}

    GateKind opcode_;
    std::vector<GateIndex> gates_;
    uint32_t worker_;
    uint32_t wave_;
};

/// Splits each opcode's list contiguously into `workers` parts whose sizes
/// differ by at most one, larger parts first. Empty parts produce no batch.
/// Throws ScheduleError for workers == 0.
std::vector<Batch> split_batches(const std::map<GateKind, std::vector<GateIndex>>& by_opcode,
                                 uint32_t workers, uint32_t wave, const Circuit& c);

/// Baseline for comparison: the wave is cut into `workers` contiguous runs of
/// near-equal length regardless of opcode, then each run is grouped by opcode.
std::vector<Batch> split_ignoring_opcode(std::span<const GateIndex> wave_gates, uint32_t workers,
                                         uint32_t wave, const Circuit& c);

struct Schedule {
    uint32_t worker_count = 1;
    std::vector<std::vector<Batch>> waves;

    size_t gate_count() const;
    size_t batch_count() const;
};

/// partition_waves, batch_by_opcode and split_batches in sequence.
Schedule build_schedule(const Circuit& c, uint32_t workers);

/// Abstract cost per gate kind.
struct CostModel {
    std::array<uint64_t, kGateKindCount> units{};

    /// Linear gates 1, two-input bootstrapped gates 1024, MUX 2048.
    static CostModel standard();
    uint64_t of(GateKind k) const { return units[static_cast<size_t>(k)]; }
};

struct LoadReport {
    std::vector<std::vector<uint64_t>> per_wave;  // [wave][worker] cost units
    std::vector<double> imbalance;                // max / min per wave; inf if some worker idles

    /// Largest per-wave ratio.
    double worst_imbalance() const;
};

LoadReport estimate_load(const Schedule& s, const CostModel& m);

/// Per-worker cost units of a list of batches.
std::vector<uint64_t> worker_loads(std::span<const Batch> batches, uint32_t workers, const CostModel& m);

/// max / min, or +infinity when min is zero and max is not; 1 for all-zero.
double imbalance_ratio(std::span<const uint64_t> loads);

/// CSV with header `wave,opcode,worker,count,cost_units`, one row per batch.
std::string schedule_csv(const Schedule& s, const CostModel& m);

}  // namespace arctyrex
