#pragma once

// Parallel evaluation of a Schedule over encrypted wires.
//
// The coordinator hands every batch to its worker's queue up front and only
// joins at the end. A worker starting a batch of wave w first waits until
// every batch of wave w - 1 has finished; that fence is the only
// synchronization between workers.

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "arctyrex/circuit.hpp"
#include "arctyrex/counters.hpp"
#include "arctyrex/keys.hpp"
#include "arctyrex/schedule.hpp"

namespace arctyrex {

/// One preallocated ciphertext slot per wire. Distinct slots may be written
/// concurrently; a slot is readable once its occupancy flag is set.
class WireStore {
public:
    WireStore(size_t wires, size_t dimension);

    size_t size() const { return slots_.size(); }
    bool occupied(WireId w) const;
    /// Throws RuntimeError if the slot was already written.
    void write(WireId w, const LweCiphertext& ct);
    /// Throws RuntimeError (and counts the attempt) if the slot is empty.
    const LweCiphertext& read(WireId w) const;
    /// Reads of empty slots so far; stays zero under a correct schedule.
    uint64_t unoccupied_reads() const { return unoccupied_reads_.load(); }

private:
    void check(WireId w) const;

    std::vector<LweCiphertext> slots_;
    std::unique_ptr<std::atomic<bool>[]> occupied_;
    mutable std::atomic<uint64_t> unoccupied_reads_{0};
};

/// Evaluates every gate of b in order, writing results to their slots.
void execute_batch(const Batch& b, const Circuit& c, WireStore& store, const EvaluationKey& ek);

/// Start/end of one batch, in seconds since evaluation began.
struct BatchTrace {
    uint32_t wave;
    uint32_t worker;
    GateKind opcode;
    size_t gates;
    double start;
    double end;
};

struct Metrics {
    OpCounters counters;
    uint64_t gates = 0;
    uint32_t workers = 0;
    double wall_seconds = 0;
    std::vector<double> wave_seconds;         // first batch start to last batch end
    std::vector<double> worker_busy_seconds;  // time spent inside batches
    std::vector<BatchTrace> trace;
    uint64_t unoccupied_reads = 0;

    double gates_per_second() const { return wall_seconds > 0 ? static_cast<double>(gates) / wall_seconds : 0; }
    /// JSON report; see docs/metrics.md for the fields.
    std::string to_json() const;
};

using NamedCiphertexts = std::map<std::string, std::vector<LweCiphertext>>;

struct EvalResult {
    NamedCiphertexts outputs;
    Metrics metrics;
};

/// Runs schedule s of circuit c with s.worker_count threads. Throws
/// DimensionError for missing or mis-sized inputs, ParamError when the key
/// does not match the inputs, and rethrows the first error raised by a batch.
EvalResult evaluate(const Circuit& c, const Schedule& s, const NamedCiphertexts& inputs,
                    const EvaluationKey& ek);

}  // namespace arctyrex
