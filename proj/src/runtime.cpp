#include "arctyrex/runtime.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <exception>
#include <mutex>
#include <thread>

#include "json.hpp"

#include "arctyrex/gates.hpp"

namespace arctyrex {

WireStore::WireStore(size_t wires, size_t dimension)
    : slots_(wires, LweCiphertext(dimension)), occupied_(new std::atomic<bool>[wires]) {
    for (size_t i = 0; i < wires; ++i) occupied_[i].store(false, std::memory_order_relaxed);
}

void WireStore::check(WireId w) const {
    if (w >= slots_.size()) {
        throw RuntimeError("wire " + std::to_string(w) + " outside store of " + std::to_string(slots_.size()));
    }
}

bool WireStore::occupied(WireId w) const {
    check(w);
    return occupied_[w].load(std::memory_order_acquire);
}

void WireStore::write(WireId w, const LweCiphertext& ct) {
    check(w);
    if (occupied_[w].load(std::memory_order_relaxed)) {
        throw RuntimeError("wire " + std::to_string(w) + " written twice");
    }
    LweCiphertext& slot = slots_[w];
    slot.a.assign(ct.a.begin(), ct.a.end());
    slot.b = ct.b;
    occupied_[w].store(true, std::memory_order_release);
}

const LweCiphertext& WireStore::read(WireId w) const {
    check(w);
    if (!occupied_[w].load(std::memory_order_acquire)) {
        unoccupied_reads_.fetch_add(1);
        throw RuntimeError("read of wire " + std::to_string(w) + " before it was written");
    }
    return slots_[w];
}

void execute_batch(const Batch& b, const Circuit& c, WireStore& store, const EvaluationKey& ek) {
    std::vector<const LweCiphertext*> operands;
    for (GateIndex g : b.gates()) {
        const Gate& gate = c.gates[g];
        operands.clear();
        for (WireId w : gate.operands) operands.push_back(&store.read(w));
        store.write(gate.id, eval_gate(gate.kind, operands, ek));
    }
}

std::string Metrics::to_json() const {
    nlohmann::json j;
    j["workers"] = workers;
    j["gates"] = gates;
    j["wall_seconds"] = wall_seconds;
    j["gates_per_second"] = gates_per_second();
    j["bootstrap_count"] = counters.bootstraps;
    j["keyswitch_count"] = counters.keyswitches;
    j["external_product_count"] = counters.external_products;
    j["ntt_forward_count"] = counters.ntt_forward;
    j["ntt_inverse_count"] = counters.ntt_inverse;
    j["unoccupied_reads"] = unoccupied_reads;
    j["per_wave_seconds"] = wave_seconds;
    j["per_worker_busy_seconds"] = worker_busy_seconds;
    auto& batches = j["batches"] = nlohmann::json::array();
    for (const BatchTrace& t : trace) {
        batches.push_back({{"wave", t.wave},
                           {"worker", t.worker},
                           {"opcode", std::string(name(t.opcode))},
                           {"gates", t.gates},
                           {"start", t.start},
                           {"end", t.end}});
    }
    return j.dump(2);
}

namespace {

using Clock = std::chrono::steady_clock;

class TaskQueue {
public:
    void push(const Batch* b) {
        {
            std::lock_guard lock(mu_);
            items_.push_back(b);
        }
        cv_.notify_one();
    }

    void close() {
        {
            std::lock_guard lock(mu_);
            closed_ = true;
        }
        cv_.notify_one();
    }

    /// Next batch, or nullptr once closed and drained.
    const Batch* pop() {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [&] { return closed_ || !items_.empty(); });
        if (items_.empty()) return nullptr;
        const Batch* b = items_.front();
        items_.pop_front();
        return b;
    }

private:
    std::mutex mu_;
    std::condition_variable cv_;
    std::deque<const Batch*> items_;
    bool closed_ = false;
};

struct WorkerResult {
    OpCounters counters;
    double busy = 0;
    std::vector<BatchTrace> trace;
};

void check_inputs(const Circuit& c, const NamedCiphertexts& inputs, const EvaluationKey& ek) {
    for (const WireGroup& grp : c.inputs) {
        auto it = inputs.find(grp.name);
        if (it == inputs.end()) throw DimensionError("missing input '" + grp.name + "'");
        if (it->second.size() != grp.width()) {
            throw DimensionError("input '" + grp.name + "' has " + std::to_string(it->second.size()) +
                                 " ciphertexts, expected " + std::to_string(grp.width()));
        }
        for (const LweCiphertext& ct : it->second) {
            if (ct.dimension() != ek.params.n) {
                throw ParamError("input '" + grp.name + "' ciphertext dimension " + std::to_string(ct.dimension()) +
                                 " does not match key dimension " + std::to_string(ek.params.n));
            }
        }
    }
}

}  // namespace

EvalResult evaluate(const Circuit& c, const Schedule& s, const NamedCiphertexts& inputs, const EvaluationKey& ek) {
    check_inputs(c, inputs, ek);
    const uint32_t workers = s.worker_count;
    if (workers == 0) throw ScheduleError("worker count must be at least 1");
    for (size_t w = 0; w < s.waves.size(); ++w) {
        for (const Batch& b : s.waves[w]) {
            if (b.worker() >= workers) throw ScheduleError("batch assigned to a worker outside the pool");
            if (b.wave() != w) throw ScheduleError("batch filed under the wrong wave");
        }
    }

    WireStore store(c.wire_count(), ek.params.n);
    for (const WireGroup& grp : c.inputs) {
        const auto& cts = inputs.at(grp.name);
        for (size_t i = 0; i < grp.width(); ++i) store.write(grp.wires[i], cts[i]);
    }

    const size_t wave_count = s.waves.size();
    std::unique_ptr<std::atomic<uint32_t>[]> remaining(new std::atomic<uint32_t>[wave_count]);
    for (size_t w = 0; w < wave_count; ++w) remaining[w].store(static_cast<uint32_t>(s.waves[w].size()));

    std::atomic<bool> failed{false};
    std::mutex error_mu;
    std::exception_ptr first_error;

    std::vector<TaskQueue> queues(workers);
    std::vector<WorkerResult> results(workers);
    const Clock::time_point t0 = Clock::now();
    auto since_start = [&](Clock::time_point t) { return std::chrono::duration<double>(t - t0).count(); };

    auto run_worker = [&](uint32_t id) {
        WorkerResult& mine = results[id];
        while (const Batch* b = queues[id].pop()) {
            const uint32_t wave = b->wave();
            if (wave > 0) {
                std::atomic<uint32_t>& before = remaining[wave - 1];
                for (uint32_t left = before.load(); left != 0; left = before.load()) before.wait(left);
            }
            if (!failed.load()) {
                const OpCounters start_counts = thread_counters();
                const Clock::time_point start = Clock::now();
                try {
                    execute_batch(*b, c, store, ek);
                } catch (...) {
                    std::lock_guard lock(error_mu);
                    if (!first_error) first_error = std::current_exception();
                    failed.store(true);
                }
                const Clock::time_point end = Clock::now();
                mine.counters += thread_counters() - start_counts;
                mine.busy += std::chrono::duration<double>(end - start).count();
                mine.trace.push_back({wave, id, b->opcode(), b->size(), since_start(start), since_start(end)});
            }
            // Decrement even after a failure so no worker waits forever.
            if (remaining[wave].fetch_sub(1) == 1) remaining[wave].notify_all();
        }
    };

    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (uint32_t id = 0; id < workers; ++id) threads.emplace_back(run_worker, id);
    for (const auto& wave : s.waves) {
        for (const Batch& b : wave) queues[b.worker()].push(&b);
    }
    for (auto& q : queues) q.close();
    for (auto& t : threads) t.join();
    const double wall = since_start(Clock::now());

    if (first_error) std::rethrow_exception(first_error);

    EvalResult result;
    Metrics& m = result.metrics;
    m.workers = workers;
    m.gates = s.gate_count();
    m.wall_seconds = wall;
    m.wave_seconds.assign(wave_count, 0.0);
    std::vector<double> wave_start(wave_count, wall), wave_end(wave_count, 0.0);
    for (const WorkerResult& r : results) {
        m.counters += r.counters;
        m.worker_busy_seconds.push_back(r.busy);
        for (const BatchTrace& t : r.trace) {
            wave_start[t.wave] = std::min(wave_start[t.wave], t.start);
            wave_end[t.wave] = std::max(wave_end[t.wave], t.end);
            m.trace.push_back(t);
        }
    }
    for (size_t w = 0; w < wave_count; ++w) m.wave_seconds[w] = std::max(0.0, wave_end[w] - wave_start[w]);
    std::sort(m.trace.begin(), m.trace.end(),
              [](const BatchTrace& a, const BatchTrace& b) { return a.start < b.start; });
    m.unoccupied_reads = store.unoccupied_reads();

    for (const WireGroup& grp : c.outputs) {
        std::vector<LweCiphertext>& out = result.outputs[grp.name];
        for (WireId w : grp.wires) out.push_back(store.read(w));
    }
    return result;
}

}  // namespace arctyrex
