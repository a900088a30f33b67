// Acceptance runner. Usage: arctyrex_acceptance [criterion...]
// Prints one line per criterion: "criterion N: PASS|FAIL|WARN <detail>".
// Exit status is non-zero only when some criterion FAILs.
//
// Environment knobs:
//   ARCTYREX_C1_TRIALS     trials per key set for the truth tables (default 20)
//   ARCTYREX_C8_VECTORS    input vectors per fixture end to end (default 100)
//   ARCTYREX_C9_GATES      width of the scaling sheet (default 10000)
//   ARCTYREX_FULL_ACCEPTANCE=1  run the 25,000-gate transform count at N = 1024

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "arctyrex/bootstrap.hpp"
#include "arctyrex/gates.hpp"
#include "arctyrex/ntt.hpp"
#include "arctyrex/runtime.hpp"
#include "arctyrex/schedule.hpp"
#include "../support/oracles.hpp"

using namespace arctyrex;

namespace {

enum class Verdict { Pass, Fail, Warn };

struct Outcome {
    Verdict verdict;
    std::string detail;
};

Outcome pass(std::string d) { return {Verdict::Pass, std::move(d)}; }
Outcome fail(std::string d) { return {Verdict::Fail, std::move(d)}; }

size_t env_size(const char* name, size_t fallback) {
    const char* v = std::getenv(name);
    if (!v || !*v) return fallback;
    return static_cast<size_t>(std::strtoull(v, nullptr, 10));
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename... Parts>
std::string cat(const Parts&... parts) {
    std::ostringstream s;
    (s << ... << parts);
    return s.str();
}

uint32_t worker_default() { return std::max(1u, std::thread::hardware_concurrency()); }

NamedCiphertexts encrypt_inputs(const Circuit& c, const NamedBits& bits, const SecretKey& sk, Rng& rng) {
    NamedCiphertexts out;
    for (const auto& grp : c.inputs) {
        for (uint8_t b : bits.at(grp.name)) out[grp.name].push_back(encrypt_bit(sk, b, rng));
    }
    return out;
}

NamedBits decrypt_outputs(const NamedCiphertexts& cts, const SecretKey& sk) {
    NamedBits out;
    for (const auto& [name, group] : cts) {
        for (const auto& ct : group) out[name].push_back(decrypt_bit(sk, ct) ? 1 : 0);
    }
    return out;
}

// Truth tables of every gate kind over 5 key sets.
Outcome truth_tables() {
    const size_t trials = std::max<size_t>(5, env_size("ARCTYREX_C1_TRIALS", 20));
    const GateKind kinds[] = {GateKind::And, GateKind::Or,  GateKind::Nand, GateKind::Nor,
                              GateKind::Xor, GateKind::Xnor, GateKind::Not,  GateKind::Mux};
    size_t checks = 0, failures = 0;
    for (int set = 0; set < 5; ++set) {
        const KeySet keys = keygen(ParamSet::default_110(), parse_seed(cat("c1", set)));
        Rng rng(parse_seed(cat("c1e", set)));
        for (size_t t = 0; t < trials; ++t) {
            for (GateKind k : kinds) {
                const size_t n = arity(k);
                for (unsigned v = 0; v < (1u << n); ++v) {
                    bool bits[3] = {};
                    std::vector<LweCiphertext> cts;
                    for (size_t i = 0; i < n; ++i) {
                        bits[i] = (v >> i) & 1;
                        cts.push_back(encrypt_bit(keys.secret, bits[i], rng));
                    }
                    std::vector<const LweCiphertext*> ptrs;
                    for (const auto& ct : cts) ptrs.push_back(&ct);
                    const bool got = decrypt_bit(keys.secret, eval_gate(k, ptrs, *keys.eval));
                    ++checks;
                    if (got != evaluate_plain(k, bits[0], bits[1], bits[2])) {
                        ++failures;
                        std::cerr << "  mismatch: key set " << set << ' ' << name(k) << " inputs " << v << '\n';
                    }
                }
            }
        }
    }
    const std::string detail = cat("5 key sets x ", trials, " trials, ", checks, " evaluations, ", failures, " failures");
    return failures == 0 ? pass(detail) : fail(detail);
}

// Transform-based products against the schoolbook product, and roundtrips.
Outcome ntt_equivalence() {
    const size_t n = 1024;
    const NttTables t(n);
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int32_t> digit(-512, 511);
    size_t product_mismatches = 0, roundtrip_mismatches = 0;
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<int32_t> p(n);
        std::vector<uint32_t> q(n);
        IntPolynomial ip(n);
        TorusPolynomial tq(n);
        for (size_t i = 0; i < n; ++i) {
            ip[i] = p[i] = digit(rng);
            q[i] = static_cast<uint32_t>(rng());
            tq[i] = Torus32(q[i]);
        }
        const TorusPolynomial got = negacyclic_mul(ip, tq, t);
        const auto want = oracle::negacyclic_schoolbook(p, q);
        for (size_t i = 0; i < n; ++i) {
            if (got[i].raw != want[i]) {
                ++product_mismatches;
                break;
            }
        }
    }
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<uint64_t> v(n);
        for (auto& x : v) x = rng() % oracle::kQ;
        if (ntt_inverse(ntt_forward(v, t), t) != v) ++roundtrip_mismatches;
    }
    const std::string detail = cat("500 products: ", product_mismatches, " mismatches; 1000 roundtrips: ",
                                   roundtrip_mismatches, " mismatches");
    return product_mismatches + roundtrip_mismatches == 0 ? pass(detail) : fail(detail);
}

// Exact transform counts per gate, then a 25,000-gate run.
Outcome transform_accounting() {
    const KeySet& keys = oracle::shared_keys();
    const EvaluationKey& ek = *keys.eval;
    const uint64_t n = ek.params.n;
    Rng rng(parse_seed("c3"));
    const LweCiphertext x = encrypt_bit(keys.secret, true, rng);
    const LweCiphertext y = encrypt_bit(keys.secret, false, rng);
    std::vector<std::string> problems;
    for (GateKind k : kAllGateKinds) {
        std::vector<const LweCiphertext*> ops;
        const LweCiphertext* pool[] = {&x, &y, &x};
        for (size_t i = 0; i < arity(k); ++i) ops.push_back(pool[i]);
        const OpCounters before = thread_counters();
        eval_gate(k, ops, ek);
        const OpCounters d = thread_counters() - before;
        const uint64_t boots = bootstrap_count(k);
        if (d.ntt_forward != 4 * n * boots || d.ntt_inverse != 2 * n * boots) {
            problems.push_back(cat(name(k), " forward ", d.ntt_forward, " inverse ", d.ntt_inverse));
        }
    }

    const bool full = std::getenv("ARCTYREX_FULL_ACCEPTANCE") != nullptr &&
                      std::string(std::getenv("ARCTYREX_FULL_ACCEPTANCE")) == "1";
    ParamSet p = ParamSet::default_110();
    // Transform counts depend on n and l only; a short ring keeps the run
    // at desk scale without changing them.
    if (!full) p.ring_n = 64;
    const KeySet run_keys = keygen(p, parse_seed("c3f"));
    const size_t gates = 25000;
    const Circuit c = gen_flat(gates, GateKind::And);
    NamedBits bits;
    std::mt19937_64 gen(3);
    for (const auto& grp : c.inputs) {
        for (size_t i = 0; i < grp.width(); ++i) bits[grp.name].push_back(gen() & 1);
    }
    const auto t0 = std::chrono::steady_clock::now();
    const EvalResult r = evaluate(c, build_schedule(c, worker_default()),
                                  encrypt_inputs(c, bits, run_keys.secret, rng), *run_keys.eval);
    const double secs = seconds_since(t0);
    const uint64_t fwd = r.metrics.counters.ntt_forward;
    const uint64_t inv = r.metrics.counters.ntt_inverse;
    if (fwd != gates * 2048 || inv != gates * 1024) problems.push_back(cat("run forward ", fwd, " inverse ", inv));
    if (fwd + inv < 75'000'000) problems.push_back("run total below 75 million");

    std::string detail = cat("per gate 4n=", 4 * n, " forward / 2n=", 2 * n, " inverse, MUX 12n; ", gates,
                             "-gate run: ", fwd, " forward + ", inv, " inverse = ", fwd + inv, " (N=", p.ring_n,
                             ", ", secs, " s)");
    for (const auto& s : problems) detail += "; " + s;
    return problems.empty() ? pass(detail) : fail(detail);
}

// 100 NANDs in series on one wire.
Outcome noise_refresh() {
    const KeySet& keys = oracle::shared_keys();
    Circuit c;
    c.inputs.push_back({"x", {0}});
    for (WireId w = 1; w <= 100; ++w) c.gates.push_back({w, GateKind::Nand, {w - 1, w - 1}});
    c.outputs.push_back({"y", {100}});
    const Schedule s = build_schedule(c, 1);
    Rng rng(parse_seed("c4"));
    size_t correct = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const NamedBits in = {{"x", {static_cast<uint8_t>(trial & 1)}}};
        const EvalResult r = evaluate(c, s, encrypt_inputs(c, in, keys.secret, rng), *keys.eval);
        if (decrypt_outputs(r.outputs, keys.secret) == simulate_plain(c, in)) ++correct;
    }
    const std::string detail = cat(correct, "/20 chains of 100 NAND decrypt correctly");
    return correct == 20 ? pass(detail) : fail(detail);
}

// Output phase of the sign bootstrap.
Outcome phase_margin() {
    const KeySet& keys = oracle::shared_keys();
    const ParamSet& p = keys.secret.params;
    Rng rng(parse_seed("c5"));
    size_t within = 0;
    double worst = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const bool bit = trial & 1;
        const LweCiphertext out = gate_bootstrap(encrypt_bit(keys.secret, bit, rng), *keys.eval);
        const Torus32 target = bit ? p.mu : -p.mu;
        const double d = std::abs(oracle::torus_distance(phase(keys.secret.lwe, out).raw, target.raw));
        worst = std::max(worst, d);
        if (d < 1.0 / 16) ++within;
    }
    const std::string detail = cat(within, "/1000 within 1/16 of +-mu, worst deviation ", worst);
    return within >= 999 ? pass(detail) : fail(detail);
}

// Per-opcode split of the mixed wave versus the opcode-blind split.
Outcome scheduler_fixture() {
    const Circuit c = oracle::mixed_wave_fixture();
    const Waves w = partition_waves(c);
    if (w.waves.size() != 1) return fail("fixture is not a single wave");
    const auto batches = split_batches(batch_by_opcode(w.waves[0], c), 2, 0, c);
    std::map<std::pair<GateKind, uint32_t>, size_t> counts;
    for (const Batch& b : batches) counts[{b.opcode(), b.worker()}] += b.size();
    const bool exact = counts[{GateKind::Or, 0}] == 12500 && counts[{GateKind::Or, 1}] == 12500 &&
                       counts[{GateKind::Not, 0}] == 8375 && counts[{GateKind::Not, 1}] == 8375 &&
                       counts[{GateKind::And, 0}] == 1063 && counts[{GateKind::And, 1}] == 1062;
    const CostModel m = CostModel::standard();
    const double split = imbalance_ratio(worker_loads(batches, 2, m)) - 1.0;
    const double naive = imbalance_ratio(worker_loads(split_ignoring_opcode(w.waves[0], 2, 0, c), 2, m)) - 1.0;
    const std::string detail =
        cat("OR ", counts[{GateKind::Or, 0}], "/", counts[{GateKind::Or, 1}], ", NOT ", counts[{GateKind::Not, 0}], "/",
            counts[{GateKind::Not, 1}], ", AND ", counts[{GateKind::And, 0}], "/", counts[{GateKind::And, 1}],
            "; imbalance ", split * 100, "% vs naive ", naive * 100, "%");
    return exact && split <= 0.001 && std::abs(naive - 0.30) <= 0.05 ? pass(detail) : fail(detail);
}

// Wave rule, topological order and coverage on random DAGs.
Outcome wave_invariants() {
    std::mt19937_64 rng(7);
    size_t violations = 0, total_gates = 0;
    for (int t = 0; t < 100; ++t) {
        const Circuit c = oracle::random_dag(rng, 5000);
        total_gates += c.gates.size();
        const Waves w = partition_waves(c);
        if (w.wave_of != oracle::reference_waves(c)) ++violations;
        std::vector<int> seen(c.gates.size(), 0);
        std::vector<bool> defined(c.wire_count(), false);
        for (WireId x : c.inputs[0].wires) defined[x] = true;
        bool ordered = true;
        for (const auto& wave : w.waves) {
            for (GateIndex g : wave) {
                ++seen[g];
                for (WireId x : c.gates[g].operands) ordered = ordered && defined[x];
            }
            for (GateIndex g : wave) defined[c.gates[g].id] = true;
        }
        if (!ordered) ++violations;
        for (int s : seen) {
            if (s != 1) {
                ++violations;
                break;
            }
        }
    }
    const std::string detail = cat("100 random DAGs, ", total_gates, " gates, ", violations, " violations");
    return violations == 0 ? pass(detail) : fail(detail);
}

// Adder and MUX tree end to end for K = 1, 2, 4.
Outcome end_to_end() {
    const KeySet& keys = oracle::shared_keys();
    const size_t vectors = std::max<size_t>(1, env_size("ARCTYREX_C8_VECTORS", 100));
    const std::pair<std::string, Circuit> fixtures[] = {{"adder8", gen_adder(8)}, {"mux3", gen_mux_tree(3)}};
    const uint32_t ks[] = {1, 2, 4};
    std::mt19937_64 gen(8);
    Rng rng(parse_seed("c8"));
    size_t runs = 0, wrong = 0, disagreements = 0;
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& [label, c] : fixtures) {
        std::vector<Schedule> schedules;
        for (uint32_t k : ks) schedules.push_back(build_schedule(c, k));
        for (size_t v = 0; v < vectors; ++v) {
            NamedBits in;
            for (const auto& grp : c.inputs) {
                for (size_t i = 0; i < grp.width(); ++i) in[grp.name].push_back(gen() & 1);
            }
            const NamedBits expected = simulate_plain(c, in);
            const NamedCiphertexts enc = encrypt_inputs(c, in, keys.secret, rng);
            std::vector<NamedBits> got;
            for (const Schedule& s : schedules) {
                got.push_back(decrypt_outputs(evaluate(c, s, enc, *keys.eval).outputs, keys.secret));
                ++runs;
                if (got.back() != expected) ++wrong;
            }
            for (const auto& g : got) {
                if (g != got.front()) ++disagreements;
            }
        }
    }
    const std::string detail = cat(vectors, " vectors per fixture, ", runs, " runs, ", wrong, " wrong, ",
                                   disagreements, " cross-K disagreements (", seconds_since(t0), " s)");
    return wrong + disagreements == 0 ? pass(detail) : fail(detail);
}

// Wall time of a single wide wave with 4 workers against 1.
Outcome soft_scaling() {
    const unsigned cores = std::thread::hardware_concurrency();
    if (cores < 4) return {Verdict::Warn, cat("skipped: host reports ", cores, " hardware threads, needs 4")};
    const KeySet& keys = oracle::shared_keys();
    const size_t gates = std::max<size_t>(1, env_size("ARCTYREX_C9_GATES", 10000));
    const Circuit c = gen_flat(gates, GateKind::And);
    std::mt19937_64 gen(9);
    NamedBits in;
    for (const auto& grp : c.inputs) {
        for (size_t i = 0; i < grp.width(); ++i) in[grp.name].push_back(gen() & 1);
    }
    Rng rng(parse_seed("c9"));
    const NamedCiphertexts enc = encrypt_inputs(c, in, keys.secret, rng);
    auto timed = [&](uint32_t k) {
        const Schedule s = build_schedule(c, k);
        const auto t0 = std::chrono::steady_clock::now();
        evaluate(c, s, enc, *keys.eval);
        return seconds_since(t0);
    };
    const double one = timed(1);
    const double four = timed(4);
    const double ratio = four / one;
    const std::string detail = cat(gates, " AND gates: K=1 ", one, " s, K=4 ", four, " s, ratio ", ratio);
    return {ratio <= 0.6 ? Verdict::Pass : Verdict::Warn, detail};
}

}  // namespace

int main(int argc, char** argv) {
    const std::function<Outcome()> criteria[] = {
        truth_tables,      ntt_equivalence, transform_accounting, noise_refresh, phase_margin,
        scheduler_fixture, wave_invariants, end_to_end,           soft_scaling,
    };
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        const int n = std::atoi(argv[i]);
        if (n < 1 || n > 9) {
            std::cerr << "usage: " << argv[0] << " [criterion 1-9 ...]\n";
            return 2;
        }
        selected.push_back(n);
    }
    if (selected.empty()) {
        for (int n = 1; n <= 9; ++n) selected.push_back(n);
    }

    bool any_failed = false;
    for (int n : selected) {
        Outcome o;
        try {
            o = criteria[n - 1]();
        } catch (const std::exception& e) {
            o = fail(std::string("exception: ") + e.what());
        }
        const char* word = o.verdict == Verdict::Pass ? "PASS" : o.verdict == Verdict::Fail ? "FAIL" : "WARN";
        std::cout << "criterion " << n << ": " << word << "  " << o.detail << std::endl;
        any_failed = any_failed || o.verdict == Verdict::Fail;
    }
    return any_failed ? 1 : 0;
}
