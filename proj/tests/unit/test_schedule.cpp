#include <chrono>
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"

#include "arctyrex/schedule.hpp"
#include "../support/oracles.hpp"

using namespace arctyrex;

namespace {

size_t count_of(const std::vector<Batch>& batches, GateKind k, uint32_t worker) {
    size_t n = 0;
    for (const Batch& b : batches) {
        if (b.opcode() == k && b.worker() == worker) n += b.size();
    }
    return n;
}

// Checks the wave rule and topological order of a partition.
void check_waves(const Circuit& c, const Waves& w) {
    const auto expected = oracle::reference_waves(c);
    REQUIRE(w.wave_of == expected);
    std::vector<int> seen(c.gates.size(), 0);
    std::vector<bool> defined(c.wire_count(), false);
    for (const auto& grp : c.inputs) {
        for (WireId x : grp.wires) defined[x] = true;
    }
    for (size_t i = 0; i < w.waves.size(); ++i) {
        REQUIRE_FALSE(w.waves[i].empty());
        for (GateIndex g : w.waves[i]) {
            ++seen[g];
            REQUIRE(w.wave_of[g] == i);
            for (WireId x : c.gates[g].operands) REQUIRE(defined[x]);
        }
        // Gates of one wave do not depend on each other.
        for (GateIndex g : w.waves[i]) defined[c.gates[g].id] = true;
    }
    for (int s : seen) REQUIRE(s == 1);
}

}  // namespace

TEST_SUITE("schedule") {

TEST_CASE("wave partition examples") {
    SUBCASE("chain") {
        const Circuit c = gen_not_chain(4);
        const Waves w = partition_waves(c);
        CHECK(w.waves == std::vector<std::vector<GateIndex>>{{0}, {1}, {2}, {3}});
    }
    SUBCASE("diamond") {
        const Circuit c = parse_circuit(
            "input x 2\ngate 2 AND 0,1\ngate 3 NOT 2\ngate 4 OR 2,1\ngate 5 XOR 3,4\noutput y 5\n");
        const Waves w = partition_waves(c);
        CHECK(w.waves == std::vector<std::vector<GateIndex>>{{0}, {1, 2}, {3}});
        check_waves(c, w);
    }
    SUBCASE("independent gates share wave 0") {
        const Waves w = partition_waves(gen_flat(5, GateKind::And));
        REQUIRE(w.waves.size() == 1);
        CHECK(w.waves[0].size() == 5);
    }
    SUBCASE("disconnected circuit terminates with every gate placed") {
        const Circuit c = parse_circuit(
            "input x 2\ngate 2 NOT 0\ngate 3 NOT 2\ngate 4 CONST1\ngate 5 AND 4,4\ngate 6 NOT 1\noutput y 3\n");
        const Waves w = partition_waves(c);
        CHECK(w.waves == std::vector<std::vector<GateIndex>>{{0, 2, 4}, {1, 3}});
        check_waves(c, w);
    }
    SUBCASE("same operand twice") {
        const Circuit c = parse_circuit("input x 1\ngate 1 NOT 0\ngate 2 AND 1,1\noutput y 2\n");
        CHECK(partition_waves(c).wave_of == std::vector<uint32_t>{0, 1});
    }
    SUBCASE("empty circuit") {
        CHECK(partition_waves(Circuit{}).waves.empty());
    }
}

TEST_CASE("wave partition agrees with topology levels") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 30; ++t) {
        const Circuit c = oracle::random_dag(rng, 500);
        const Waves w = partition_waves(c);
        CHECK(w.wave_of == gate_levels(c));
        std::vector<size_t> widths;
        for (const auto& wave : w.waves) widths.push_back(wave.size());
        CHECK(widths == topology_stats(c).level_widths);
    }
}

TEST_CASE("random DAG property") {
    std::mt19937_64 rng(22);
    for (int t = 0; t < 50; ++t) {
        const Circuit c = oracle::random_dag(rng, 2000);
        check_waves(c, partition_waves(c));
    }
}

TEST_CASE("batch_by_opcode keeps order within each opcode") {
    const Circuit c = parse_circuit(
        "input x 2\ngate 2 AND 0,1\ngate 3 NOT 0\ngate 4 AND 1,0\ngate 5 OR 0,1\ngate 6 NOT 1\noutput y 6\n");
    const std::vector<GateIndex> wave = {0, 1, 2, 3, 4};
    const auto groups = batch_by_opcode(wave, c);
    CHECK(groups.size() == 3);
    CHECK(groups.at(GateKind::And) == std::vector<GateIndex>{0, 2});
    CHECK(groups.at(GateKind::Not) == std::vector<GateIndex>{1, 4});
    CHECK(groups.at(GateKind::Or) == std::vector<GateIndex>{3});
}

TEST_CASE("split sizes") {
    const Circuit c = gen_flat(10, GateKind::And);
    std::vector<GateIndex> all(10);
    for (GateIndex i = 0; i < 10; ++i) all[i] = i;
    const auto groups = batch_by_opcode(all, c);

    auto batches = split_batches(groups, 3, 0, c);
    REQUIRE(batches.size() == 3);
    CHECK(batches[0].gates() == std::vector<GateIndex>{0, 1, 2, 3});
    CHECK(batches[1].gates() == std::vector<GateIndex>{4, 5, 6});
    CHECK(batches[2].gates() == std::vector<GateIndex>{7, 8, 9});

    // More workers than gates: idle workers get no batch.
    batches = split_batches(groups, 16, 4, c);
    CHECK(batches.size() == 10);
    for (const Batch& b : batches) {
        CHECK(b.size() == 1);
        CHECK(b.wave() == 4);
    }
    CHECK_THROWS_AS(split_batches(groups, 0, 0, c), ScheduleError);
    CHECK_THROWS_AS(build_schedule(c, 0), ScheduleError);
}

TEST_CASE("mixed wave split matches the printed counts") {
    const Circuit c = oracle::mixed_wave_fixture();
    const Waves w = partition_waves(c);
    REQUIRE(w.waves.size() == 1);
    const auto batches = split_batches(batch_by_opcode(w.waves[0], c), 2, 0, c);
    CHECK(count_of(batches, GateKind::Or, 0) == 12500);
    CHECK(count_of(batches, GateKind::Or, 1) == 12500);
    CHECK(count_of(batches, GateKind::Not, 0) == 8375);
    CHECK(count_of(batches, GateKind::Not, 1) == 8375);
    CHECK(count_of(batches, GateKind::And, 0) == 1063);
    CHECK(count_of(batches, GateKind::And, 1) == 1062);

    const CostModel m = CostModel::standard();
    const double balanced = imbalance_ratio(worker_loads(batches, 2, m));
    CHECK(balanced - 1.0 <= 0.001);

    // Naive cut: the first 21938 gates are exactly the first three runs.
    const uint64_t first = (1356 + 10465) * uint64_t{1024} + 10117;
    const uint64_t second = (769 + 14535) * uint64_t{1024} + 6633;
    const auto naive = worker_loads(split_ignoring_opcode(w.waves[0], 2, 0, c), 2, m);
    CHECK(naive == std::vector<uint64_t>{first, second});
    const double naive_excess = imbalance_ratio(naive) - 1.0;
    CHECK(naive_excess == doctest::Approx(static_cast<double>(second) / first - 1.0));
    CHECK(std::abs(naive_excess - 0.30) <= 0.05);
}

TEST_CASE("cost model and load examples") {
    const CostModel m = CostModel::standard();
    CHECK(m.of(GateKind::Not) == 1);
    CHECK(m.of(GateKind::Const0) == 1);
    CHECK(m.of(GateKind::Xnor) == 1024);
    CHECK(m.of(GateKind::Mux) == 2048);

    const std::vector<uint64_t> even = {5, 5};
    const std::vector<uint64_t> idle = {5, 0};
    const std::vector<uint64_t> none = {0, 0};
    CHECK(imbalance_ratio(even) == 1.0);
    CHECK(std::isinf(imbalance_ratio(idle)));
    CHECK(imbalance_ratio(none) == 1.0);

    const Schedule s = build_schedule(gen_flat(4, GateKind::And), 2);
    const LoadReport r = estimate_load(s, m);
    CHECK(r.per_wave == std::vector<std::vector<uint64_t>>{{2048, 2048}});
    CHECK(r.worst_imbalance() == 1.0);

    const Schedule one = build_schedule(gen_flat(3, GateKind::And), 4);
    CHECK(std::isinf(estimate_load(one, m).worst_imbalance()));
}

TEST_CASE("schedule invariants on random circuits") {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 30; ++t) {
        const Circuit c = oracle::random_dag(rng, 1000);
        for (uint32_t k : {1u, 2u, 3u, 8u}) {
            const Schedule s = build_schedule(c, k);
            CHECK(s.worker_count == k);
            CHECK(s.gate_count() == c.gates.size());
            std::set<GateIndex> seen;
            for (size_t w = 0; w < s.waves.size(); ++w) {
                for (const Batch& b : s.waves[w]) {
                    REQUIRE(b.wave() == w);
                    REQUIRE(b.worker() < k);
                    REQUIRE(b.size() > 0);
                    for (GateIndex g : b.gates()) {
                        REQUIRE(c.gates[g].kind == b.opcode());
                        REQUIRE(seen.insert(g).second);
                    }
                }
                // Per opcode, worker shares differ by at most one.
                for (GateKind kind : kAllGateKinds) {
                    size_t lo = SIZE_MAX, hi = 0;
                    for (uint32_t wk = 0; wk < k; ++wk) {
                        const size_t n = count_of(s.waves[w], kind, wk);
                        lo = std::min(lo, n);
                        hi = std::max(hi, n);
                    }
                    REQUIRE(hi - lo <= 1);
                }
            }
            // Same input, same schedule.
            CHECK(schedule_csv(build_schedule(c, k), CostModel::standard()) == schedule_csv(s, CostModel::standard()));
        }
    }
}

TEST_CASE("mixed-opcode batches are rejected") {
    const Circuit c = parse_circuit("input x 2\ngate 2 AND 0,1\ngate 3 OR 0,1\noutput y 3\n");
    CHECK_THROWS_AS(Batch::create(GateKind::And, {0, 1}, 0, 0, c), ScheduleError);
    CHECK_THROWS_AS(Batch::create(GateKind::And, {5}, 0, 0, c), ScheduleError);
    CHECK(Batch::create(GateKind::Or, {1}, 1, 0, c).worker() == 1);
}

TEST_CASE("schedule CSV") {
    const Schedule s = build_schedule(gen_adder(1), 2);
    const std::string csv = schedule_csv(s, CostModel::standard());
    CHECK(csv.rfind("wave,opcode,worker,count,cost_units\n", 0) == 0);
    CHECK(csv.find("0,XOR,0,1,1024\n") != std::string::npos);
    CHECK(csv.find("0,CONST0,0,1,1\n") != std::string::npos);
    CHECK(static_cast<size_t>(std::count(csv.begin(), csv.end(), '\n')) == s.batch_count() + 1);
}

TEST_CASE("partitioning time grows about linearly") {
    auto best_time = [](const Circuit& c) {
        double best = 1e9;
        for (int r = 0; r < 3; ++r) {
            const auto t0 = std::chrono::steady_clock::now();
            const Waves w = partition_waves(c);
            const auto t1 = std::chrono::steady_clock::now();
            REQUIRE(w.wave_of.size() == c.gates.size());
            best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
        }
        return best;
    };
    std::mt19937_64 rng(24);
    auto big_dag = [&rng](size_t gates) {
        Circuit c;
        c.inputs.push_back({"x", {0, 1, 2, 3}});
        WireId next = 4;
        for (size_t g = 0; g < gates; ++g) {
            const WireId span = std::min<WireId>(next, 64);
            const WireId a = next - 1 - static_cast<WireId>(rng() % span);
            const WireId b = next - 1 - static_cast<WireId>(rng() % span);
            c.gates.push_back({next++, GateKind::Nand, {a, b}});
        }
        c.outputs.push_back({"y", {next - 1}});
        return c;
    };
    const double small = best_time(big_dag(100000));
    const double large = best_time(big_dag(1000000));
    const double exponent = std::log(large / small) / std::log(10.0);
    MESSAGE("partition time exponent ", exponent);
    CHECK(exponent < 1.2);
}

}
