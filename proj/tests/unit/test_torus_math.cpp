#include <random>

#include "doctest.h"

#include "arctyrex/error.hpp"
#include "arctyrex/modq.hpp"
#include "arctyrex/ntt.hpp"
#include "arctyrex/torus.hpp"
#include "../support/oracles.hpp"

using namespace arctyrex;

namespace {

TorusPolynomial random_torus(std::mt19937_64& rng, size_t n) {
    TorusPolynomial p(n);
    for (auto& c : p.coeffs()) c = Torus32(static_cast<uint32_t>(rng()));
    return p;
}

IntPolynomial random_digits(std::mt19937_64& rng, size_t n, int32_t half) {
    std::uniform_int_distribution<int32_t> d(-half, half - 1);
    IntPolynomial p(n);
    for (auto& c : p.coeffs()) c = d(rng);
    return p;
}

std::vector<uint32_t> raw(const TorusPolynomial& p) {
    std::vector<uint32_t> out;
    for (Torus32 t : p.coeffs()) out.push_back(t.raw);
    return out;
}

}  // namespace

TEST_SUITE("torus-math") {

TEST_CASE("mod_mul matches 128-bit reference on 1e5 random pairs") {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 100000; ++i) {
        const uint64_t a = rng() % oracle::kQ;
        const uint64_t b = rng() % oracle::kQ;
        REQUIRE(modq::mul(a, b) == oracle::mulmod(a, b));
    }
    // Edges around the carry folds.
    const uint64_t edges[] = {0, 1, 2, oracle::kQ - 1, oracle::kQ - 2, 0xFFFFFFFFULL, 0x100000000ULL,
                              oracle::kQ / 2, oracle::kQ / 2 + 1};
    for (uint64_t a : edges) {
        for (uint64_t b : edges) CHECK(modq::mul(a, b) == oracle::mulmod(a, b));
    }
}

TEST_CASE("mod_mul examples") {
    CHECK(modq::mul(1, 123456789) == 123456789);
    CHECK(modq::mul(oracle::kQ - 1, oracle::kQ - 1) == 1);
    const uint64_t inv = oracle::powmod(modq::kGenerator, oracle::kQ - 2);
    CHECK(modq::mul(modq::kGenerator, inv) == 1);
    CHECK(modq::inverse(modq::kGenerator) == inv);
}

TEST_CASE("add, sub and signed lifts") {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 10000; ++i) {
        const uint64_t a = rng() % oracle::kQ;
        const uint64_t b = rng() % oracle::kQ;
        const auto wide_a = static_cast<unsigned __int128>(a);
        CHECK(modq::add(a, b) == static_cast<uint64_t>((wide_a + b) % oracle::kQ));
        CHECK(modq::sub(a, b) == static_cast<uint64_t>((wide_a + oracle::kQ - b) % oracle::kQ));
        const int64_t s = static_cast<int64_t>(rng() >> 2) - (int64_t{1} << 61);
        CHECK(modq::to_signed(modq::from_signed(s)) == s);
        CHECK(modq::to_torus_raw(modq::from_signed(s)) == static_cast<uint32_t>(s));
    }
}

TEST_CASE("transform tables") {
    const NttTables t(1024);
    CHECK(oracle::powmod(t.psi(), 2048) == 1);
    CHECK(oracle::powmod(t.psi(), 1024) == oracle::kQ - 1);
    CHECK(t.omega() == oracle::mulmod(t.psi(), t.psi()));
    CHECK(oracle::mulmod(t.n_inverse(), 1024) == 1);

    const NttTables one(1);
    CHECK(one.psi() == oracle::powmod(modq::kGenerator, (oracle::kQ - 1) / 2));
    CHECK(oracle::mulmod(one.psi(), one.psi()) == 1);

    CHECK_THROWS_AS(NttTables(3), ParamError);
    CHECK_THROWS_AS(NttTables(0), ParamError);
    CHECK_THROWS_AS(NttTables(size_t{1} << 32), ParamError);
}

TEST_CASE("forward transform examples") {
    const NttTables t(1024);
    CHECK(ntt_forward(std::vector<uint64_t>(1024, 0), t) == std::vector<uint64_t>(1024, 0));
    std::vector<uint64_t> delta(1024, 0);
    delta[0] = 1;
    CHECK(ntt_forward(delta, t) == std::vector<uint64_t>(1024, 1));
    CHECK_THROWS_AS(ntt_forward(std::vector<uint64_t>(512, 0), t), DimensionError);
}

TEST_CASE("forward transform is a reordering of the twisted DFT") {
    std::mt19937_64 rng(3);
    for (size_t n : {2, 8, 64}) {
        const NttTables t(n);
        std::vector<uint64_t> p(n);
        for (auto& v : p) v = rng() % oracle::kQ;
        auto fast = ntt_forward(p, t);
        auto direct = oracle::twisted_dft(p, t.psi());
        std::sort(fast.begin(), fast.end());
        std::sort(direct.begin(), direct.end());
        CHECK(fast == direct);
    }
}

TEST_CASE("roundtrip on random inputs") {
    std::mt19937_64 rng(4);
    const NttTables t(1024);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<uint64_t> p(1024);
        for (auto& v : p) v = rng() % oracle::kQ;
        REQUIRE(ntt_inverse(ntt_forward(p, t), t) == p);
    }
}

TEST_CASE("negacyclic_mul examples") {
    std::mt19937_64 rng(5);
    const size_t n = 1024;
    const NttTables t(n);
    const TorusPolynomial q = random_torus(rng, n);

    IntPolynomial one(n);
    one[0] = 1;
    CHECK(negacyclic_mul(one, q, t) == q);
    CHECK(negacyclic_mul_naive(one, q) == q);

    IntPolynomial x(n);
    x[1] = 1;
    TorusPolynomial shifted(n);
    shifted[0] = -q[n - 1];
    for (size_t i = 1; i < n; ++i) shifted[i] = q[i - 1];
    CHECK(negacyclic_mul(x, q, t) == shifted);
    CHECK(negacyclic_mul_naive(x, q) == shifted);

    CHECK_THROWS_AS(negacyclic_mul(IntPolynomial(512), q, t), DimensionError);
}

TEST_CASE("negacyclic_mul equals schoolbook oracle") {
    std::mt19937_64 rng(6);
    const size_t n = 1024;
    const NttTables t(n);
    for (int trial = 0; trial < 50; ++trial) {
        const IntPolynomial p = random_digits(rng, n, 512);
        const TorusPolynomial q = random_torus(rng, n);
        const auto expected =
            oracle::negacyclic_schoolbook(std::vector<int32_t>(p.coeffs().begin(), p.coeffs().end()), raw(q));
        REQUIRE(raw(negacyclic_mul(p, q, t)) == expected);
        REQUIRE(raw(negacyclic_mul_naive(p, q)) == expected);
    }
}

TEST_CASE("poly_rotate") {
    std::mt19937_64 rng(7);
    const size_t n = 64;
    const TorusPolynomial q = random_torus(rng, n);
    CHECK(poly_rotate(q, 0) == q);
    CHECK(poly_rotate(q, 2 * n) == q);
    CHECK(poly_rotate(q, n) == -q);
    for (int64_t k : {-200, -65, -1, 1, 5, 63, 64, 100, 127, 1000}) {
        CHECK(poly_rotate(q, k + 2 * static_cast<int64_t>(n)) == poly_rotate(q, k));
        CHECK(poly_rotate(poly_rotate(q, k), 17) == poly_rotate(q, k + 17));

        IntPolynomial monomial(n);
        const int64_t r = ((k % 128) + 128) % 128;
        monomial[r % 64] = r < 64 ? 1 : -1;
        CHECK(poly_rotate(q, k) == negacyclic_mul_naive(monomial, q));

        TorusPolynomial out(n);
        poly_rotate_minus_self(q.coeffs(), k, out.coeffs());
        CHECK(out == poly_rotate(q, k) - q);
    }
    // Linear over the torus.
    const TorusPolynomial p = random_torus(rng, n);
    CHECK(poly_rotate(p + q, 9) == poly_rotate(p, 9) + poly_rotate(q, 9));
}

TEST_CASE("torus scalar") {
    CHECK(Torus32::fraction(8).raw == 0x20000000u);
    CHECK(Torus32::from_double(0.125) == Torus32::fraction(8));
    CHECK(Torus32::from_double(-0.125) == -Torus32::fraction(8));
    CHECK((Torus32(0xFFFFFFFFu) + Torus32(1)).raw == 0);
    CHECK(Torus32::fraction(4).to_double() == doctest::Approx(0.25));
}

}
