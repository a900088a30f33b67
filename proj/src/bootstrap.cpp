#include "arctyrex/bootstrap.hpp"

#include <string>

#include "arctyrex/counters.hpp"
#include "arctyrex/error.hpp"
#include "arctyrex/modq.hpp"

namespace arctyrex {

namespace {

// Per-thread scratch for the external product; sized lazily.
struct Workspace {
    std::vector<uint64_t> digits;  // 2l * N residues
    std::vector<uint64_t> acc;     // 2 * N residues
    TlweCiphertext temp;
    TlweCiphertext product;

    void reserve(size_t levels, size_t n) {
        if (digits.size() != 2 * levels * n) digits.assign(2 * levels * n, 0);
        if (acc.size() != 2 * n) acc.assign(2 * n, 0);
        if (temp.ring_dimension() != n) {
            temp = TlweCiphertext(n);
            product = TlweCiphertext(n);
        }
    }
};

Workspace& workspace() {
    thread_local Workspace ws;
    return ws;
}

// Writes the l digits of every coefficient of p as residues mod Q:
// out[j * N + k] = d_{j+1}(p_k).
void decompose_to_residues(std::span<const Torus32> p, uint32_t bg_bits, uint32_t levels,
                           uint64_t* out) {
    const size_t n = p.size();
    const uint32_t half = uint32_t{1} << (bg_bits - 1);
    const uint32_t mask = (uint32_t{1} << bg_bits) - 1;
    uint32_t offset = 0;
    for (uint32_t j = 1; j <= levels; ++j) offset += half << (32 - j * bg_bits);
    if (levels * bg_bits < 32) offset += uint32_t{1} << (32 - levels * bg_bits - 1);
    for (size_t k = 0; k < n; ++k) {
        const uint32_t x = p[k].raw + offset;
        for (uint32_t j = 0; j < levels; ++j) {
            const auto d = static_cast<int32_t>((x >> (32 - (j + 1) * bg_bits)) & mask) -
                           static_cast<int32_t>(half);
            out[j * n + k] = modq::from_signed(d);
        }
    }
}

// acc_c[k] = sum_r digits[r][k] * g.spectrum(r, c)[k]. Products are summed
// in 128 bits and reduced once; each 2^128 overflow is worth -2^32 mod Q.
void multiply_accumulate(const uint64_t* digits, const TgswCiphertext& g, size_t rows, size_t n,
                         uint64_t* acc_a, uint64_t* acc_b) {
    constexpr size_t kMaxRows = 64;
    const uint64_t* ga[kMaxRows];
    const uint64_t* gb[kMaxRows];
    for (size_t r = 0; r < rows; ++r) {
        ga[r] = g.spectrum(r, 0).data();
        gb[r] = g.spectrum(r, 1).data();
    }
    for (size_t k = 0; k < n; ++k) {
        unsigned __int128 sa = 0, sb = 0;
        uint64_t ca = 0, cb = 0;
        for (size_t r = 0; r < rows; ++r) {
            const uint64_t d = digits[r * n + k];
            const unsigned __int128 pa = static_cast<unsigned __int128>(d) * ga[r][k];
            const unsigned __int128 pb = static_cast<unsigned __int128>(d) * gb[r][k];
            sa += pa;
            ca += sa < pa;
            sb += pb;
            cb += sb < pb;
        }
        acc_a[k] = modq::sub(modq::reduce128(static_cast<uint64_t>(sa >> 64), static_cast<uint64_t>(sa)),
                             modq::canonical(ca << 32));
        acc_b[k] = modq::sub(modq::reduce128(static_cast<uint64_t>(sb >> 64), static_cast<uint64_t>(sb)),
                             modq::canonical(cb << 32));
    }
}

void require_ring(size_t got, size_t expected, const char* what) {
    if (got != expected) {
        throw DimensionError(std::string(what) + ": ring dimension " + std::to_string(got) +
                             ", expected " + std::to_string(expected));
    }
}

// product = g * c, using the thread's workspace buffers.
void external_product_into(const TgswCiphertext& g, const TlweCiphertext& c, uint32_t bg_bits,
                           const NttTables& t, Workspace& ws, TlweCiphertext& product) {
    const size_t n = t.size();
    const size_t levels = g.levels();
    require_ring(c.ring_dimension(), n, "external_product");
    require_ring(g.ring_dimension(), n, "external_product key");
    ws.reserve(levels, n);

    uint64_t* digits = ws.digits.data();
    decompose_to_residues(c.a.coeffs(), bg_bits, static_cast<uint32_t>(levels), digits);
    decompose_to_residues(c.b.coeffs(), bg_bits, static_cast<uint32_t>(levels), digits + levels * n);
    for (size_t r = 0; r < 2 * levels; ++r) ntt_forward_inplace({digits + r * n, n}, t);

    uint64_t* acc_a = ws.acc.data();
    uint64_t* acc_b = acc_a + n;
    const size_t rows = 2 * levels;
    multiply_accumulate(digits, g, rows, n, acc_a, acc_b);
    detail::ntt_inverse_unscaled_inplace({acc_a, n}, t);
    detail::ntt_inverse_unscaled_inplace({acc_b, n}, t);
    residues_to_torus({acc_a, n}, product.a.coeffs());
    residues_to_torus({acc_b, n}, product.b.coeffs());
    ++thread_counters().external_products;
}

}  // namespace

std::vector<IntPolynomial> gadget_decompose(const TorusPolynomial& p, const ParamSet& params) {
    const size_t n = p.size();
    std::vector<uint64_t> residues(params.gadget_levels * n);
    decompose_to_residues(p.coeffs(), params.bg_bits, params.gadget_levels, residues.data());
    std::vector<IntPolynomial> out;
    out.reserve(params.gadget_levels);
    for (uint32_t j = 0; j < params.gadget_levels; ++j) {
        IntPolynomial d(n);
        for (size_t k = 0; k < n; ++k) d[k] = static_cast<int32_t>(modq::to_signed(residues[j * n + k]));
        out.push_back(std::move(d));
    }
    return out;
}

TlweCiphertext external_product(const TgswCiphertext& g, const TlweCiphertext& c, const ParamSet& params,
                                const NttTables& t) {
    if (g.levels() != params.gadget_levels) throw DimensionError("external_product: TGSW level mismatch");
    TlweCiphertext out(t.size());
    external_product_into(g, c, params.bg_bits, t, workspace(), out);
    return out;
}

int64_t discretize(Torus32 x, size_t ring_n) {
    const uint64_t two_n = 2 * static_cast<uint64_t>(ring_n);
    const uint64_t scaled = static_cast<uint64_t>(x.raw) * two_n + (uint64_t{1} << 31);
    return static_cast<int64_t>((scaled >> 32) % two_n);
}

TlweCiphertext blind_rotate(const TlweCiphertext& test_vector, const LweCiphertext& ct,
                            const EvaluationKey& ek) {
    const ParamSet& p = ek.params;
    const NttTables& t = *ek.tables;
    const size_t n = t.size();
    require_ring(test_vector.ring_dimension(), n, "blind_rotate test vector");
    if (ct.dimension() != ek.bootstrapping_key.size()) {
        throw DimensionError("blind_rotate: ciphertext dimension " + std::to_string(ct.dimension()) +
                             " vs bootstrapping key length " + std::to_string(ek.bootstrapping_key.size()));
    }

    const int64_t body = discretize(ct.b, n);
    TlweCiphertext acc;
    acc.a = poly_rotate(test_vector.a, -body);
    acc.b = poly_rotate(test_vector.b, -body);

    Workspace& ws = workspace();
    ws.reserve(p.gadget_levels, n);
    for (size_t i = 0; i < ct.dimension(); ++i) {
        const int64_t ai = discretize(ct.a[i], n);
        poly_rotate_minus_self(acc.a.coeffs(), ai, ws.temp.a.coeffs());
        poly_rotate_minus_self(acc.b.coeffs(), ai, ws.temp.b.coeffs());
        external_product_into(ek.bootstrapping_key[i], ws.temp, p.bg_bits, t, ws, ws.product);
        acc.a += ws.product.a;
        acc.b += ws.product.b;
    }
    return acc;
}

LweCiphertext sample_extract(const TlweCiphertext& c) {
    const size_t n = c.ring_dimension();
    LweCiphertext out(n);
    if (n == 0) return out;
    out.a[0] = c.a[0];
    for (size_t i = 1; i < n; ++i) out.a[i] = -c.a[n - i];
    out.b = c.b[0];
    return out;
}

LweCiphertext keyswitch(const LweCiphertext& ct, const EvaluationKey& ek) {
    const KeyswitchKey& ksk = ek.keyswitch_key;
    if (ct.dimension() != ksk.input_dimension()) {
        throw DimensionError("keyswitch: input dimension " + std::to_string(ct.dimension()) +
                             " vs key input dimension " + std::to_string(ksk.input_dimension()));
    }
    const uint32_t base_bits = ek.params.ks_base_bits;
    const uint32_t levels = ek.params.ks_levels;
    const uint32_t mask = (uint32_t{1} << base_bits) - 1;
    const uint32_t round = levels * base_bits < 32 ? uint32_t{1} << (32 - levels * base_bits - 1) : 0;
    const size_t out_dim = ksk.output_dimension();

    std::vector<uint32_t> acc(out_dim + 1, 0);
    acc[out_dim] = ct.b.raw;
    for (size_t i = 0; i < ct.dimension(); ++i) {
        const uint32_t abar = ct.a[i].raw + round;
        for (uint32_t j = 0; j < levels; ++j) {
            const uint32_t digit = (abar >> (32 - (j + 1) * base_bits)) & mask;
            if (digit == 0) continue;
            const uint32_t* row = ksk.entry(i, j, digit).data();
            for (size_t k = 0; k <= out_dim; ++k) acc[k] -= row[k];
        }
    }
    LweCiphertext out(out_dim);
    for (size_t k = 0; k < out_dim; ++k) out.a[k] = Torus32(acc[k]);
    out.b = Torus32(acc[out_dim]);
    ++thread_counters().keyswitches;
    return out;
}

TlweCiphertext constant_test_vector(size_t ring_n, Torus32 mu) {
    TlweCiphertext tv(ring_n);
    for (size_t i = 0; i < ring_n; ++i) tv.b[i] = mu;
    return tv;
}

LweCiphertext bootstrap_to_extracted(const LweCiphertext& ct, Torus32 mu, const EvaluationKey& ek) {
    const TlweCiphertext acc = blind_rotate(constant_test_vector(ek.params.ring_n, mu), ct, ek);
    ++thread_counters().bootstraps;
    return sample_extract(acc);
}

LweCiphertext gate_bootstrap(const LweCiphertext& ct, const EvaluationKey& ek) {
    return keyswitch(bootstrap_to_extracted(ct, ek.params.mu, ek), ek);
}

}  // namespace arctyrex
