#include "arctyrex/ntt.hpp"

#include <bit>
#include <string>

#include "arctyrex/counters.hpp"
#include "arctyrex/error.hpp"
#include "arctyrex/modq.hpp"

namespace arctyrex {

namespace {

size_t bit_reverse(size_t x, unsigned bits) {
    size_t r = 0;
    for (unsigned i = 0; i < bits; ++i) {
        r = (r << 1) | (x & 1);
        x >>= 1;
    }
    return r;
}

void require_length(size_t got, const NttTables& t) {
    if (got != t.size()) {
        throw DimensionError("NTT length mismatch: got " + std::to_string(got) + ", tables for " +
                             std::to_string(t.size()));
    }
}

}  // namespace

NttTables::NttTables(size_t n) : n_(n) {
    if (n == 0 || !std::has_single_bit(n)) {
        throw ParamError("NTT length must be a power of two, got " + std::to_string(n));
    }
    if (n > (size_t{1} << 31) || (modq::kModulus - 1) % (2 * n) != 0) {
        throw ParamError("NTT length " + std::to_string(n) + " does not divide (Q-1)/2");
    }
    psi_ = modq::pow(modq::kGenerator, (modq::kModulus - 1) / (2 * n));
    omega_ = modq::mul(psi_, psi_);
    n_inverse_ = modq::inverse(n);

    const auto bits = static_cast<unsigned>(std::countr_zero(n));
    const uint64_t psi_inv = modq::inverse(psi_);
    std::vector<uint64_t> fwd(n), inv(n);
    uint64_t p = 1, pi = 1;
    for (size_t i = 0; i < n; ++i) {
        fwd[i] = p;
        inv[i] = pi;
        p = modq::mul(p, psi_);
        pi = modq::mul(pi, psi_inv);
    }
    psi_rev_.resize(n);
    psi_inv_rev_.resize(n);
    for (size_t i = 0; i < n; ++i) {
        const size_t r = bit_reverse(i, bits);
        psi_rev_[i] = fwd[r];
        psi_inv_rev_[i] = inv[r];
    }
}

void ntt_forward_inplace(std::span<uint64_t> a, const NttTables& t) {
    require_length(a.size(), t);
    const size_t n = a.size();
    const uint64_t* roots = t.psi_powers().data();
    size_t span = n;
    for (size_t m = 1; m < n; m <<= 1) {
        span >>= 1;
        for (size_t i = 0; i < m; ++i) {
            const size_t j1 = 2 * i * span;
            const uint64_t s = roots[m + i];
            uint64_t* x = a.data() + j1;
            uint64_t* y = x + span;
            for (size_t j = 0; j < span; ++j) {
                const uint64_t u = x[j];
                const uint64_t v = modq::mul(y[j], s);
                x[j] = modq::add_lazy(u, v);
                y[j] = modq::sub_lazy(u, v);
            }
        }
    }
    for (auto& v : a) v = modq::canonical(v);
    ++thread_counters().ntt_forward;
}

void ntt_inverse_inplace(std::span<uint64_t> a, const NttTables& t) {
    detail::ntt_inverse_unscaled_inplace(a, t);
    const uint64_t scale = t.n_inverse();
    for (auto& v : a) v = modq::mul(v, scale);
}

void detail::ntt_inverse_unscaled_inplace(std::span<uint64_t> a, const NttTables& t) {
    require_length(a.size(), t);
    const size_t n = a.size();
    const uint64_t* roots = t.inverse_psi_powers().data();
    size_t span = 1;
    for (size_t m = n; m > 1; m >>= 1) {
        const size_t h = m >> 1;
        size_t j1 = 0;
        for (size_t i = 0; i < h; ++i) {
            const uint64_t s = roots[h + i];
            uint64_t* x = a.data() + j1;
            uint64_t* y = x + span;
            for (size_t j = 0; j < span; ++j) {
                const uint64_t u = x[j];
                const uint64_t v = y[j];
                x[j] = modq::add(u, v);
                y[j] = modq::mul(modq::sub(u, v), s);
            }
            j1 += 2 * span;
        }
        span <<= 1;
    }
    ++thread_counters().ntt_inverse;
}

std::vector<uint64_t> ntt_forward(std::span<const uint64_t> values, const NttTables& t) {
    std::vector<uint64_t> out(values.begin(), values.end());
    ntt_forward_inplace(out, t);
    return out;
}

std::vector<uint64_t> ntt_inverse(std::span<const uint64_t> values, const NttTables& t) {
    std::vector<uint64_t> out(values.begin(), values.end());
    ntt_inverse_inplace(out, t);
    return out;
}

void lift_torus(std::span<const Torus32> in, std::span<uint64_t> out) {
    if (in.size() != out.size()) throw DimensionError("lift_torus: length mismatch");
    for (size_t i = 0; i < in.size(); ++i) out[i] = in[i].raw;
}

void lift_int(std::span<const int32_t> in, std::span<uint64_t> out) {
    if (in.size() != out.size()) throw DimensionError("lift_int: length mismatch");
    for (size_t i = 0; i < in.size(); ++i) out[i] = modq::from_signed(in[i]);
}

void residues_to_torus(std::span<const uint64_t> in, std::span<Torus32> out) {
    if (in.size() != out.size()) throw DimensionError("residues_to_torus: length mismatch");
    for (size_t i = 0; i < in.size(); ++i) out[i] = Torus32(modq::to_torus_raw(in[i]));
}

TorusPolynomial negacyclic_mul(const IntPolynomial& p, const TorusPolynomial& q,
                               const NttTables& t) {
    if (p.size() != q.size()) throw DimensionError("negacyclic_mul: length mismatch");
    require_length(p.size(), t);
    const size_t n = p.size();
    std::vector<uint64_t> lp(n), lq(n);
    lift_int(p.coeffs(), lp);
    lift_torus(q.coeffs(), lq);
    ntt_forward_inplace(lp, t);
    ntt_forward_inplace(lq, t);
    for (size_t i = 0; i < n; ++i) lp[i] = modq::mul(lp[i], lq[i]);
    ntt_inverse_inplace(lp, t);
    TorusPolynomial out(n);
    residues_to_torus(lp, out.coeffs());
    return out;
}

}  // namespace arctyrex
