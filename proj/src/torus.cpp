#include "arctyrex/torus.hpp"

#include "arctyrex/counters.hpp"
#include "arctyrex/error.hpp"

namespace arctyrex {

OpCounters& thread_counters() {
    thread_local OpCounters counters;
    return counters;
}

namespace {

void require_same_size(size_t a, size_t b) {
    if (a != b) {
        throw DimensionError("polynomial length mismatch: " + std::to_string(a) + " vs " +
                             std::to_string(b));
    }
}

}  // namespace

TorusPolynomial& TorusPolynomial::operator+=(const TorusPolynomial& o) {
    require_same_size(size(), o.size());
    for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
}

TorusPolynomial& TorusPolynomial::operator-=(const TorusPolynomial& o) {
    require_same_size(size(), o.size());
    for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
}

TorusPolynomial operator-(TorusPolynomial a) {
    for (auto& c : a.coeffs_) c = -c;
    return a;
}

TorusPolynomial poly_rotate(const TorusPolynomial& q, int64_t k) {
    const auto n = static_cast<int64_t>(q.size());
    TorusPolynomial out(q.size());
    if (n == 0) return out;
    int64_t shift = k % (2 * n);
    if (shift < 0) shift += 2 * n;
    const bool negate = shift >= n;
    if (negate) shift -= n;
    for (int64_t i = 0; i < n; ++i) {
        const Torus32 c = negate ? -q[i] : q[i];
        const int64_t j = i + shift;
        if (j < n) {
            out[j] = c;
        } else {
            out[j - n] = -c;
        }
    }
    return out;
}

void poly_rotate_minus_self(std::span<const Torus32> q, int64_t k, std::span<Torus32> out) {
    require_same_size(q.size(), out.size());
    const auto n = static_cast<int64_t>(q.size());
    int64_t shift = k % (2 * n);
    if (shift < 0) shift += 2 * n;
    if (shift < n) {
        for (int64_t i = 0; i < shift; ++i) out[i] = -q[i - shift + n] - q[i];
        for (int64_t i = shift; i < n; ++i) out[i] = q[i - shift] - q[i];
    } else {
        shift -= n;
        for (int64_t i = 0; i < shift; ++i) out[i] = q[i - shift + n] - q[i];
        for (int64_t i = shift; i < n; ++i) out[i] = -q[i - shift] - q[i];
    }
}

TorusPolynomial negacyclic_mul_naive(const IntPolynomial& p, const TorusPolynomial& q) {
    require_same_size(p.size(), q.size());
    const size_t n = p.size();
    std::vector<uint32_t> acc(n, 0);
    for (size_t i = 0; i < n; ++i) {
        const auto pi = static_cast<uint32_t>(p[i]);
        if (pi == 0) continue;
        for (size_t j = 0; j < n; ++j) {
            const uint32_t term = pi * q[j].raw;
            if (i + j < n) {
                acc[i + j] += term;
            } else {
                acc[i + j - n] -= term;
            }
        }
    }
    TorusPolynomial out(n);
    for (size_t i = 0; i < n; ++i) out[i] = Torus32(acc[i]);
    return out;
}

}  // namespace arctyrex
