#include "arctyrex/lwe.hpp"

#include <string>

#include "arctyrex/error.hpp"
#include "arctyrex/modq.hpp"

namespace arctyrex {

namespace {

void require_dim(size_t a, size_t b, const char* what) {
    if (a != b) {
        throw DimensionError(std::string(what) + ": dimension " + std::to_string(a) + " vs " +
                             std::to_string(b));
    }
}

}  // namespace

LweCiphertext LweCiphertext::trivial(size_t dim, Torus32 message) {
    LweCiphertext c(dim);
    c.b = message;
    return c;
}

LweCiphertext& LweCiphertext::operator+=(const LweCiphertext& o) {
    require_dim(dimension(), o.dimension(), "lwe add");
    for (size_t i = 0; i < a.size(); ++i) a[i] += o.a[i];
    b += o.b;
    return *this;
}

LweCiphertext& LweCiphertext::operator-=(const LweCiphertext& o) {
    require_dim(dimension(), o.dimension(), "lwe sub");
    for (size_t i = 0; i < a.size(); ++i) a[i] -= o.a[i];
    b -= o.b;
    return *this;
}

LweCiphertext operator-(LweCiphertext c) {
    for (auto& x : c.a) x = -x;
    c.b = -c.b;
    return c;
}

Torus32 phase(const LweKey& key, const LweCiphertext& ct) {
    require_dim(key.dimension(), ct.dimension(), "phase");
    uint32_t dot = 0;
    for (size_t i = 0; i < ct.a.size(); ++i) dot += ct.a[i].raw * static_cast<uint32_t>(key.bits[i]);
    return Torus32(ct.b.raw - dot);
}

LweCiphertext lwe_encrypt(const LweKey& key, Torus32 message, double noise_std, Rng& rng) {
    LweCiphertext c(key.dimension());
    uint32_t dot = 0;
    for (size_t i = 0; i < c.a.size(); ++i) {
        c.a[i] = rng.uniform_torus();
        dot += c.a[i].raw * static_cast<uint32_t>(key.bits[i]);
    }
    c.b = Torus32(dot) + message + rng.gaussian_torus(noise_std);
    return c;
}

LweCiphertext lwe_linear(std::initializer_list<LinearTerm> terms, Torus32 constant) {
    std::vector<int32_t> weights;
    std::vector<const LweCiphertext*> cts;
    for (const auto& t : terms) {
        weights.push_back(t.weight);
        cts.push_back(&t.ct);
    }
    return lwe_linear(weights, cts, constant);
}

LweCiphertext lwe_linear(std::span<const int32_t> weights, std::span<const LweCiphertext* const> cts,
                         Torus32 constant) {
    if (weights.size() != cts.size()) throw DimensionError("lwe_linear: weight/operand count mismatch");
    if (cts.empty()) throw DimensionError("lwe_linear: no operands");
    const size_t dim = cts[0]->dimension();
    LweCiphertext out = LweCiphertext::trivial(dim, constant);
    for (size_t k = 0; k < cts.size(); ++k) {
        const LweCiphertext& c = *cts[k];
        require_dim(dim, c.dimension(), "lwe_linear");
        const int32_t w = weights[k];
        for (size_t i = 0; i < dim; ++i) out.a[i] += w * c.a[i];
        out.b += w * c.b;
    }
    return out;
}

TlweCiphertext TlweCiphertext::trivial(const TorusPolynomial& message) {
    TlweCiphertext c(message.size());
    c.b = message;
    return c;
}

TorusPolynomial tlwe_phase(const IntPolynomial& key, const TlweCiphertext& ct, const NttTables& t) {
    require_dim(key.size(), ct.ring_dimension(), "tlwe_phase");
    return ct.b - negacyclic_mul(key, ct.a, t);
}

TlweCiphertext tlwe_encrypt(const IntPolynomial& key, const TorusPolynomial& message, double noise_std,
                            Rng& rng, const NttTables& t) {
    require_dim(key.size(), message.size(), "tlwe_encrypt");
    const size_t n = key.size();
    TlweCiphertext c(n);
    for (size_t i = 0; i < n; ++i) c.a[i] = rng.uniform_torus();
    c.b = negacyclic_mul(key, c.a, t);
    for (size_t i = 0; i < n; ++i) c.b[i] += message[i] + rng.gaussian_torus(noise_std);
    return c;
}

TgswCiphertext::TgswCiphertext(std::vector<TlweCiphertext> rows, const NttTables& t)
    : n_(t.size()), rows_(std::move(rows)) {
    if (rows_.empty() || rows_.size() % 2 != 0) throw DimensionError("TGSW needs 2l rows");
    spectrum_.resize(rows_.size() * 2 * n_);
    for (size_t r = 0; r < rows_.size(); ++r) {
        require_dim(rows_[r].ring_dimension(), n_, "TGSW row");
        for (size_t c = 0; c < 2; ++c) {
            std::span<uint64_t> dst(spectrum_.data() + (2 * r + c) * n_, n_);
            lift_torus((c == 0 ? rows_[r].a : rows_[r].b).coeffs(), dst);
            ntt_forward_inplace(dst, t);
            for (auto& v : dst) v = modq::mul(v, t.n_inverse());
        }
    }
}

TgswCiphertext tgsw_encrypt(const IntPolynomial& key, int32_t message, uint32_t bg_bits, uint32_t levels,
                            double noise_std, Rng& rng, const NttTables& t) {
    const size_t n = key.size();
    const TorusPolynomial zero(n);
    std::vector<TlweCiphertext> rows;
    rows.reserve(2 * levels);
    for (uint32_t c = 0; c < 2; ++c) {
        for (uint32_t j = 0; j < levels; ++j) {
            TlweCiphertext row = tlwe_encrypt(key, zero, noise_std, rng, t);
            // message * 2^(32 - (j+1) * bg_bits) on the constant coefficient.
            const Torus32 h(static_cast<uint32_t>(uint64_t{1} << (32 - (j + 1) * bg_bits)));
            (c == 0 ? row.a : row.b)[0] += message * h;
            rows.push_back(std::move(row));
        }
    }
    return TgswCiphertext(std::move(rows), t);
}

}  // namespace arctyrex
