#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace arctyrex {

/// Element of the real torus R/Z stored as a 32-bit fixed-point fraction
/// raw / 2^32. Addition and negation wrap modulo 2^32.
struct Torus32 {
    uint32_t raw = 0;

    constexpr Torus32() = default;
    constexpr explicit Torus32(uint32_t r) : raw(r) {}

    /// Nearest torus element to x mod 1.
    static Torus32 from_double(double x) {
        const double frac = x - std::floor(x);
        return Torus32(static_cast<uint32_t>(
            static_cast<uint64_t>(std::llround(frac * 4294967296.0))));
    }

    /// Signed representative in [-1/2, 1/2).
    double to_double() const {
        return static_cast<double>(static_cast<int32_t>(raw)) / 4294967296.0;
    }

    /// The fraction 1 / denom of the torus, denom a power of two.
    static constexpr Torus32 fraction(uint32_t denom) {
        return Torus32(static_cast<uint32_t>((uint64_t{1} << 32) / denom));
    }

    constexpr Torus32& operator+=(Torus32 o) { raw += o.raw; return *this; }
    constexpr Torus32& operator-=(Torus32 o) { raw -= o.raw; return *this; }
    friend constexpr Torus32 operator+(Torus32 a, Torus32 b) { return Torus32(a.raw + b.raw); }
    friend constexpr Torus32 operator-(Torus32 a, Torus32 b) { return Torus32(a.raw - b.raw); }
    friend constexpr Torus32 operator-(Torus32 a) { return Torus32(0u - a.raw); }
    friend constexpr Torus32 operator*(int32_t k, Torus32 a) {
        return Torus32(static_cast<uint32_t>(k) * a.raw);
    }
    friend constexpr bool operator==(Torus32, Torus32) = default;
};

/// Polynomial over the torus modulo X^N + 1.
class TorusPolynomial {
public:
    TorusPolynomial() = default;
    explicit TorusPolynomial(size_t n) : coeffs_(n) {}
    explicit TorusPolynomial(std::vector<Torus32> coeffs) : coeffs_(std::move(coeffs)) {}

    size_t size() const { return coeffs_.size(); }
    Torus32& operator[](size_t i) { return coeffs_[i]; }
    const Torus32& operator[](size_t i) const { return coeffs_[i]; }
    std::span<Torus32> coeffs() { return coeffs_; }
    std::span<const Torus32> coeffs() const { return coeffs_; }

    TorusPolynomial& operator+=(const TorusPolynomial& o);
    TorusPolynomial& operator-=(const TorusPolynomial& o);
    friend TorusPolynomial operator+(TorusPolynomial a, const TorusPolynomial& b) { return a += b; }
    friend TorusPolynomial operator-(TorusPolynomial a, const TorusPolynomial& b) { return a -= b; }
    friend TorusPolynomial operator-(TorusPolynomial a);
    friend bool operator==(const TorusPolynomial&, const TorusPolynomial&) = default;

private:
    std::vector<Torus32> coeffs_;
};

/// Polynomial with small signed integer coefficients (gadget digits, keys).
class IntPolynomial {
public:
    IntPolynomial() = default;
    explicit IntPolynomial(size_t n) : coeffs_(n) {}
    explicit IntPolynomial(std::vector<int32_t> coeffs) : coeffs_(std::move(coeffs)) {}

    size_t size() const { return coeffs_.size(); }
    int32_t& operator[](size_t i) { return coeffs_[i]; }
    const int32_t& operator[](size_t i) const { return coeffs_[i]; }
    std::span<int32_t> coeffs() { return coeffs_; }
    std::span<const int32_t> coeffs() const { return coeffs_; }
    friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

private:
    std::vector<int32_t> coeffs_;
};

/// q * X^k mod (X^N + 1); k is taken modulo 2N.
TorusPolynomial poly_rotate(const TorusPolynomial& q, int64_t k);

/// Writes q * X^k - q into out, the blind-rotation step, without a temporary.
void poly_rotate_minus_self(std::span<const Torus32> q, int64_t k, std::span<Torus32> out);

/// Schoolbook O(N^2) negacyclic product p * q mod (X^N + 1) over Z/2^32.
TorusPolynomial negacyclic_mul_naive(const IntPolynomial& p, const TorusPolynomial& q);

}  // namespace arctyrex
