#pragma once

#include <gmp.h>

#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace cuspdist {

/// Arbitrary-precision signed integer, value semantics over GMP's mpz.
class BigInt {
  public:
    BigInt() { mpz_init(z_); }
    BigInt(long v) { mpz_init_set_si(z_, v); }
    BigInt(int v) : BigInt(static_cast<long>(v)) {}
    BigInt(unsigned long v) { mpz_init_set_ui(z_, v); }

    explicit BigInt(std::string_view decimal) {
        if (mpz_init_set_str(z_, std::string(decimal).c_str(), 10) != 0) {
            mpz_clear(z_);
            throw std::invalid_argument("BigInt: bad decimal literal");
        }
    }

    BigInt(const BigInt& o) { mpz_init_set(z_, o.z_); }
    BigInt(BigInt&& o) noexcept {
        mpz_init(z_);
        mpz_swap(z_, o.z_);
    }
    BigInt& operator=(const BigInt& o) {
        if (this != &o) mpz_set(z_, o.z_);
        return *this;
    }
    BigInt& operator=(BigInt&& o) noexcept {
        mpz_swap(z_, o.z_);
        return *this;
    }
    ~BigInt() { mpz_clear(z_); }

    // Raw handle, for the few routines that want in-place GMP calls.
    mpz_ptr raw() { return z_; }
    mpz_srcptr raw() const { return z_; }

    bool is_zero() const { return mpz_sgn(z_) == 0; }
    bool is_one() const { return mpz_cmp_ui(z_, 1) == 0; }
    bool is_negative() const { return mpz_sgn(z_) < 0; }
    bool is_odd() const { return mpz_odd_p(z_); }
    int sign() const { return mpz_sgn(z_); }

    bool fits_long() const { return mpz_fits_slong_p(z_); }
    long to_long() const {
        if (!fits_long()) throw std::overflow_error("BigInt: does not fit in long");
        return mpz_get_si(z_);
    }

    std::size_t bit_length() const { return is_zero() ? 0 : mpz_sizeinbase(z_, 2); }

    friend BigInt operator+(const BigInt& a, const BigInt& b) {
        BigInt r;
        mpz_add(r.z_, a.z_, b.z_);
        return r;
    }
    friend BigInt operator-(const BigInt& a, const BigInt& b) {
        BigInt r;
        mpz_sub(r.z_, a.z_, b.z_);
        return r;
    }
    friend BigInt operator*(const BigInt& a, const BigInt& b) {
        BigInt r;
        mpz_mul(r.z_, a.z_, b.z_);
        return r;
    }
    friend BigInt operator-(const BigInt& a) {
        BigInt r;
        mpz_neg(r.z_, a.z_);
        return r;
    }

    BigInt& operator+=(const BigInt& o) {
        mpz_add(z_, z_, o.z_);
        return *this;
    }
    BigInt& operator-=(const BigInt& o) {
        mpz_sub(z_, z_, o.z_);
        return *this;
    }
    BigInt& operator*=(const BigInt& o) {
        mpz_mul(z_, z_, o.z_);
        return *this;
    }
    BigInt& operator*=(long v) {
        mpz_mul_si(z_, z_, v);
        return *this;
    }

    /// Truncated quotient (rounds toward zero), like C integer division.
    friend BigInt operator/(const BigInt& a, const BigInt& b) {
        if (b.is_zero()) throw std::domain_error("BigInt: division by zero");
        BigInt r;
        mpz_tdiv_q(r.z_, a.z_, b.z_);
        return r;
    }
    friend BigInt operator%(const BigInt& a, const BigInt& b) {
        if (b.is_zero()) throw std::domain_error("BigInt: division by zero");
        BigInt r;
        mpz_tdiv_r(r.z_, a.z_, b.z_);
        return r;
    }

    friend bool operator==(const BigInt& a, const BigInt& b) { return mpz_cmp(a.z_, b.z_) == 0; }
    friend std::strong_ordering operator<=>(const BigInt& a, const BigInt& b) {
        const int c = mpz_cmp(a.z_, b.z_);
        return c < 0 ? std::strong_ordering::less
               : c > 0 ? std::strong_ordering::greater
                       : std::strong_ordering::equal;
    }
    friend bool operator==(const BigInt& a, long b) { return mpz_cmp_si(a.z_, b) == 0; }
    friend std::strong_ordering operator<=>(const BigInt& a, long b) {
        const int c = mpz_cmp_si(a.z_, b);
        return c < 0 ? std::strong_ordering::less
               : c > 0 ? std::strong_ordering::greater
                       : std::strong_ordering::equal;
    }

    std::string to_string() const {
        char* s = mpz_get_str(nullptr, 10, z_);
        std::string out(s);
        void (*freefn)(void*, std::size_t);
        mp_get_memory_functions(nullptr, nullptr, &freefn);
        freefn(s, out.size() + 1);
        return out;
    }

    std::size_t hash() const {
        std::size_t h = static_cast<std::size_t>(mpz_sgn(z_)) + 0x9e3779b97f4a7c15ULL;
        const std::size_t limbs = mpz_size(z_);
        for (std::size_t i = 0; i < limbs; ++i) {
            h ^= static_cast<std::size_t>(mpz_getlimbn(z_, i)) + 0x9e3779b97f4a7c15ULL + (h << 6) +
                 (h >> 2);
        }
        return h;
    }

  private:
    mpz_t z_;
};

inline BigInt abs(const BigInt& a) {
    BigInt r;
    mpz_abs(r.raw(), a.raw());
    return r;
}

inline BigInt gcd(const BigInt& a, const BigInt& b) {
    BigInt r;
    mpz_gcd(r.raw(), a.raw(), b.raw());
    return r;
}

/// Floor quotient and remainder, remainder has the divisor's sign.
inline std::pair<BigInt, BigInt> floor_divmod(const BigInt& a, const BigInt& b) {
    if (b.is_zero()) throw std::domain_error("BigInt: division by zero");
    std::pair<BigInt, BigInt> qr;
    mpz_fdiv_qr(qr.first.raw(), qr.second.raw(), a.raw(), b.raw());
    return qr;
}

inline BigInt floor_div(const BigInt& a, const BigInt& b) {
    if (b.is_zero()) throw std::domain_error("BigInt: division by zero");
    BigInt q;
    mpz_fdiv_q(q.raw(), a.raw(), b.raw());
    return q;
}

inline unsigned long mod_ui(const BigInt& a, unsigned long m) {
    if (m == 0) throw std::domain_error("BigInt: zero modulus");
    return mpz_fdiv_ui(a.raw(), m);
}

inline BigInt pow2(unsigned long k) {
    BigInt r;
    mpz_setbit(r.raw(), k);
    return r;
}

inline BigInt shl(const BigInt& a, unsigned long k) {
    BigInt r;
    mpz_mul_2exp(r.raw(), a.raw(), k);
    return r;
}

/// Extended gcd: returns (g, u, v) with u*a + v*b = g >= 0.
inline std::tuple<BigInt, BigInt, BigInt> extended_gcd(const BigInt& a, const BigInt& b) {
    std::tuple<BigInt, BigInt, BigInt> t;
    mpz_gcdext(std::get<0>(t).raw(), std::get<1>(t).raw(), std::get<2>(t).raw(), a.raw(), b.raw());
    return t;
}

/// log2 of |a|, accurate to ~1e-15 relative; a must be nonzero.
inline double log2_abs(const BigInt& a) {
    long exp2 = 0;
    const double d = mpz_get_d_2exp(&exp2, a.raw());
    return std::log2(std::fabs(d)) + static_cast<double>(exp2);
}

inline double to_double(const BigInt& a) { return mpz_get_d(a.raw()); }

}  // namespace cuspdist

template <>
struct std::hash<cuspdist::BigInt> {
    std::size_t operator()(const cuspdist::BigInt& v) const noexcept { return v.hash(); }
};
