#pragma once

#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "cuspdist/bigint.hpp"

namespace cuspdist {

/// Exact rational, always reduced, denominator > 0.
class BigRational {
  public:
    BigRational() : num_(0), den_(1) {}
    BigRational(long v) : num_(v), den_(1) {}
    BigRational(int v) : num_(static_cast<long>(v)), den_(1) {}
    BigRational(BigInt n) : num_(std::move(n)), den_(1) {}
    BigRational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }
    BigRational(long n, long d) : num_(n), den_(d) { normalize(); }

    /// Skips normalization; caller guarantees gcd(|n|, d) = 1 and d > 0.
    /// The orbit loops construct through here where reducedness is
    /// structurally preserved (Euclidean steps keep endpoints coprime).
    static BigRational from_reduced(BigInt n, BigInt d) {
        BigRational r;
        if (n.is_zero()) {
            return r;
        }
        r.num_ = std::move(n);
        r.den_ = std::move(d);
        return r;
    }

    /// Parses "p", "p/q" or a plain decimal like "0.35".
    static BigRational parse(std::string_view s) {
        const auto slash = s.find('/');
        if (slash != std::string_view::npos) {
            return BigRational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
        }
        const auto dot = s.find('.');
        if (dot != std::string_view::npos) {
            std::string digits = std::string(s.substr(0, dot)) + std::string(s.substr(dot + 1));
            const std::size_t frac = s.size() - dot - 1;
            BigInt den(1);
            for (std::size_t i = 0; i < frac; ++i) den *= 10;
            return BigRational(BigInt(digits), den);
        }
        return BigRational(BigInt(s), BigInt(1));
    }

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_integer() const { return den_.is_one(); }
    int sign() const { return num_.sign(); }

    friend BigRational operator+(const BigRational& a, const BigRational& b) {
        return BigRational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend BigRational operator-(const BigRational& a, const BigRational& b) {
        return BigRational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend BigRational operator*(const BigRational& a, const BigRational& b) {
        return BigRational(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend BigRational operator/(const BigRational& a, const BigRational& b) {
        if (b.is_zero()) throw std::domain_error("BigRational: division by zero");
        return BigRational(a.num_ * b.den_, a.den_ * b.num_);
    }
    friend BigRational operator-(const BigRational& a) {
        BigRational r = a;
        r.num_ = -r.num_;
        return r;
    }

    BigRational& operator+=(const BigRational& o) { return *this = *this + o; }
    BigRational& operator-=(const BigRational& o) { return *this = *this - o; }
    BigRational& operator*=(const BigRational& o) { return *this = *this * o; }
    BigRational& operator/=(const BigRational& o) { return *this = *this / o; }

    BigRational reciprocal() const {
        if (is_zero()) throw std::domain_error("BigRational: reciprocal of zero");
        // the representation is canonical, so swapping stays canonical
        if (num_.is_negative()) return from_reduced(-den_, -num_);
        return from_reduced(den_, num_);
    }

    friend bool operator==(const BigRational& a, const BigRational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const BigRational& a, const BigRational& b) {
        return (a.num_ * b.den_) <=> (b.num_ * a.den_);
    }

    BigInt floor() const { return floor_div(num_, den_); }

    BigRational abs() const { return num_.is_negative() ? -*this : *this; }

    std::string to_string() const {
        if (den_.is_one()) return num_.to_string();
        return num_.to_string() + "/" + den_.to_string();
    }

    std::size_t hash() const { return num_.hash() * 1000003u ^ den_.hash(); }

  private:
    void normalize() {
        if (den_.is_zero()) throw std::domain_error("BigRational: zero denominator");
        if (den_.is_negative()) {
            num_ = -num_;
            den_ = -den_;
        }
        if (num_.is_zero()) {
            den_ = BigInt(1);
            return;
        }
        BigInt g = gcd(num_, den_);
        if (!g.is_one()) {
            mpz_divexact(num_.raw(), num_.raw(), g.raw());
            mpz_divexact(den_.raw(), den_.raw(), g.raw());
        }
    }

    BigInt num_;
    BigInt den_;
};

inline double to_double(const BigRational& r) {
    if (r.is_zero()) return 0.0;
    return (r.sign() < 0 ? -1.0 : 1.0) *
           std::exp2(log2_abs(r.num()) - log2_abs(r.den()));
}

/// Natural log of |r|; r must be nonzero.
inline double log_abs(const BigRational& r) {
    return (log2_abs(r.num()) - log2_abs(r.den())) * 0.6931471805599453;
}

inline BigRational dyadic(BigInt k, unsigned long bits) { return BigRational(std::move(k), pow2(bits)); }

/// Closed rational interval [lo, hi]; the basic carrier for certified real work.
struct RatInterval {
    BigRational lo;
    BigRational hi;

    RatInterval() = default;
    RatInterval(BigRational point) : lo(point), hi(std::move(point)) {}
    RatInterval(BigRational l, BigRational h) : lo(std::move(l)), hi(std::move(h)) {
        if (lo > hi) throw std::invalid_argument("RatInterval: lo > hi");
    }

    /// Skips the order check; the comparison is a full cross-multiplication,
    /// far too expensive for per-step use on orbit-sized operands.
    static RatInterval unchecked(BigRational l, BigRational h) {
        RatInterval iv;
        iv.lo = std::move(l);
        iv.hi = std::move(h);
        return iv;
    }

    BigRational width() const { return hi - lo; }
    bool is_point() const { return lo == hi; }
    bool contains(const BigRational& v) const { return lo <= v && v <= hi; }
    bool contains_zero() const { return lo.sign() <= 0 && hi.sign() >= 0; }

    /// Sign of every point in the interval: +1, -1, or 0 when undetermined.
    int certain_sign() const {
        if (lo.sign() > 0) return 1;
        if (hi.sign() < 0) return -1;
        return 0;
    }

    RatInterval operator-() const { return unchecked(-hi, -lo); }

    friend RatInterval operator+(const RatInterval& a, const RatInterval& b) {
        return unchecked(a.lo + b.lo, a.hi + b.hi);
    }
    friend RatInterval operator-(const RatInterval& a, const RatInterval& b) {
        return unchecked(a.lo - b.hi, a.hi - b.lo);
    }
    friend RatInterval operator*(const RatInterval& a, const RatInterval& b) {
        BigRational c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
        BigRational mn = c[0], mx = c[0];
        for (int i = 1; i < 4; ++i) {
            if (c[i] < mn) mn = c[i];
            if (c[i] > mx) mx = c[i];
        }
        return unchecked(mn, mx);
    }

    /// Reciprocal; requires the interval to exclude zero.
    RatInterval reciprocal() const {
        if (contains_zero()) throw std::domain_error("RatInterval: reciprocal straddles zero");
        return unchecked(hi.reciprocal(), lo.reciprocal());
    }

    RatInterval intersect(const RatInterval& o) const {
        const BigRational& l = lo > o.lo ? lo : o.lo;
        const BigRational& h = hi < o.hi ? hi : o.hi;
        if (l > h) throw std::domain_error("RatInterval: empty intersection");
        return unchecked(l, h);
    }

    /// Floor shared by every point of the interval, if there is one.
    std::pair<bool, BigInt> certain_floor() const {
        BigInt f = lo.floor();
        if (f == hi.floor()) return {true, std::move(f)};
        return {false, BigInt(0)};
    }

    /// Widens endpoints outward onto the 2^-bits dyadic grid.
    RatInterval round_out(unsigned long bits) const {
        BigInt scale = pow2(bits);
        BigInt l = floor_div(lo.num() * scale, lo.den());
        BigInt h = -floor_div(-(hi.num() * scale), hi.den());  // ceiling
        return unchecked(BigRational(std::move(l), scale), BigRational(std::move(h), scale));
    }
};

}  // namespace cuspdist
