#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cuspdist/bigint.hpp"
#include "cuspdist/embed.hpp"
#include "cuspdist/polynomial.hpp"
#include "cuspdist/rational.hpp"

namespace cuspdist {

/// Shared context for Q(lambda_m): the minimal polynomial, the power
/// reduction rows, and a refinable certified interval for the real
/// embedding lambda_m = 2cos(pi/m).
class NumberField {
  public:
    static std::shared_ptr<const NumberField> get(int m) {
        static std::mutex mu;
        static std::map<int, std::shared_ptr<const NumberField>> registry;
        std::lock_guard<std::mutex> lock(mu);
        auto it = registry.find(m);
        if (it != registry.end()) return it->second;
        auto f = std::shared_ptr<const NumberField>(new NumberField(m));
        registry.emplace(m, f);
        return f;
    }

    int index() const { return m_; }
    int degree() const { return deg_; }
    const IntPoly& min_poly() const { return minpoly_; }

    /// Row i = coefficients of lambda^(deg+i) in the power basis (integers).
    const std::vector<std::vector<BigInt>>& reduction_rows() const { return reduction_; }

    /// Certified interval for lambda_m, width <= 2^-bits.
    RatInterval lambda(unsigned long bits) const {
        std::lock_guard<std::mutex> lock(mu_);
        if (bits <= cached_bits_ && cached_bits_ > 0) return cached_;
        unsigned long want = std::max<unsigned long>(bits, cached_bits_ ? cached_bits_ * 2 : 64);
        RatInterval fresh = lambda_interval(m_, want);
        cached_ = cached_bits_ ? cached_.intersect(fresh) : fresh;
        cached_bits_ = want;
        return cached_;
    }

  private:
    explicit NumberField(int m) : m_(m), minpoly_(minimal_polynomial(m)) {
        deg_ = minpoly_.degree();
        // lambda^deg = -(lower coefficients); higher powers by one more mul.
        std::vector<BigInt> row(deg_, BigInt(0));
        for (int i = 0; i < deg_; ++i) row[i] = -minpoly_.c[i];
        reduction_.push_back(row);
        for (int p = 1; p <= deg_ - 2; ++p) {
            std::vector<BigInt> next(deg_, BigInt(0));
            const std::vector<BigInt>& prev = reduction_.back();
            // multiply by lambda: shift up, reduce the overflow term
            for (int i = 0; i + 1 < deg_; ++i) next[i + 1] = prev[i];
            const BigInt& top = prev[deg_ - 1];
            if (!top.is_zero())
                for (int i = 0; i < deg_; ++i) next[i] += top * reduction_[0][i];
            reduction_.push_back(std::move(next));
        }
    }

    int m_;
    IntPoly minpoly_;
    int deg_;
    std::vector<std::vector<BigInt>> reduction_;
    mutable std::mutex mu_;
    mutable RatInterval cached_;
    mutable unsigned long cached_bits_ = 0;
};

/// Exact element of Q(lambda_m) in the power basis, with certified
/// comparisons against the real embedding.
class AlgebraicReal {
  public:
    AlgebraicReal() = default;

    explicit AlgebraicReal(int m) : AlgebraicReal(NumberField::get(m)) {}
    explicit AlgebraicReal(std::shared_ptr<const NumberField> f)
        : field_(std::move(f)), c_(field_->degree(), BigRational(0)) {}

    AlgebraicReal(std::shared_ptr<const NumberField> f, std::vector<BigRational> coeffs)
        : field_(std::move(f)), c_(std::move(coeffs)) {
        c_.resize(field_->degree(), BigRational(0));
        reduce_in_place();
    }

    static AlgebraicReal from_rational(int m, BigRational v) {
        AlgebraicReal a(m);
        a.c_[0] = std::move(v);
        a.reduce_in_place();
        return a;
    }

    static AlgebraicReal lambda(int m) {
        AlgebraicReal a(m);
        if (a.degree() == 1) {
            // lambda is itself rational (m = 3)
            a.c_[0] = BigRational(a.field_->reduction_rows()[0][0]);
        } else {
            a.c_[1] = BigRational(1);
        }
        return a;
    }

    const std::shared_ptr<const NumberField>& field() const { return field_; }
    int m() const { return field_->index(); }
    int degree() const { return field_->degree(); }
    const std::vector<BigRational>& coeffs() const { return c_; }

    bool is_zero() const {
        for (const auto& x : c_)
            if (!x.is_zero()) return false;
        return true;
    }

    bool is_rational() const {
        for (std::size_t i = 1; i < c_.size(); ++i)
            if (!c_[i].is_zero()) return false;
        return true;
    }
    const BigRational& rational_part() const { return c_[0]; }

    friend AlgebraicReal operator+(const AlgebraicReal& a, const AlgebraicReal& b) {
        a.check_same_field(b);
        AlgebraicReal r = a;
        for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += b.c_[i];
        return r;
    }
    friend AlgebraicReal operator-(const AlgebraicReal& a, const AlgebraicReal& b) {
        a.check_same_field(b);
        AlgebraicReal r = a;
        for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] -= b.c_[i];
        return r;
    }
    friend AlgebraicReal operator-(const AlgebraicReal& a) {
        AlgebraicReal r = a;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    friend AlgebraicReal operator*(const AlgebraicReal& a, const AlgebraicReal& b) {
        a.check_same_field(b);
        const int d = a.degree();
        std::vector<BigRational> conv(2 * d - 1, BigRational(0));
        for (int i = 0; i < d; ++i) {
            if (a.c_[i].is_zero()) continue;
            for (int j = 0; j < d; ++j) {
                if (b.c_[j].is_zero()) continue;
                conv[i + j] += a.c_[i] * b.c_[j];
            }
        }
        AlgebraicReal r(a.field_);
        const auto& rows = a.field_->reduction_rows();
        for (int i = 0; i < d; ++i) r.c_[i] = std::move(conv[i]);
        for (int p = d; p < 2 * d - 1; ++p) {
            if (conv[p].is_zero()) continue;
            const auto& row = rows[p - d];
            for (int i = 0; i < d; ++i) r.c_[i] += conv[p] * BigRational(row[i]);
        }
        return r;
    }

    friend AlgebraicReal operator*(const AlgebraicReal& a, const BigRational& s) {
        AlgebraicReal r = a;
        for (auto& x : r.c_) x *= s;
        return r;
    }

    AlgebraicReal& operator+=(const AlgebraicReal& o) { return *this = *this + o; }
    AlgebraicReal& operator-=(const AlgebraicReal& o) { return *this = *this - o; }
    AlgebraicReal& operator*=(const AlgebraicReal& o) { return *this = *this * o; }

    /// Multiplicative inverse via the extended Euclidean algorithm in Q[x].
    AlgebraicReal invert() const {
        if (is_zero()) throw std::domain_error("AlgebraicReal: invert(0)");
        if (is_rational()) return from_rational(m(), c_[0].reciprocal());
        // r0 = minpoly, r1 = this; maintain only the u-coefficients of r1.
        RatPoly r0 = RatPoly::from_int(field_->min_poly());
        RatPoly r1{c_};
        r1.trim();
        RatPoly u0;             // coefficient of `this` in r0: zero
        RatPoly u1{{BigRational(1)}};  // in r1: one
        while (r1.degree() > 0) {
            auto [q, rem] = divmod(r0, r1);
            RatPoly unew = u0 - q * u1;
            r0 = std::move(r1);
            r1 = std::move(rem);
            u0 = std::move(u1);
            u1 = std::move(unew);
            if (r1.c.empty()) throw std::logic_error("AlgebraicReal: gcd hit zero remainder");
        }
        // r1 is a nonzero constant g with u1 * this === g (mod minpoly)
        const BigRational g = r1.c[0];
        AlgebraicReal out(field_);
        for (std::size_t i = 0; i < u1.c.size() && i < out.c_.size(); ++i)
            out.c_[i] = u1.c[i] / g;
        if (u1.c.size() > out.c_.size()) {
            // reduce any overflow terms through the field
            AlgebraicReal acc(field_);
            for (std::size_t i = out.c_.size(); i < u1.c.size(); ++i) {
                AlgebraicReal mono = power_of_lambda(field_, i);
                acc += mono * (u1.c[i] / g);
            }
            out += acc;
        }
        return out;
    }

    friend bool operator==(const AlgebraicReal& a, const AlgebraicReal& b) {
        a.check_same_field(b);
        return a.c_ == b.c_;
    }

    int sign() const {
        if (is_rational()) return c_[0].sign();
        for (unsigned long bits = 32;; bits *= 2) {
            const int s = interval(bits).certain_sign();
            if (s != 0) return s;
        }
    }

    friend std::strong_ordering operator<=>(const AlgebraicReal& a, const AlgebraicReal& b) {
        if (a == b) return std::strong_ordering::equal;
        const int s = (a - b).sign();
        return s < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    }

    /// Certified interval containing the real embedding, width <= 2^-bits.
    RatInterval interval(unsigned long bits) const {
        if (is_rational()) return RatInterval(c_[0]);
        for (unsigned long lb = bits + 8;; lb *= 2) {
            RatInterval lam = field_->lambda(lb);
            RatInterval acc{BigRational(0)};
            for (std::size_t i = c_.size(); i-- > 0;) acc = acc * lam + RatInterval(c_[i]);
            if (acc.width() <= dyadic(BigInt(1), bits)) return acc;
        }
    }

    std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i].is_zero()) continue;
            if (!s.empty()) s += " + ";
            s += c_[i].to_string();
            if (i == 1) s += "*l";
            if (i > 1) s += "*l^" + std::to_string(i);
        }
        return s.empty() ? "0" : s;
    }

    std::size_t hash() const {
        std::size_t h = static_cast<std::size_t>(m());
        for (const auto& x : c_) h = h * 1000003u ^ x.hash();
        return h;
    }

  private:
    struct RatPoly {
        std::vector<BigRational> c;
        static RatPoly from_int(const IntPoly& p) {
            RatPoly r;
            r.c.reserve(p.c.size());
            for (const auto& x : p.c) r.c.emplace_back(x);
            return r;
        }
        int degree() const { return static_cast<int>(c.size()) - 1; }
        void trim() {
            while (!c.empty() && c.back().is_zero()) c.pop_back();
        }
        friend RatPoly operator-(const RatPoly& a, const RatPoly& b) {
            RatPoly r;
            r.c.resize(std::max(a.c.size(), b.c.size()), BigRational(0));
            for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
            for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] -= b.c[i];
            r.trim();
            return r;
        }
        friend RatPoly operator*(const RatPoly& a, const RatPoly& b) {
            if (a.c.empty() || b.c.empty()) return {};
            RatPoly r;
            r.c.assign(a.c.size() + b.c.size() - 1, BigRational(0));
            for (std::size_t i = 0; i < a.c.size(); ++i)
                for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
            r.trim();
            return r;
        }
        friend std::pair<RatPoly, RatPoly> divmod(RatPoly a, const RatPoly& b) {
            RatPoly q;
            if (a.degree() < b.degree()) return {q, a};
            q.c.assign(a.c.size() - b.c.size() + 1, BigRational(0));
            for (int i = a.degree() - b.degree(); i >= 0; --i) {
                BigRational coef = a.c[i + b.degree()] / b.c.back();
                if (coef.is_zero()) continue;
                for (std::size_t j = 0; j < b.c.size(); ++j) a.c[i + j] -= coef * b.c[j];
                q.c[i] = std::move(coef);
            }
            a.trim();
            q.trim();
            return {q, a};
        }
    };

    static AlgebraicReal power_of_lambda(const std::shared_ptr<const NumberField>& f,
                                         std::size_t p) {
        AlgebraicReal r(f);
        r.c_[0] = BigRational(1);
        AlgebraicReal lam = lambda(f->index());
        for (std::size_t i = 0; i < p; ++i) r *= lam;
        return r;
    }

    void check_same_field(const AlgebraicReal& o) const {
        if (!field_ || !o.field_ || field_->index() != o.field_->index())
            throw std::domain_error("AlgebraicReal: mixed number fields");
    }

    void reduce_in_place() {
        // representation is already degree-bounded; nothing beyond size check
        if (static_cast<int>(c_.size()) != field_->degree())
            throw std::logic_error("AlgebraicReal: bad coefficient length");
    }

    std::shared_ptr<const NumberField> field_;
    std::vector<BigRational> c_;
};

/// Exact floor of an element of Q(lambda_m). Integrality is decided
/// symbolically; otherwise the real embedding is refined until the
/// enclosing interval pins a single floor value.
inline BigInt certified_floor(const AlgebraicReal& v) {
    if (v.is_rational()) return v.rational_part().floor();
    for (unsigned long bits = 32;; bits *= 2) {
        auto [ok, f] = v.interval(bits).certain_floor();
        if (ok) return f;
    }
}

inline std::strong_ordering compare(const AlgebraicReal& a, const AlgebraicReal& b) {
    return a <=> b;
}

}  // namespace cuspdist
