#pragma once

#include <cassert>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cuspdist/bigint.hpp"
#include "cuspdist/errors.hpp"
#include "cuspdist/field.hpp"
#include "cuspdist/mat2.hpp"
#include "cuspdist/rational.hpp"

namespace cuspdist {

enum class CFFamily { Regular, Alpha, Rosen };

/// Which continued fraction algorithm is running: regular (Gauss map),
/// Nakada alpha-family on [alpha-1, alpha), or a Rosen lambda_m fraction
/// on [-lambda/2, lambda/2).
class CFKind {
  public:
    static CFKind regular() { return CFKind(CFFamily::Regular, BigRational(1), 3); }
    static CFKind alpha(BigRational a) {
        if (a.sign() <= 0 || a > BigRational(1))
            throw std::domain_error("CFKind: alpha must lie in (0, 1]");
        return CFKind(CFFamily::Alpha, std::move(a), 3);
    }
    static CFKind rosen(int m) {
        if (m < 3) throw std::domain_error("CFKind: rosen index must be >= 3");
        return CFKind(CFFamily::Rosen, BigRational(0), m);
    }

    static CFKind parse(const std::string& text) {
        if (text == "regular") return regular();
        if (text.rfind("alpha:", 0) == 0) return alpha(BigRational::parse(text.substr(6)));
        if (text.rfind("rosen:", 0) == 0) return rosen(std::stoi(text.substr(6)));
        throw std::invalid_argument("CFKind: expected regular | alpha:A | rosen:M");
    }

    CFFamily family() const { return family_; }
    const BigRational& alpha_value() const { return alpha_; }
    int hecke_index() const { return m_; }

    bool signed_digits() const { return family_ != CFFamily::Regular; }

    std::string to_string() const {
        switch (family_) {
            case CFFamily::Regular: return "regular";
            case CFFamily::Alpha: return "alpha:" + alpha_.to_string();
            case CFFamily::Rosen: return "rosen:" + std::to_string(m_);
        }
        return "?";
    }

    friend bool operator==(const CFKind& a, const CFKind& b) {
        return a.family_ == b.family_ && a.alpha_ == b.alpha_ && a.m_ == b.m_;
    }

  private:
    CFKind(CFFamily f, BigRational a, int m) : family_(f), alpha_(std::move(a)), m_(m) {}
    CFFamily family_;
    BigRational alpha_;
    int m_;
};

/// One digit event: epsilon in {-1,+1} (always +1 for Regular) and the
/// positive digit (d_n, or r_n for Rosen).
struct CFStep {
    int sign = 1;
    BigInt digit;

    friend bool operator==(const CFStep& a, const CFStep& b) {
        return a.sign == b.sign && a.digit == b.digit;
    }
};

template <class V>
struct StepResult {
    CFStep step;
    V next;
};

namespace detail {

inline BigRational reciprocal_of(const BigRational& v) { return v.reciprocal(); }
inline AlgebraicReal reciprocal_of(const AlgebraicReal& v) { return v.invert(); }
inline BigInt floor_of(const BigRational& v) { return v.floor(); }
inline BigInt floor_of(const AlgebraicReal& v) { return certified_floor(v); }
inline int sign_of(const BigRational& v) { return v.sign(); }
inline int sign_of(const AlgebraicReal& v) { return v.sign(); }
inline bool zero_of(const BigRational& v) { return v.is_zero(); }
inline bool zero_of(const AlgebraicReal& v) { return v.is_zero(); }

inline BigRational make_value(const BigRational&, const BigRational& r) { return r; }
inline AlgebraicReal make_value(const AlgebraicReal& like, const BigRational& r) {
    return AlgebraicReal::from_rational(like.m(), r);
}

}  // namespace detail

/// One application of the digit map. Returns nullopt when x == 0 (the
/// expansion terminated). Preconditions: x lies in the kind's fundamental
/// interval; Rosen requires an AlgebraicReal of matching index.
template <class V>
std::optional<StepResult<V>> step(const CFKind& kind, const V& x) {
    if (detail::zero_of(x)) return std::nullopt;
    switch (kind.family()) {
        case CFFamily::Regular: {
            V recip = detail::reciprocal_of(x);
            BigInt d = detail::floor_of(recip);
            if (d < 1) throw std::domain_error("step: x outside [0,1)");
            V next = recip - detail::make_value(x, BigRational(d));
            return StepResult<V>{CFStep{+1, std::move(d)}, std::move(next)};
        }
        case CFFamily::Alpha: {
            const int eps = detail::sign_of(x);
            V recip = detail::reciprocal_of(x);
            if (eps < 0) recip = -recip;
            BigInt d = detail::floor_of(recip + detail::make_value(x, BigRational(1) - kind.alpha_value()));
            if (d < 1) throw std::domain_error("step: x outside the alpha interval");
            V next = recip - detail::make_value(x, BigRational(d));
            return StepResult<V>{CFStep{eps, std::move(d)}, std::move(next)};
        }
        case CFFamily::Rosen: {
            if constexpr (std::is_same_v<V, AlgebraicReal>) {
                if (x.m() != kind.hecke_index())
                    throw std::domain_error("step: Rosen index mismatch");
                const int eps = x.sign();
                AlgebraicReal recip = x.invert();
                if (eps < 0) recip = -recip;
                AlgebraicReal lam = AlgebraicReal::lambda(kind.hecke_index());
                AlgebraicReal scaled = recip * lam.invert() +
                    AlgebraicReal::from_rational(x.m(), BigRational(1, 2));
                BigInt r = certified_floor(scaled);
                if (r < 1) throw std::domain_error("step: x outside the Rosen interval");
                AlgebraicReal next = recip - lam * BigRational(r);
                return StepResult<V>{CFStep{eps, std::move(r)}, std::move(next)};
            } else {
                throw std::domain_error("step: Rosen needs an AlgebraicReal orbit value");
            }
        }
    }
    throw std::logic_error("step: unreachable");
}

/// The exact (p_{n-1}, p_n, q_{n-1}, q_n) state of the approximant
/// recurrences; Ring is BigInt for Regular/Alpha and AlgebraicReal
/// (integer coefficients) for Rosen.
template <class Ring>
struct ApproximantPair {
    Ring p_prev, p_cur, q_prev, q_cur;
    long n = 0;

    bool determinant_ok() const {
        Ring det = p_prev * q_cur - q_prev * p_cur;
        return det == ring_one() || det == -ring_one();
    }

    Ring ring_one() const;
};

template <>
inline BigInt ApproximantPair<BigInt>::ring_one() const {
    return BigInt(1);
}
template <>
inline AlgebraicReal ApproximantPair<AlgebraicReal>::ring_one() const {
    return AlgebraicReal::from_rational(p_prev.m(), BigRational(1));
}

inline ApproximantPair<BigInt> initial_approximants() {
    return {BigInt(1), BigInt(0), BigInt(0), BigInt(1), 0};
}
inline ApproximantPair<AlgebraicReal> initial_approximants(int m) {
    auto c = [m](long v) { return AlgebraicReal::from_rational(m, BigRational(v)); };
    return {c(1), c(0), c(0), c(1), 0};
}

/// Digit coefficient entering the recurrence: d for Regular/Alpha,
/// lambda * r for Rosen.
inline BigInt digit_coefficient(const CFKind& kind, const CFStep& s, const BigInt&) {
    if (kind.family() == CFFamily::Rosen)
        throw std::domain_error("digit_coefficient: Rosen needs the field ring");
    return s.digit;
}
inline AlgebraicReal digit_coefficient(const CFKind& kind, const CFStep& s,
                                       const AlgebraicReal& like) {
    if (kind.family() == CFFamily::Rosen)
        return AlgebraicReal::lambda(kind.hecke_index()) * BigRational(s.digit);
    return AlgebraicReal::from_rational(like.m(), BigRational(s.digit));
}

/// p_n = coeff p_{n-1} + eps p_{n-2}, same for q; preserves |det| = 1.
template <class Ring>
ApproximantPair<Ring> push_approximant(const ApproximantPair<Ring>& st, const CFStep& s,
                                       const CFKind& kind) {
    Ring coeff = digit_coefficient(kind, s, st.p_cur);
    Ring p = coeff * st.p_cur;
    Ring q = coeff * st.q_cur;
    if (s.sign > 0) {
        p += st.p_prev;
        q += st.q_prev;
    } else {
        p -= st.p_prev;
        q -= st.q_prev;
    }
    return {st.p_cur, std::move(p), st.q_cur, std::move(q), st.n + 1};
}

/// Product of the per-digit matrices ((0, eps), (1, coeff)); its columns
/// are ((p_{n-1}, q_{n-1}), (p_n, q_n)).
template <class Ring>
Mat2<Ring> matrix_form(std::span<const CFStep> steps, const CFKind& kind, const Ring& one) {
    if (steps.empty()) throw std::invalid_argument("matrix_form: empty digit sequence");
    Ring zero = one - one;
    Mat2<Ring> acc{one, zero, zero, one};
    for (const CFStep& s : steps) {
        Ring coeff = digit_coefficient(kind, s, one);
        Ring eps = s.sign > 0 ? one : -one;
        Mat2<Ring> factor{zero, std::move(eps), one, std::move(coeff)};
        acc = acc * factor;
    }
    return acc;
}

/// Exact bottom-up evaluation of a finite prefix:
/// eps_1 / (c_1 + eps_2 / (c_2 + ...)). Value is BigRational for
/// Regular/Alpha and AlgebraicReal for Rosen.
template <class Value>
Value evaluate_cf(std::span<const CFStep> steps, const CFKind& kind, const Value& one) {
    if (steps.empty()) throw std::invalid_argument("evaluate_cf: empty digit sequence");
    auto coeff_of = [&](const CFStep& s) -> Value {
        if constexpr (std::is_same_v<Value, AlgebraicReal>) {
            return digit_coefficient(kind, s, one);
        } else {
            return Value(digit_coefficient(kind, s, BigInt(1)));
        }
    };
    Value acc = coeff_of(steps.back());
    for (std::size_t i = steps.size() - 1; i-- > 0;) {
        if (detail::zero_of(acc))
            throw degenerate_prefix("evaluate_cf: zero tail where a reciprocal is needed");
        Value inv = detail::reciprocal_of(acc);
        if (steps[i + 1].sign < 0) inv = -inv;
        acc = coeff_of(steps[i]) + inv;
    }
    if (detail::zero_of(acc))
        throw degenerate_prefix("evaluate_cf: zero tail where a reciprocal is needed");
    Value out = detail::reciprocal_of(acc);
    if (steps[0].sign < 0) out = -out;
    return out;
}

/// One step of the planar natural extension: x' as in step(), and
/// y' = 1 / (coeff + eps*y). For Regular/Alpha, y in [0,1] maps into (0,1].
template <class V, class Y>
std::optional<std::pair<StepResult<V>, Y>> planar_step(const CFKind& kind, const V& x, const Y& y) {
    auto r = step(kind, x);
    if (!r) return std::nullopt;
    Y coeff = [&]() -> Y {
        if constexpr (std::is_same_v<Y, AlgebraicReal>) {
            return digit_coefficient(kind, r->step, y);
        } else {
            return Y(digit_coefficient(kind, r->step, BigInt(1)));
        }
    }();
    Y den = r->step.sign > 0 ? coeff + y : coeff - y;
    if (detail::zero_of(den))
        throw singular_input("planar_step: vanishing denominator in the y update");
    Y ynext = detail::reciprocal_of(den);
    if (kind.family() != CFFamily::Rosen) {
        assert(detail::sign_of(ynext) > 0);
    }
    return std::make_pair(std::move(*r), std::move(ynext));
}

/// Exact membership test for the kind's fundamental interval.
inline bool in_fundamental_interval(const CFKind& kind, const BigRational& x) {
    switch (kind.family()) {
        case CFFamily::Regular: return x.sign() >= 0 && x < BigRational(1);
        case CFFamily::Alpha:
            return x >= kind.alpha_value() - BigRational(1) && x < kind.alpha_value();
        case CFFamily::Rosen:
            throw std::domain_error("in_fundamental_interval: Rosen bounds are algebraic");
    }
    return false;
}

inline bool in_fundamental_interval(const CFKind& kind, const AlgebraicReal& x) {
    if (kind.family() == CFFamily::Rosen) {
        AlgebraicReal half = AlgebraicReal::lambda(kind.hecke_index()) * BigRational(1, 2);
        return compare(x, -half) != std::strong_ordering::less &&
               compare(x, half) == std::strong_ordering::less;
    }
    AlgebraicReal lo = AlgebraicReal::from_rational(
        x.m(), kind.family() == CFFamily::Regular ? BigRational(0)
                                                  : kind.alpha_value() - BigRational(1));
    AlgebraicReal hi = AlgebraicReal::from_rational(
        x.m(), kind.family() == CFFamily::Regular ? BigRational(1) : kind.alpha_value());
    return compare(x, lo) != std::strong_ordering::less &&
           compare(x, hi) == std::strong_ordering::less;
}

}  // namespace cuspdist
