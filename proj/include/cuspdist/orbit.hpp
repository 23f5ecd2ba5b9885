#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "cuspdist/adaptive.hpp"
#include "cuspdist/cf.hpp"
#include "cuspdist/errors.hpp"
#include "cuspdist/field.hpp"

namespace cuspdist {

/// Exact orbit of a BigRational or AlgebraicReal under the digit map.
/// Rational points terminate (the orbit reaches 0); termination is a
/// normal end-of-stream, not an error.
template <class V>
class ExactOrbit {
  public:
    ExactOrbit(CFKind kind, V x0) : kind_(std::move(kind)), x_(std::move(x0)) {}

    std::optional<CFStep> next() {
        if (!x_) return std::nullopt;
        auto r = step(kind_, *x_);
        if (!r) {
            x_.reset();
            return std::nullopt;
        }
        x_ = std::move(r->next);
        return std::move(r->step);
    }

    const std::optional<V>& current() const { return x_; }
    const CFKind& kind() const { return kind_; }

  private:
    CFKind kind_;
    std::optional<V> x_;
};

/// Certified digit stream of an AdaptiveReal orbit.
///
/// The enclosing interval of x_k is iterated directly: a digit is emitted
/// only when every point of the interval produces the same (eps, digit).
/// On ambiguity the input precision grows and the emitted prefix is
/// replayed from the tighter seed (nesting guarantees identical digits).
///
/// Regular/Alpha intervals are exact rationals whose endpoints shrink
/// Euclid-style, so every step is linear-time in the remaining size.
/// Rosen intervals are integer fixed-point at a scale that tracks the
/// certified width, with lambda_m enclosed at matching precision.
class AdaptiveOrbit {
  public:
    AdaptiveOrbit(CFKind kind, AdaptiveReal x, std::size_t digits_hint,
                  unsigned long per_digit_cap_bits = kDefaultFloorCapBits)
        : kind_(std::move(kind)), input_(std::move(x)), cap_(per_digit_cap_bits) {
        bits_ = static_cast<unsigned long>(bits_per_digit(kind_) *
                                           static_cast<double>(digits_hint)) +
                1024;
        reseed();
    }

    std::optional<CFStep> next() {
        if (terminated_) return std::nullopt;
        const unsigned long anchor = bits_;
        for (;;) {
            Outcome o = try_step();
            if (o.terminated) {
                terminated_ = true;
                return std::nullopt;
            }
            if (o.ok) {
                commit(o);
                emitted_.push_back(o.step);
                return emitted_.back();
            }
            grow_bits(anchor);
            rebuild();
        }
    }

    /// Enclosure of the current orbit point (after the emitted digits).
    RatInterval current_interval() const {
        if (kind_.family() != CFFamily::Rosen) return cur_;
        return RatInterval::unchecked(dyadic(flo_, fbits_), dyadic(fhi_, fbits_));
    }

    std::size_t digits_emitted() const { return emitted_.size(); }
    std::size_t refinements() const { return refinements_; }
    unsigned long input_bits() const { return bits_; }

  private:
    struct Outcome {
        bool ok = false;
        bool terminated = false;
        CFStep step;
        // regular/alpha
        RatInterval next;
        // rosen fixed point
        unsigned long fbits = 0;
        BigInt flo, fhi;
    };

    // measured Lyapunov bit-consumption rates plus ~8-15% headroom;
    // shortfalls are caught by the refine-and-replay path anyway
    static double bits_per_digit(const CFKind& kind) {
        switch (kind.family()) {
            case CFFamily::Regular: return 3.7;
            case CFFamily::Alpha:
                return kind.alpha_value() == BigRational(1) ? 3.7 : 5.3;
            case CFFamily::Rosen: return 4.5;
        }
        return 6.0;
    }

    void reseed() {
        RatInterval iv = input_.at(bits_);
        if (kind_.family() != CFFamily::Rosen) {
            cur_ = std::move(iv);
            return;
        }
        fbits_ = bits_ + 64;
        flo_ = floor_div(shl(iv.lo.num(), fbits_), iv.lo.den());
        fhi_ = -floor_div(shl(-iv.hi.num(), fbits_), iv.hi.den());  // ceiling
    }

    void commit(Outcome& o) {
        if (kind_.family() != CFFamily::Rosen) {
            cur_ = std::move(o.next);
        } else {
            fbits_ = o.fbits;
            flo_ = std::move(o.flo);
            fhi_ = std::move(o.fhi);
        }
    }

    void grow_bits(unsigned long anchor) {
        unsigned long next = bits_ + std::max<unsigned long>(bits_ / 2, 256);
        if (next - anchor > cap_) {
            if (bits_ - anchor >= cap_)
                throw undecidable_floor(
                    "AdaptiveOrbit: digit undecidable after " + std::to_string(cap_) +
                    " extra input bits (step " + std::to_string(emitted_.size()) + ")");
            next = anchor + cap_;
        }
        bits_ = next;
        ++refinements_;
    }

    void rebuild() {
        for (int rounds = 0;; ++rounds) {
            if (rounds > 64) throw std::logic_error("AdaptiveOrbit: replay failed to stabilize");
            reseed();
            bool redo = false;
            for (std::size_t i = 0; i < emitted_.size(); ++i) {
                Outcome o = try_step();
                if (!o.ok) {
                    bits_ += std::max<unsigned long>(bits_ / 2, 256);
                    ++refinements_;
                    redo = true;
                    break;
                }
                if (!(o.step == emitted_[i]))
                    throw std::logic_error("AdaptiveOrbit: replay digit mismatch");
                commit(o);
            }
            if (!redo) return;
        }
    }

    Outcome try_step() {
        switch (kind_.family()) {
            case CFFamily::Regular: return step_regular(cur_);
            case CFFamily::Alpha: return step_alpha(cur_);
            case CFFamily::Rosen: return step_rosen();
        }
        throw std::logic_error("AdaptiveOrbit: unreachable");
    }

    Outcome step_regular(const RatInterval& iv) const {
        Outcome out;
        if (iv.is_point() && iv.lo.is_zero()) {
            out.terminated = true;
            return out;
        }
        if (iv.lo.sign() <= 0) return out;  // ambiguous near 0
        // 1/x in [den_hi/num_hi, den_lo/num_lo]
        BigInt d_small = floor_div(iv.hi.den(), iv.hi.num());
        BigInt d_large = floor_div(iv.lo.den(), iv.lo.num());
        if (!(d_small == d_large)) return out;
        out.ok = true;
        out.step = CFStep{+1, d_small};
        BigRational lo2 =
            BigRational::from_reduced(iv.hi.den() - d_small * iv.hi.num(), iv.hi.num());
        BigRational hi2 =
            BigRational::from_reduced(iv.lo.den() - d_small * iv.lo.num(), iv.lo.num());
        out.next = RatInterval::unchecked(std::move(lo2), std::move(hi2));
        return out;
    }

    Outcome step_alpha(const RatInterval& iv) const {
        Outcome out;
        if (iv.is_point() && iv.lo.is_zero()) {
            out.terminated = true;
            return out;
        }
        const int eps = iv.certain_sign();
        if (eps == 0) return out;
        // |1/x| as an increasing interval [a_lo, a_hi]
        BigRational a_lo, a_hi;
        if (eps > 0) {
            a_lo = BigRational::from_reduced(iv.hi.den(), iv.hi.num());
            a_hi = BigRational::from_reduced(iv.lo.den(), iv.lo.num());
        } else {
            a_lo = BigRational::from_reduced(iv.lo.den(), -iv.lo.num());
            a_hi = BigRational::from_reduced(iv.hi.den(), -iv.hi.num());
        }
        // d = floor(a + 1 - alpha), monotone in a
        const BigRational shift = BigRational(1) - kind_.alpha_value();
        auto shifted_floor = [&shift](const BigRational& a) {
            return floor_div(a.num() * shift.den() + shift.num() * a.den(),
                             a.den() * shift.den());
        };
        BigInt d_min = shifted_floor(a_lo);
        BigInt d_max = shifted_floor(a_hi);
        if (!(d_min == d_max)) return out;
        out.ok = true;
        out.step = CFStep{eps, d_min};
        BigRational lo2 = BigRational::from_reduced(a_lo.num() - d_min * a_lo.den(), a_lo.den());
        BigRational hi2 = BigRational::from_reduced(a_hi.num() - d_min * a_hi.den(), a_hi.den());
        out.next = RatInterval::unchecked(std::move(lo2), std::move(hi2));
        return out;
    }

    // Rosen fixed point: value*2^fbits_ lies in [flo_, fhi_].
    Outcome step_rosen() {
        Outcome out;
        if (flo_.is_zero() && fhi_.is_zero()) {
            out.terminated = true;
            return out;
        }
        int eps;
        if (flo_.sign() > 0) eps = +1;
        else if (fhi_.sign() < 0) eps = -1;
        else return out;  // sign not certified

        BigInt plo = eps > 0 ? flo_ : -fhi_;  // positive magnitude bounds
        BigInt phi = eps > 0 ? fhi_ : -flo_;

        // a = 1/|x| at a scale G matched to a's certified width:
        // width(a) ~ width(x) / x^2, i.e. -log2 width(a) =
        // (fbits - width_bits) - 2 (fbits - value_bits)
        const unsigned long value_bits = plo.bit_length();  // ~ fbits_ + log2 x
        BigInt w = phi - plo;
        const unsigned long width_bits = w.is_zero() ? 1 : w.bit_length();
        long g = 2 * static_cast<long>(value_bits) - static_cast<long>(fbits_) -
                 static_cast<long>(width_bits) + 64;
        if (g < 64) g = 64;
        const unsigned long G = static_cast<unsigned long>(g);

        BigInt a_lo = floor_div(pow2(fbits_ + G), phi);
        BigInt a_hi = -floor_div(-pow2(fbits_ + G), plo);  // ceiling

        // digit r = floor(a / lambda + 1/2); both divisions have a small
        // quotient, so they cost one linear pass each
        refresh_lambda(G + 96);
        BigInt r_lo = floor_div(shl(a_lo, lam_bits_ + 1) + shl(lam_hi_, G),
                                shl(lam_hi_, G + 1));
        BigInt r_hi = floor_div(shl(a_hi, lam_bits_ + 1) + shl(lam_lo_, G),
                                shl(lam_lo_, G + 1));
        if (!(r_lo == r_hi)) return out;
        if (r_lo < 1) return out;  // input outside the interval; force refinement
        if (r_lo.bit_length() > 24) {
            // gigantic digit: redo with lambda precise enough for r*lambda
            refresh_lambda(G + 96 + r_lo.bit_length());
            r_lo = floor_div(shl(a_lo, lam_bits_ + 1) + shl(lam_hi_, G), shl(lam_hi_, G + 1));
            r_hi = floor_div(shl(a_hi, lam_bits_ + 1) + shl(lam_lo_, G), shl(lam_lo_, G + 1));
            if (!(r_lo == r_hi)) return out;
        }

        // x' = a - r lambda at scale G, rounded outward
        const unsigned long down = lam_bits_ - G;
        BigInt xlo = a_lo + floor_div(-(r_lo * lam_hi_), pow2(down));  // a_lo - ceil(...)
        BigInt xhi = a_hi - floor_div(r_lo * lam_lo_, pow2(down));

        // rescale so the integers stay ~64 bits above the certified width
        BigInt w2 = xhi - xlo;
        const unsigned long w2bits = w2.is_zero() ? 1 : w2.bit_length();
        unsigned long fnew = G;
        if (w2bits > 80 && G > 64) {
            const unsigned long drop = std::min<unsigned long>(w2bits - 64, G - 64);
            fnew = G - drop;
            BigInt scale = pow2(drop);
            xlo = floor_div(xlo, scale);
            xhi = -floor_div(-xhi, scale);
        }
        out.ok = true;
        out.step = CFStep{eps, r_lo};
        out.fbits = fnew;
        out.flo = std::move(xlo);
        out.fhi = std::move(xhi);
        return out;
    }

    void refresh_lambda(unsigned long bits) {
        if (lam_bits_ >= bits && lam_bits_ > 0) return;
        const unsigned long want = std::max(bits, lam_bits_ ? lam_bits_ * 2 : 256);
        RatInterval lam = NumberField::get(kind_.hecke_index())->lambda(want);
        // endpoints are dyadic; renormalize onto the 2^-want grid
        lam_lo_ = floor_div(shl(lam.lo.num(), want), lam.lo.den());
        lam_hi_ = -floor_div(shl(-lam.hi.num(), want), lam.hi.den());
        lam_bits_ = want;
    }

    CFKind kind_;
    AdaptiveReal input_;
    unsigned long cap_;
    unsigned long bits_ = 0;
    // regular/alpha state
    RatInterval cur_;
    // rosen fixed-point state
    unsigned long fbits_ = 0;
    BigInt flo_, fhi_;
    // cached lambda enclosure at scale 2^-lam_bits_
    unsigned long lam_bits_ = 0;
    BigInt lam_lo_, lam_hi_;

    std::vector<CFStep> emitted_;
    std::size_t refinements_ = 0;
    bool terminated_ = false;
};

/// Type-erased digit stream.
class DigitSource {
  public:
    DigitSource() = default;
    template <class Orbit>
    explicit DigitSource(Orbit orbit)
        : impl_([o = std::make_shared<Orbit>(std::move(orbit))]() { return o->next(); }) {}

    std::optional<CFStep> next() { return impl_(); }
    bool valid() const { return static_cast<bool>(impl_); }

  private:
    std::function<std::optional<CFStep>()> impl_;
};

}  // namespace cuspdist
