#pragma once

#include <stdexcept>
#include <utility>

#include "cuspdist/bigint.hpp"
#include "cuspdist/rational.hpp"

namespace cuspdist {
namespace detail {

// Fixed-point value S at scale 2^prec with |S/2^prec - x| <= err/2^prec.
struct Fixed {
    BigInt value;
    BigInt err;
};

/// atan(1/q) by its alternating Taylor series in integer fixed point.
inline Fixed atan_recip_fixed(unsigned long q, unsigned long prec) {
    BigInt x = floor_div(pow2(prec), BigInt(static_cast<long>(q)));
    BigInt sum(0), err(1);
    const BigInt qq(static_cast<long>(q * q));
    long k = 0;
    while (!x.is_zero()) {
        BigInt term = x / BigInt(2 * k + 1);
        if (k % 2 == 0)
            sum += term;
        else
            sum -= term;
        err += 3;
        x = x / qq;
        ++k;
    }
    err += 3;  // truncated tail
    return {std::move(sum), std::move(err)};
}

inline Fixed pi_fixed(unsigned long prec) {
    Fixed a5 = atan_recip_fixed(5, prec);
    Fixed a239 = atan_recip_fixed(239, prec);
    BigInt v = a5.value * 16 - a239.value * 4;
    BigInt e = a5.err * 16 + a239.err * 4;
    return {std::move(v), std::move(e)};
}

/// cos at the dyadic point S/2^prec, for arguments in (0, 2).
inline Fixed cos_fixed(const Fixed& theta, unsigned long prec) {
    const BigInt scale = pow2(prec);
    BigInt c2 = (theta.value * theta.value) / scale;
    // |theta| is assumed < 2 so c2 fits ~prec+2 bits
    BigInt t = scale, sum = scale, term_err(1), err(1);
    long k = 0;
    while (!t.is_zero()) {
        t = (t * c2) / scale;
        t = t / BigInt((2 * k + 1) * (2 * k + 2));
        term_err += 4;
        err += term_err;
        if (k % 2 == 0)
            sum -= t;
        else
            sum += t;
        ++k;
    }
    err += term_err + 2;
    // Lipschitz transfer of the argument's own uncertainty (|cos'| <= 1)
    err += theta.err;
    return {std::move(sum), std::move(err)};
}

inline RatInterval to_interval(const Fixed& f, unsigned long prec) {
    BigInt scale = pow2(prec);
    return {BigRational(f.value - f.err, scale), BigRational(f.value + f.err, scale)};
}

}  // namespace detail

/// Certified interval for pi, width <= 2^-bits.
inline RatInterval pi_interval(unsigned long bits) {
    for (unsigned long guard = 64;; guard *= 2) {
        const unsigned long prec = bits + guard;
        RatInterval iv = detail::to_interval(detail::pi_fixed(prec), prec);
        if (iv.width() <= dyadic(BigInt(1), bits)) return iv;
    }
}

/// Certified interval for lambda_m = 2cos(pi/m), width <= 2^-bits. Requires m >= 3.
inline RatInterval lambda_interval(int m, unsigned long bits) {
    if (m < 3) throw std::domain_error("lambda_interval: m must be >= 3");
    for (unsigned long guard = 64;; guard *= 2) {
        const unsigned long prec = bits + guard;
        detail::Fixed pi = detail::pi_fixed(prec);
        detail::Fixed theta{floor_div(pi.value, BigInt(m)), pi.err + 1};
        detail::Fixed c = detail::cos_fixed(theta, prec);
        c.value *= 2;
        c.err *= 2;
        RatInterval iv = detail::to_interval(c, prec);
        if (iv.width() <= dyadic(BigInt(1), bits)) return iv;
    }
}

}  // namespace cuspdist
