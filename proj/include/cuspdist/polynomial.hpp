#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cuspdist/bigint.hpp"
#include "cuspdist/rational.hpp"

namespace cuspdist {

/// Integer polynomial, coefficients ascending, no trailing zeros.
struct IntPoly {
    std::vector<BigInt> c;

    static IntPoly zero() { return {}; }
    static IntPoly constant(BigInt v) {
        IntPoly p;
        if (!v.is_zero()) p.c.push_back(std::move(v));
        return p;
    }
    static IntPoly monomial(std::size_t deg, BigInt v = BigInt(1)) {
        IntPoly p;
        p.c.assign(deg + 1, BigInt(0));
        p.c[deg] = std::move(v);
        return p;
    }

    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }
    const BigInt& leading() const { return c.back(); }

    void trim() {
        while (!c.empty() && c.back().is_zero()) c.pop_back();
    }

    friend IntPoly operator+(const IntPoly& a, const IntPoly& b) {
        IntPoly r;
        r.c.resize(std::max(a.c.size(), b.c.size()), BigInt(0));
        for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
        for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
        r.trim();
        return r;
    }
    friend IntPoly operator-(const IntPoly& a, const IntPoly& b) {
        IntPoly r;
        r.c.resize(std::max(a.c.size(), b.c.size()), BigInt(0));
        for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
        for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] -= b.c[i];
        r.trim();
        return r;
    }
    friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        IntPoly r;
        r.c.assign(a.c.size() + b.c.size() - 1, BigInt(0));
        for (std::size_t i = 0; i < a.c.size(); ++i)
            for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
        return r;
    }

    /// Exact quotient; throws if the division leaves a remainder.
    friend IntPoly divexact(IntPoly a, const IntPoly& b) {
        if (b.is_zero()) throw std::domain_error("IntPoly: division by zero polynomial");
        IntPoly q;
        if (a.degree() < b.degree()) {
            if (!a.is_zero()) throw std::domain_error("IntPoly: inexact division");
            return q;
        }
        q.c.assign(a.c.size() - b.c.size() + 1, BigInt(0));
        for (int i = a.degree() - b.degree(); i >= 0; --i) {
            BigInt coef = a.c[i + b.degree()];
            if (coef.is_zero()) continue;
            if (!(coef % b.leading()).is_zero())
                throw std::domain_error("IntPoly: inexact division");
            coef = coef / b.leading();
            for (std::size_t j = 0; j < b.c.size(); ++j) a.c[i + j] -= coef * b.c[j];
            q.c[i] = std::move(coef);
        }
        a.trim();
        if (!a.is_zero()) throw std::domain_error("IntPoly: inexact division");
        return q;
    }

    RatInterval eval(const RatInterval& x) const {
        RatInterval acc{BigRational(0)};
        for (std::size_t i = c.size(); i-- > 0;) {
            acc = acc * x + RatInterval(BigRational(c[i]));
        }
        return acc;
    }

    BigRational eval(const BigRational& x) const {
        BigRational acc(0);
        for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + BigRational(c[i]);
        return acc;
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::string s;
        for (std::size_t i = c.size(); i-- > 0;) {
            if (c[i].is_zero()) continue;
            if (!s.empty()) s += c[i].is_negative() ? " - " : " + ";
            else if (c[i].is_negative()) s += "-";
            BigInt a = cuspdist::abs(c[i]);
            if (!(a.is_one()) || i == 0) s += a.to_string();
            if (i >= 1) s += "x";
            if (i >= 2) s += "^" + std::to_string(i);
        }
        return s;
    }
};

/// n-th cyclotomic polynomial by exact division of x^n - 1.
inline IntPoly cyclotomic(unsigned long n) {
    static std::map<unsigned long, IntPoly> cache;  // small n only, guarded by callers
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    IntPoly num = IntPoly::monomial(n) - IntPoly::constant(BigInt(1));
    for (unsigned long d = 1; d < n; ++d) {
        if (n % d == 0) num = divexact(std::move(num), cyclotomic(d));
    }
    cache[n] = num;
    return num;
}

/// Minimal polynomial of 2cos(pi/m) over Q: monic, degree phi(2m)/2.
///
/// The cyclotomic polynomial of order 2m is palindromic of degree 2D, so it
/// factors through the substitution x = z + 1/z; rewriting in the basis
/// C_k(x) = z^k + z^-k (C_0 = 2, C_1 = x, C_{k+1} = x C_k - C_{k-1}) yields
/// the monic degree-D polynomial annihilating 2cos(pi/m).
inline IntPoly minimal_polynomial(int m) {
    if (m < 3) throw std::domain_error("minimal_polynomial: m must be >= 3");
    IntPoly phi = cyclotomic(2ul * static_cast<unsigned long>(m));
    const int two_d = phi.degree();
    if (two_d % 2 != 0) throw std::logic_error("minimal_polynomial: odd cyclotomic degree");
    const int d = two_d / 2;
    IntPoly prev = IntPoly::constant(BigInt(2));   // C_0
    IntPoly cur = IntPoly::monomial(1);            // C_1
    IntPoly x = IntPoly::monomial(1);
    IntPoly out = IntPoly::constant(phi.c[d]);
    for (int k = 1; k <= d; ++k) {
        out = out + IntPoly::constant(phi.c[d + k]) * cur;
        IntPoly next = x * cur - prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    if (out.degree() != d || !out.leading().is_one())
        throw std::logic_error("minimal_polynomial: trace form not monic");
    return out;
}

}  // namespace cuspdist
