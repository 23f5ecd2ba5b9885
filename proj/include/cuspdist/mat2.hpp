#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "cuspdist/bigint.hpp"
#include "cuspdist/field.hpp"
#include "cuspdist/polynomial.hpp"
#include "cuspdist/rational.hpp"

namespace cuspdist {

/// 2x2 matrix ((a, b), (c, d)) over any ring with +, -, *.
template <class R>
struct Mat2 {
    R a, b, c, d;

    friend Mat2 operator*(const Mat2& x, const Mat2& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
    friend Mat2 operator-(const Mat2& x) { return {-x.a, -x.b, -x.c, -x.d}; }
    R det() const { return a * d - b * c; }
    friend bool operator==(const Mat2& x, const Mat2& y) {
        return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
    }
};

/// Context for the finite quotient ring (Z/k)[x] / (minpoly_m mod k);
/// for m = 3 this degenerates to Z/k itself.
class ResidueCtx {
  public:
    static std::shared_ptr<const ResidueCtx> get(int m, std::uint32_t k) {
        if (k < 2) throw std::domain_error("ResidueCtx: modulus must be >= 2");
        static std::mutex mu;
        static std::map<std::pair<int, std::uint32_t>, std::shared_ptr<const ResidueCtx>> reg;
        std::lock_guard<std::mutex> lock(mu);
        auto key = std::make_pair(m, k);
        auto it = reg.find(key);
        if (it != reg.end()) return it->second;
        auto ctx = std::shared_ptr<const ResidueCtx>(new ResidueCtx(m, k));
        reg.emplace(key, ctx);
        return ctx;
    }

    int hecke_index() const { return m_; }
    std::uint32_t modulus() const { return k_; }
    int degree() const { return deg_; }
    const std::vector<std::vector<std::uint32_t>>& reduction_rows() const { return reduction_; }

  private:
    ResidueCtx(int m, std::uint32_t k) : m_(m), k_(k) {
        auto field = NumberField::get(m);
        deg_ = field->degree();
        for (const auto& row : field->reduction_rows()) {
            std::vector<std::uint32_t> r(deg_);
            for (int i = 0; i < deg_; ++i) r[i] = static_cast<std::uint32_t>(mod_ui(row[i], k_));
            reduction_.push_back(std::move(r));
        }
    }

    int m_;
    std::uint32_t k_;
    int deg_;
    std::vector<std::vector<std::uint32_t>> reduction_;
};

/// Element of (Z/k)[lambda_m]: coefficient vector mod k, reduced through
/// the minimal polynomial.
class Residue {
  public:
    Residue() = default;
    explicit Residue(std::shared_ptr<const ResidueCtx> ctx)
        : ctx_(std::move(ctx)), c_(ctx_->degree(), 0) {}

    static Residue from_int(const std::shared_ptr<const ResidueCtx>& ctx, const BigInt& v) {
        Residue r(ctx);
        r.c_[0] = static_cast<std::uint32_t>(mod_ui(v, ctx->modulus()));
        return r;
    }
    static Residue from_long(const std::shared_ptr<const ResidueCtx>& ctx, long v) {
        return from_int(ctx, BigInt(v));
    }
    static Residue lambda(const std::shared_ptr<const ResidueCtx>& ctx) {
        Residue r(ctx);
        if (ctx->degree() == 1) {
            r.c_[0] = ctx->reduction_rows()[0][0];  // lambda == rational integer
        } else {
            r.c_[1] = 1 % ctx->modulus();
        }
        return r;
    }
    static Residue from_coeffs(const std::shared_ptr<const ResidueCtx>& ctx,
                               std::vector<std::uint32_t> coeffs) {
        if (coeffs.size() != static_cast<std::size_t>(ctx->degree()))
            throw std::domain_error("Residue: bad coefficient count");
        Residue r(ctx);
        for (auto& v : coeffs) v %= ctx->modulus();
        r.c_ = std::move(coeffs);
        return r;
    }

    /// Reduction of an element of Z[lambda]; coefficients must be integers.
    static Residue from_algebraic(const std::shared_ptr<const ResidueCtx>& ctx,
                                  const AlgebraicReal& v) {
        if (v.m() != ctx->hecke_index())
            throw std::domain_error("Residue: number field index mismatch");
        Residue r(ctx);
        for (int i = 0; i < ctx->degree(); ++i) {
            const BigRational& x = v.coeffs()[i];
            if (!x.is_integer()) throw std::domain_error("Residue: non-integral coefficient");
            r.c_[i] = static_cast<std::uint32_t>(mod_ui(x.num(), ctx->modulus()));
        }
        return r;
    }

    const std::shared_ptr<const ResidueCtx>& ctx() const { return ctx_; }
    const std::vector<std::uint32_t>& coeffs() const { return c_; }
    bool is_zero() const {
        for (auto x : c_)
            if (x) return false;
        return true;
    }

    friend Residue operator+(const Residue& a, const Residue& b) {
        Residue r = a;
        const std::uint64_t k = a.ctx_->modulus();
        for (std::size_t i = 0; i < r.c_.size(); ++i)
            r.c_[i] = static_cast<std::uint32_t>((static_cast<std::uint64_t>(r.c_[i]) + b.c_[i]) % k);
        return r;
    }
    friend Residue operator-(const Residue& a, const Residue& b) {
        Residue r = a;
        const std::uint64_t k = a.ctx_->modulus();
        for (std::size_t i = 0; i < r.c_.size(); ++i)
            r.c_[i] = static_cast<std::uint32_t>((static_cast<std::uint64_t>(r.c_[i]) + k - b.c_[i]) % k);
        return r;
    }
    friend Residue operator-(const Residue& a) {
        Residue r = a;
        const std::uint64_t k = a.ctx_->modulus();
        for (auto& x : r.c_) x = static_cast<std::uint32_t>((k - x) % k);
        return r;
    }
    friend Residue operator*(const Residue& a, const Residue& b) {
        const std::uint64_t k = a.ctx_->modulus();
        const int d = a.ctx_->degree();
        std::vector<std::uint64_t> conv(2 * d - 1, 0);
        for (int i = 0; i < d; ++i) {
            if (!a.c_[i]) continue;
            for (int j = 0; j < d; ++j)
                conv[i + j] = (conv[i + j] + static_cast<std::uint64_t>(a.c_[i]) * b.c_[j]) % k;
        }
        Residue r(a.ctx_);
        const auto& rows = a.ctx_->reduction_rows();
        for (int i = 0; i < d; ++i) r.c_[i] = static_cast<std::uint32_t>(conv[i]);
        for (int p = d; p < 2 * d - 1; ++p) {
            if (!conv[p]) continue;
            const auto& row = rows[p - d];
            for (int i = 0; i < d; ++i)
                r.c_[i] = static_cast<std::uint32_t>((r.c_[i] + conv[p] * row[i]) % k);
        }
        return r;
    }

    friend bool operator==(const Residue& a, const Residue& b) { return a.c_ == b.c_; }

    /// Deterministic byte encoding, also the lexicographic canonical order.
    void append_key(std::string& out) const {
        for (auto x : c_) {
            out.push_back(static_cast<char>(x & 0xff));
            out.push_back(static_cast<char>((x >> 8) & 0xff));
            out.push_back(static_cast<char>((x >> 16) & 0xff));
            out.push_back(static_cast<char>((x >> 24) & 0xff));
        }
    }

  private:
    std::shared_ptr<const ResidueCtx> ctx_;
    std::vector<std::uint32_t> c_;
};

using ResidueMat = Mat2<Residue>;

inline std::string mat_key(const ResidueMat& m) {
    std::string s;
    m.a.append_key(s);
    m.b.append_key(s);
    m.c.append_key(s);
    m.d.append_key(s);
    return s;
}

/// Canonical representative of {M, -M}: the lexicographically smaller key.
inline ResidueMat projective_canonical(const ResidueMat& m) {
    ResidueMat neg = -m;
    return mat_key(neg) < mat_key(m) ? neg : m;
}

inline std::string projective_key(const ResidueMat& m) { return mat_key(projective_canonical(m)); }

}  // namespace cuspdist
