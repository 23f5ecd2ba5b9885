#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <random>
#include <utility>
#include <vector>

#include "cuspdist/bigint.hpp"
#include "cuspdist/errors.hpp"
#include "cuspdist/rational.hpp"

namespace cuspdist {

inline constexpr unsigned long kDefaultFloorCapBits = 4096;

/// Deterministic lazy bit source; bits extend on demand and never change.
class BitStream {
  public:
    explicit BitStream(std::uint64_t seed) : eng_(seed) {}

    /// The integer formed by the first `bits` bits (MSB first).
    BigInt prefix(unsigned long bits) {
        std::lock_guard<std::mutex> lock(mu_);
        while (words_.size() * 64 < bits) words_.push_back(eng_());
        const unsigned long whole = bits / 64, rest = bits % 64;
        BigInt out;
        if (whole > 0) mpz_import(out.raw(), whole, 1, sizeof(std::uint64_t), 0, 0, words_.data());
        if (rest > 0) {
            mpz_mul_2exp(out.raw(), out.raw(), rest);
            BigInt top(static_cast<unsigned long>(words_[whole] >> (64 - rest)));
            out += top;
        }
        return out;
    }

  private:
    std::mt19937_64 eng_;
    std::vector<std::uint64_t> words_;
    std::mutex mu_;
};

/// A real number exposed as a precision-on-demand rational interval query.
/// query(bits) must return an interval of width <= 2^-bits containing the
/// value; successive answers are intersected, so the cached enclosure is
/// nested by construction.
class AdaptiveReal {
  public:
    using Query = std::function<RatInterval(unsigned long)>;

    AdaptiveReal() = default;
    explicit AdaptiveReal(Query q) : state_(std::make_shared<State>(std::move(q))) {}

    static AdaptiveReal from_rational(BigRational v) {
        RatInterval point{std::move(v)};
        return AdaptiveReal([point](unsigned long) { return point; });
    }

    /// Uniform on [0,1): the dyadic interval of the stream's first `bits` bits.
    static AdaptiveReal uniform01(std::shared_ptr<BitStream> bits) {
        return AdaptiveReal([bits = std::move(bits)](unsigned long b) {
            BigInt k = bits->prefix(b);
            return RatInterval(dyadic(k, b), dyadic(k + BigInt(1), b));
        });
    }

    bool valid() const { return static_cast<bool>(state_); }

    /// Certified enclosure of width <= 2^-bits.
    RatInterval at(unsigned long bits) const {
        std::lock_guard<std::mutex> lock(state_->mu);
        if (state_->have && state_->bits >= bits) return state_->cache;
        RatInterval fresh = state_->query(bits);
        state_->cache = state_->have ? state_->cache.intersect(fresh) : fresh;
        state_->have = true;
        state_->bits = bits;
        return state_->cache;
    }

  private:
    struct State {
        explicit State(Query q) : query(std::move(q)) {}
        Query query;
        std::mutex mu;
        RatInterval cache;
        unsigned long bits = 0;
        bool have = false;
    };
    std::shared_ptr<State> state_;
};

/// Floor of an adaptive real; refines up to cap_bits of query precision and
/// errors out loudly if the enclosure still straddles an integer.
inline BigInt certified_floor(const AdaptiveReal& v,
                              unsigned long cap_bits = kDefaultFloorCapBits) {
    for (unsigned long bits = 32;; bits *= 2) {
        if (bits > cap_bits) bits = cap_bits;
        auto [ok, f] = v.at(bits).certain_floor();
        if (ok) return f;
        if (bits == cap_bits)
            throw undecidable_floor("certified_floor: interval straddles an integer at " +
                                    std::to_string(cap_bits) + " bits");
    }
}

}  // namespace cuspdist
