#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cuspdist/harness.hpp"
#include "cuspdist/skew.hpp"

namespace cuspdist {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Exact product check: every return word multiplies out to (a sign of)
/// the cross-section return matrix, for all four (sigma, eps) cells.
inline CheckResult check_return_words(long max_digit, const std::vector<int>& hecke_indices) {
    CheckResult out{"return-word matrices", true, ""};
    std::uint64_t checked = 0;
    for (int m : hecke_indices) {
        AlgebraicReal one = AlgebraicReal::from_rational(m, BigRational(1));
        AlgebraicReal lam = AlgebraicReal::lambda(m);
        for (int comp : {-1, +1}) {
            for (int eps : {-1, +1}) {
                for (long d = 1; d <= max_digit; ++d) {
                    ReturnWord w = return_word(comp, eps, BigInt(d));
                    auto got = word_matrix<AlgebraicReal>(w.letters(), lam, one);
                    auto want = return_matrix<AlgebraicReal>(comp, eps, lam * BigRational(d), one);
                    if (!(got == want || got == -want)) {
                        out.passed = false;
                        out.detail = "mismatch at m=" + std::to_string(m) +
                                     " sigma=" + std::to_string(comp) +
                                     " eps=" + std::to_string(eps) + " d=" + std::to_string(d);
                        return out;
                    }
                    ++checked;
                }
            }
        }
    }
    out.detail = std::to_string(checked) + " words verified by exact multiplication";
    return out;
}

/// Central skew identity: incremental coset label equals the closed-form
/// approximant-matrix label at every prefix of random digit strings.
inline CheckResult check_skew_closed_form(std::uint64_t seed, int strings, int max_len) {
    CheckResult out{"skew label vs closed form", true, ""};
    std::mt19937_64 rng(seed);
    struct Case {
        CFKind kind;
        SubgroupSpec spec;
        bool signed_digits;
    };
    const std::vector<Case> cases{
        {CFKind::regular(), SubgroupSpec::congruence(3, 2), false},
        {CFKind::alpha(BigRational(1, 2)), SubgroupSpec::congruence(3, 2), true},
        {CFKind::rosen(5), SubgroupSpec::congruence(5, 2), true},
    };
    std::uint64_t checked = 0;
    for (const auto& c : cases) {
        CosetTable table = CosetTable::build(c.spec);
        for (int t = 0; t < strings; ++t) {
            const std::size_t len = 1 + rng() % max_len;
            std::vector<CFStep> steps;
            for (std::size_t i = 0; i < len; ++i) {
                CFStep s;
                s.sign = c.signed_digits && (rng() & 1) ? -1 : +1;
                s.digit = BigInt(1 + static_cast<long>(rng() % 9));
                steps.push_back(std::move(s));
            }
            std::uint32_t label = 0;
            int comp = -1;
            for (std::size_t k = 0; k < len; ++k) {
                label = update_label(table, label, comp, steps[k]);
                comp = next_component(comp, steps[k].sign);
                const std::uint32_t closed =
                    approximant_matrix_label(std::span(steps.data(), k + 1), c.kind, table);
                if (label != closed) {
                    out.passed = false;
                    out.detail = c.kind.to_string() + ": divergence at step " + std::to_string(k + 1);
                    return out;
                }
                ++checked;
            }
        }
    }
    out.detail = std::to_string(checked) + " prefixes agreed exactly";
    return out;
}

/// Twist oracle: iota-twisted per-step cusp assignments equal direct
/// classify_fraction of the exact approximants, on adaptive trajectories.
inline CheckResult check_twist_oracle(std::uint64_t seed, std::size_t steps_per_case) {
    CheckResult out{"twisted run vs direct classification", true, ""};
    struct Case {
        CFKind kind;
        SubgroupSpec spec;
    };
    const std::vector<Case> cases{
        {CFKind::regular(), SubgroupSpec::congruence(3, 2)},
        {CFKind::regular(), SubgroupSpec::congruence(3, 4)},
        {CFKind::alpha(BigRational(1, 2)), SubgroupSpec::congruence(3, 3)},
        {CFKind::alpha(BigRational(3, 10)), SubgroupSpec::congruence(3, 2)},
        {CFKind::rosen(5), SubgroupSpec::congruence(5, 2)},
    };
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto& c = cases[i];
        TwistedClassifier tc(c.spec);
        InputValue input =
            sample_input(InputMode::RandomAdaptive, derived_seed(seed, i, 0), c.kind);
        DigitSource src = make_digit_source(c.kind, input, steps_per_case);
        TwistedRunOptions opt;
        opt.oracle_check = true;
        try {
            auto res = tc.run(c.kind, src, steps_per_case, opt);
            total += res.realized;
        } catch (const std::logic_error& e) {
            out.passed = false;
            out.detail = c.kind.to_string() + ": " + e.what();
            return out;
        }
    }
    out.detail = std::to_string(total) + " steps classified identically along both routes";
    return out;
}

/// Determinant identity |p_{n-1} q_n - q_{n-1} p_n| = 1 along random
/// orbits of all three kinds.
inline CheckResult check_determinants(std::uint64_t seed, int orbits, std::size_t steps) {
    CheckResult out{"approximant determinant identity", true, ""};
    std::uint64_t checked = 0;
    const std::vector<CFKind> kinds{CFKind::regular(), CFKind::alpha(BigRational(1, 2)),
                                    CFKind::alpha(BigRational(3, 10)), CFKind::rosen(5),
                                    CFKind::rosen(4)};
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        const CFKind& kind = kinds[i];
        for (int o = 0; o < orbits; ++o) {
            InputValue input =
                sample_input(InputMode::RandomAdaptive, derived_seed(seed, i * 1000 + o, 0), kind);
            DigitSource src = make_digit_source(kind, input, steps);
            if (kind.family() == CFFamily::Rosen) {
                auto st = initial_approximants(kind.hecke_index());
                for (std::size_t k = 0; k < steps; ++k) {
                    auto s = src.next();
                    if (!s) break;
                    st = push_approximant(st, *s, kind);
                    if (!st.determinant_ok()) {
                        out.passed = false;
                        out.detail = kind.to_string() + ": determinant broke at step " +
                                     std::to_string(k + 1);
                        return out;
                    }
                    ++checked;
                }
            } else {
                auto st = initial_approximants();
                for (std::size_t k = 0; k < steps; ++k) {
                    auto s = src.next();
                    if (!s) break;
                    st = push_approximant(st, *s, kind);
                    if (!st.determinant_ok()) {
                        out.passed = false;
                        out.detail = kind.to_string() + ": determinant broke at step " +
                                     std::to_string(k + 1);
                        return out;
                    }
                    ++checked;
                }
            }
        }
    }
    out.detail = std::to_string(checked) + " pushes kept |det| = 1";
    return out;
}

inline std::vector<CheckResult> run_all_crosschecks(std::uint64_t seed) {
    return {
        check_return_words(50, {3, 4, 5, 6}),
        check_skew_closed_form(seed, 200, 30),
        check_twist_oracle(seed, 1000),
        check_determinants(seed, 4, 200),
    };
}

}  // namespace cuspdist
