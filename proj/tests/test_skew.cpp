#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "cuspdist/skew.hpp"

using namespace cuspdist;

namespace {

std::vector<CFStep> random_signed_steps(std::mt19937_64& rng, bool signed_digits,
                                        std::size_t len) {
    std::vector<CFStep> out;
    for (std::size_t i = 0; i < len; ++i) {
        CFStep s;
        s.sign = signed_digits && (rng() & 1) ? -1 : +1;
        s.digit = BigInt(1 + static_cast<long>(rng() % 9));
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace

TEST_CASE("section matrices") {
    auto id = section_matrix(-1, BigRational(0), BigRational(0));
    CHECK(id.a == BigRational(1));
    CHECK(id.b == BigRational(0));
    CHECK(id.c == BigRational(0));
    CHECK(id.d == BigRational(1));

    auto plus = section_matrix(+1, BigRational(1, 2), BigRational(1, 3));
    CHECK(plus.a == BigRational(1, 2));
    CHECK(plus.b == BigRational(5, 6));
    CHECK(plus.c == BigRational(-1));
    CHECK(plus.d == BigRational(1, 3));
    CHECK(plus.det() == BigRational(1));

    auto minus = section_matrix(-1, BigRational(2, 5), BigRational(1, 2));
    CHECK(minus.det() == BigRational(1));
}

TEST_CASE("section coordinate change and its inverse") {
    auto [x0, y0] = to_section_coords(BigRational(1, 2), BigRational(0));
    CHECK(y0 == BigRational(0));
    auto [x1, y1] = to_section_coords(BigRational(1, 2), BigRational(1));
    CHECK(x1 == BigRational(1, 2));
    CHECK(y1 == BigRational(2, 3));

    auto [x2, y2] = to_section_coords(BigRational(2, 5), BigRational(1, 2));
    auto [x3, y3] = from_section_coords(x2, y2);
    CHECK(x3 == BigRational(2, 5));
    CHECK(y3 == BigRational(1, 2));

    CHECK_THROWS_AS(to_section_coords(BigRational(-1), BigRational(1)), singular_input);
}

TEST_CASE("return words multiply to the return-matrix shapes") {
    // (-1,+1,d=2) integer case: S^2 = ((1,2),(0,1))
    auto w1 = return_word(-1, +1, BigInt(2));
    auto m1 = word_matrix<BigInt>(w1.letters(), BigInt(1), BigInt(1));
    CHECK(m1 == (Mat2<BigInt>{1, 2, 0, 1}));

    // (+1,+1,d=1): I S^-1 I = -((1,0),(1,1)), projectively the L shape
    auto w2 = return_word(+1, +1, BigInt(1));
    auto m2 = word_matrix<BigInt>(w2.letters(), BigInt(1), BigInt(1));
    auto expect2 = return_matrix<BigInt>(+1, +1, BigInt(1), BigInt(1));
    CHECK((m2 == expect2 || m2 == -expect2));

    // (+1,-1,d=1) over Z[lambda_5]: S I = ((lambda,-1),(1,0)) exactly
    AlgebraicReal one = AlgebraicReal::from_rational(5, BigRational(1));
    AlgebraicReal lam = AlgebraicReal::lambda(5);
    auto w3 = return_word(+1, -1, BigInt(1));
    auto m3 = word_matrix<AlgebraicReal>(w3.letters(), lam, one);
    CHECK(m3 == (Mat2<AlgebraicReal>{lam, -one, one, AlgebraicReal(5)}));

    // all four cells, several digits, m in {3, 5}
    for (int m : {3, 5}) {
        AlgebraicReal o = AlgebraicReal::from_rational(m, BigRational(1));
        AlgebraicReal l = AlgebraicReal::lambda(m);
        for (int comp : {-1, +1}) {
            for (int eps : {-1, +1}) {
                for (long d = 1; d <= 12; ++d) {
                    auto w = return_word(comp, eps, BigInt(d));
                    auto got = word_matrix<AlgebraicReal>(w.letters(), l, o);
                    auto want = return_matrix<AlgebraicReal>(comp, eps, l * BigRational(d), o);
                    CHECK((got == want || got == -want));
                    // inverse word really is the inverse
                    auto gotinv = word_matrix<AlgebraicReal>(w.inverse().letters(), l, o);
                    auto prod = got * gotinv;
                    auto idm = Mat2<AlgebraicReal>{o, AlgebraicReal(m), AlgebraicReal(m), o};
                    CHECK((prod == idm || prod == -idm));
                }
            }
        }
    }
}

TEST_CASE("return_step examples") {
    SectionPoint<BigRational, BigRational> p{-1, BigRational(2, 5), BigRational(0)};
    auto r = return_step(CFKind::regular(), p);
    REQUIRE(r.has_value());
    CHECK(r->step.digit == BigInt(2));
    CHECK(r->event.word.pre_iota == false);
    CHECK(r->event.word.t_exponent == BigInt(2));
    CHECK(r->event.word.post_iota == false);
    CHECK(r->event.log_time == doctest::Approx(2.0 * std::log(2.5)));
    CHECK(r->next.component == +1);
    CHECK(r->next.x == BigRational(1, 2));
    CHECK(r->next.y == BigRational(1, 2));

    // golden fixed point: every step d = 1 and t = 2 log((1+sqrt5)/2)
    AlgebraicReal lam = AlgebraicReal::lambda(5);
    AlgebraicReal one = AlgebraicReal::from_rational(5, BigRational(1));
    SectionPoint<AlgebraicReal, BigRational> g{-1, lam - one, BigRational(0)};
    const double tlam = 2.0 * std::log((1.0 + std::sqrt(5.0)) / 2.0);
    int comp = -1;
    for (int i = 0; i < 4; ++i) {
        auto s = return_step(CFKind::regular(), g);
        REQUIRE(s.has_value());
        CHECK(s->step.digit == BigInt(1));
        CHECK(s->event.log_time == doctest::Approx(tlam));
        CHECK(s->next.component == -comp);
        comp = s->next.component;
        g = s->next;
    }

    // alpha 1/2 at x=2/5: (sigma,eps)=(-1,+1) row, M = S^3
    SectionPoint<BigRational, BigRational> a{-1, BigRational(2, 5), BigRational(0)};
    auto ra = return_step(CFKind::alpha(BigRational(1, 2)), a);
    REQUIRE(ra.has_value());
    CHECK(ra->step.sign == +1);
    CHECK(ra->step.digit == BigInt(3));
    CHECK(ra->event.word.t_exponent == BigInt(3));
    CHECK(ra->next.component == +1);
}

TEST_CASE("skew_step basics") {
    CFKind kind = CFKind::regular();

    // index-1 subgroup: the label never moves
    CosetTable triv = CosetTable::build(SubgroupSpec::permutation(3, {0}, {0}));
    auto st = make_skew_state<BigRational, BigRational>(BigRational(2, 5), BigRational(0));
    auto s1 = skew_step(st, kind, triv);
    REQUIRE(s1.has_value());
    CHECK(s1->label == 0);
    CHECK(s1->flow_time > 0.0);

    // mod 2: first step d=2, label returns to identity (T^2 == I)
    CosetTable mod2 = CosetTable::build(SubgroupSpec::congruence(3, 2));
    auto m1 = skew_step(st, kind, mod2);
    REQUIRE(m1.has_value());
    CHECK(m1->label == 0);

    // elapsed strictly increases and matches the exact magnitude product
    auto cur = make_skew_state<BigRational, BigRational>(BigRational(355, 1130), BigRational(0));
    double last = 0.0;
    for (;;) {
        auto next = skew_step(cur, kind, mod2);
        if (!next) break;
        CHECK(next->flow_time > last);
        last = next->flow_time;
        CHECK(next->flow_time ==
              doctest::Approx(-2.0 * log_abs(next->magnitude_product)).epsilon(1e-9));
        cur = std::move(*next);
    }
}

TEST_CASE("component rule: sigma flips exactly on eps = +1") {
    std::mt19937_64 rng(9);
    auto steps = random_signed_steps(rng, true, 200);
    int comp = -1;
    for (const auto& s : steps) {
        int nc = next_component(comp, s.sign);
        if (s.sign > 0) CHECK(nc == -comp);
        else CHECK(nc == comp);
        comp = nc;
    }
}

TEST_CASE("closed-form label: base cases") {
    CosetTable mod2 = CosetTable::build(SubgroupSpec::congruence(3, 2));
    CFKind kind = CFKind::regular();

    // k=0: empty product is the identity label
    CHECK(approximant_matrix_label({}, kind, mod2) == 0);

    // k=1, d=2: ((q0,-q1),(-p0,p1)) = ((1,-2),(0,1)) == I mod 2
    std::vector<CFStep> one{CFStep{+1, BigInt(2)}};
    CHECK(approximant_matrix_label(one, kind, mod2) == 0);
}

TEST_CASE("central identity: incremental skew label == closed-form label") {
    std::mt19937_64 rng(20120727);
    struct Case {
        CFKind kind;
        SubgroupSpec spec;
        bool signed_digits;
    };
    std::vector<Case> cases{
        {CFKind::regular(), SubgroupSpec::congruence(3, 2), false},
        {CFKind::regular(), SubgroupSpec::congruence(3, 5), false},
        {CFKind::alpha(BigRational(1, 2)), SubgroupSpec::congruence(3, 2), true},
        {CFKind::alpha(BigRational(1, 2)), SubgroupSpec::congruence(3, 4), true},
        {CFKind::rosen(5), SubgroupSpec::congruence(5, 2), true},
        {CFKind::rosen(4), SubgroupSpec::congruence(4, 3), true},
    };
    for (const auto& c : cases) {
        CosetTable table = CosetTable::build(c.spec);
        for (int trial = 0; trial < 25; ++trial) {
            auto steps = random_signed_steps(rng, c.signed_digits, 1 + rng() % 30);
            std::uint32_t label = 0;
            int comp = -1;
            for (std::size_t k = 0; k < steps.size(); ++k) {
                label = update_label(table, label, comp, steps[k]);
                comp = next_component(comp, steps[k].sign);
                std::uint32_t closed =
                    approximant_matrix_label(std::span(steps.data(), k + 1), c.kind, table);
                REQUIRE(label == closed);
            }
        }
    }
}

TEST_CASE("word power path equals letter-by-letter application") {
    CosetTable t = CosetTable::build(SubgroupSpec::congruence(3, 5));
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        ReturnWord w{(rng() & 1) != 0, BigInt(static_cast<long>(rng() % 23) - 11),
                     (rng() & 1) != 0};
        if (w.t_exponent.is_zero()) w.t_exponent = BigInt(1);
        std::uint32_t label = static_cast<std::uint32_t>(rng() % t.index());
        auto letters = w.letters();
        CHECK(apply_return_word(t, label, w) == t.apply_word(label, letters));
    }
}

TEST_CASE("section cusp averages") {
    CosetTable triv = CosetTable::build(SubgroupSpec::permutation(3, {0}, {0}));
    CuspTable inf = cusp_partition(triv, RelPoint::Infinity);
    CuspTable zero = cusp_partition(triv, RelPoint::Zero);

    std::vector<SkewSample> traj;
    for (int i = 0; i < 10; ++i) traj.push_back({i % 2 ? +1 : -1, 0});
    auto avg = section_cusp_average(traj, 0, inf, zero);
    CHECK(avg.hit_frequency == 1.0);
    CHECK(avg.psi_mean == 0.5);

    std::vector<SkewSample> single{{-1, 0}};
    auto one = section_cusp_average(single, 0, inf, zero);
    CHECK((one.psi_mean == 0.0 || one.psi_mean == 0.5));
}

TEST_CASE("section averages over a long mod-2 run: hit frequency near 1/3") {
    // the un-halved per-step frequency of each cusp tends to w/[G:H] = 1/3;
    // the halved Psi mean is half that (both are reported)
    CosetTable table = CosetTable::build(SubgroupSpec::congruence(3, 2));
    CuspTable inf = cusp_partition(table, RelPoint::Infinity);
    CuspTable zero = cusp_partition(table, RelPoint::Zero);

    AdaptiveOrbit orbit(CFKind::regular(),
                        AdaptiveReal::uniform01(std::make_shared<BitStream>(314159)), 20000);
    std::vector<SkewSample> traj;
    std::uint32_t label = 0;
    int comp = -1;
    for (int k = 0; k < 20000; ++k) {
        auto s = orbit.next();
        REQUIRE(s.has_value());
        label = update_label(table, label, comp, *s);
        comp = next_component(comp, s->sign);
        traj.push_back({comp, label});
    }
    double freq_sum = 0.0;
    for (std::uint32_t cusp = 0; cusp < 3; ++cusp) {
        auto avg = section_cusp_average(traj, cusp, inf, zero);
        CHECK(std::fabs(avg.hit_frequency - 1.0 / 3.0) < 0.02);
        CHECK(avg.psi_mean == avg.hit_frequency / 2.0);
        freq_sum += avg.hit_frequency;
    }
    CHECK(freq_sum == doctest::Approx(1.0));
}

TEST_CASE("twisted run on 2/5 over mod 2 matches hand classification") {
    TwistedClassifier tc(SubgroupSpec::congruence(3, 2));
    ExactOrbit<BigRational> orbit(CFKind::regular(), BigRational(2, 5));
    DigitSource src(std::move(orbit));
    TwistedClassifier::RunOptions opt;
    opt.record_steps = true;
    opt.oracle_check = true;
    auto res = tc.run(CFKind::regular(), src, 100, opt);

    CHECK(res.terminated);
    CHECK(res.realized == 2);
    const std::uint32_t odd_even = classify_fraction(BigInt(1), BigInt(2), tc.table_h(), tc.inf_h());
    const std::uint32_t even_odd = classify_fraction(BigInt(2), BigInt(5), tc.table_h(), tc.inf_h());
    REQUIRE(res.step_cusps.size() == 2);
    CHECK(res.step_cusps[0] == odd_even);
    CHECK(res.step_cusps[1] == even_odd);
    // p_0/q_0 = 0/1 goes to the even/odd class
    CHECK(res.k0_cusp == classify_fraction(BigInt(0), BigInt(1), tc.table_h(), tc.inf_h()));
}

TEST_CASE("twisted run: index-1 subgroup puts everything in the single cusp") {
    TwistedClassifier tc(SubgroupSpec::permutation(3, {0}, {0}));
    ExactOrbit<BigRational> orbit(CFKind::regular(), BigRational(355, 113000001));
    DigitSource src(std::move(orbit));
    auto res = tc.run(CFKind::regular(), src, 50);
    CHECK(res.cusp_counts.size() == 1);
    CHECK(res.cusp_counts[0] == res.realized);
}

TEST_CASE("twist oracle: adaptive digit streams, all kinds") {
    std::mt19937_64 seeds(77);
    struct Case {
        CFKind kind;
        SubgroupSpec spec;
    };
    std::vector<Case> cases{
        {CFKind::regular(), SubgroupSpec::congruence(3, 2)},
        {CFKind::regular(), SubgroupSpec::congruence(3, 3)},
        {CFKind::alpha(BigRational(1, 2)), SubgroupSpec::congruence(3, 2)},
        {CFKind::alpha(BigRational(3, 10)), SubgroupSpec::congruence(3, 4)},
        {CFKind::rosen(5), SubgroupSpec::congruence(5, 2)},
    };
    for (const auto& c : cases) {
        TwistedClassifier tc(c.spec);
        AdaptiveReal u = AdaptiveReal::uniform01(std::make_shared<BitStream>(seeds()));
        AdaptiveReal input;
        if (c.kind.family() == CFFamily::Rosen) {
            const int m = c.kind.hecke_index();
            input = AdaptiveReal([u, m](unsigned long bits) {
                RatInterval base = u.at(bits + 4);
                RatInterval lam = NumberField::get(m)->lambda(bits + 4);
                RatInterval half{BigRational(-1, 2), BigRational(-1, 2)};
                return (base + half) * lam;
            });
        } else if (c.kind.family() == CFFamily::Alpha) {
            BigRational shift = c.kind.alpha_value() - BigRational(1);
            input = AdaptiveReal([u, shift](unsigned long bits) {
                RatInterval base = u.at(bits + 1);
                return base + RatInterval(shift);
            });
        } else {
            input = u;
        }
        DigitSource src(AdaptiveOrbit(c.kind, input, 200));
        TwistedClassifier::RunOptions opt;
        opt.oracle_check = true;  // throws on any step-level disagreement
        auto res = tc.run(c.kind, src, 200, opt);
        CHECK(res.realized == 200);
        std::uint64_t total = 0;
        for (auto v : res.cusp_counts) total += v;
        CHECK(total == res.realized);
    }
}

TEST_CASE("permutation spec reproduces the congruence twin's twisted counts") {
    SubgroupSpec cong = SubgroupSpec::congruence(3, 2);
    CosetTable built = CosetTable::build(cong);
    std::vector<std::uint32_t> pt(built.index()), pi(built.index());
    for (std::uint32_t l = 0; l < built.index(); ++l) {
        pt[l] = built.apply(l, Gen::T);
        pi[l] = built.apply(l, Gen::Iota);
    }
    SubgroupSpec perm = SubgroupSpec::permutation(3, std::move(pt), std::move(pi));

    TwistedClassifier tc_cong(cong);
    TwistedClassifier tc_perm(perm);
    for (std::uint64_t seed : {11ull, 12ull}) {
        auto make_src = [&]() {
            return DigitSource(AdaptiveOrbit(
                CFKind::regular(), AdaptiveReal::uniform01(std::make_shared<BitStream>(seed)),
                500));
        };
        DigitSource a = make_src(), b = make_src();
        TwistedRunOptions opt;
        opt.record_steps = true;
        auto ra = tc_cong.run(CFKind::regular(), a, 500, opt);
        auto rb = tc_perm.run(CFKind::regular(), b, 500, opt);
        CHECK(ra.cusp_counts == rb.cusp_counts);
        CHECK(ra.step_cusps == rb.step_cusps);
        CHECK(ra.k0_cusp == rb.k0_cusp);
    }
}

TEST_CASE("twist oracle: exact field input until termination") {
    TwistedClassifier tc(SubgroupSpec::congruence(5, 2));
    AlgebraicReal x0 = AlgebraicReal::lambda(5) * BigRational(101, 256) -
                       AlgebraicReal::from_rational(5, BigRational(1, 2));
    ExactOrbit<AlgebraicReal> orbit(CFKind::rosen(5), x0);
    DigitSource src(std::move(orbit));
    TwistedClassifier::RunOptions opt;
    opt.oracle_check = true;
    auto res = tc.run(CFKind::rosen(5), src, 1000, opt);
    CHECK(res.terminated);
    CHECK(res.realized > 3);
}

TEST_CASE("trajectory dump format") {
    CosetTable mod2 = CosetTable::build(SubgroupSpec::congruence(3, 2));
    std::ostringstream os;
    dump_trajectory(os, CFKind::regular(), mod2, BigRational(2, 5), BigRational(0), 10);
    std::istringstream in(os.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "# k\teps\td\tsigma\tlabel\tcusp_inf\tcusp_zero\tt");
    std::string row;
    int rows = 0;
    while (std::getline(in, row))
        if (!row.empty()) ++rows;
    CHECK(rows == 2);  // 2/5 has two digits
}
