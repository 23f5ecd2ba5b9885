#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cuspdist/cf.hpp"
#include "cuspdist/errors.hpp"
#include "cuspdist/orbit.hpp"
#include "cuspdist/subgroup.hpp"

namespace cuspdist {

/// Point of the two-component cross-section: component index sigma in
/// {-1,+1} plus the planar natural-extension coordinates.
template <class V, class Y>
struct SectionPoint {
    int component = -1;
    V x;
    Y y;
};

/// A_sigma(x, y): the unit-determinant matrix parameterizing the section.
template <class V>
Mat2<V> section_matrix(int component, const V& x, const V& y) {
    V one = detail::make_value(x, BigRational(1));
    if (component < 0) return {one, y, -x, one - x * y};
    return {x, one - x * y, -one, y};
}

/// The coordinate change (x, y) -> (x, y/(1+xy)) between natural-extension
/// and section coordinates.
template <class V>
std::pair<V, V> to_section_coords(const V& x, const V& y) {
    V den = detail::make_value(x, BigRational(1)) + x * y;
    if (detail::zero_of(den)) throw singular_input("to_section_coords: 1 + xy = 0");
    return {x, y * detail::reciprocal_of(den)};
}

template <class V>
std::pair<V, V> from_section_coords(const V& x, const V& y) {
    V den = detail::make_value(x, BigRational(1)) - x * y;
    if (detail::zero_of(den)) throw singular_input("from_section_coords: 1 - xy = 0");
    return {x, y * detail::reciprocal_of(den)};
}

/// The component after a return: eps = +1 switches components, eps = -1
/// stays.
inline int next_component(int component, int eps) { return -eps * component; }

/// Word over {T, T^-1, Iota} of the form iota^a T^e iota^b.
/// The return matrices and their inverses all take this shape.
struct ReturnWord {
    bool pre_iota = false;
    BigInt t_exponent;
    bool post_iota = false;

    ReturnWord inverse() const { return {post_iota, -t_exponent, pre_iota}; }

    std::vector<Gen> letters() const {
        std::vector<Gen> out;
        if (pre_iota) out.push_back(Gen::Iota);
        const bool neg = t_exponent.is_negative();
        BigInt n = abs(t_exponent);
        if (!n.fits_long()) throw std::overflow_error("ReturnWord: exponent too large to expand");
        for (long i = 0; i < n.to_long(); ++i) out.push_back(neg ? Gen::Tinv : Gen::T);
        if (post_iota) out.push_back(Gen::Iota);
        return out;
    }

    std::string to_string() const {
        std::string s;
        if (pre_iota) s += "I ";
        s += "S^" + t_exponent.to_string();
        if (post_iota) s += " I";
        return s;
    }
};

/// Word whose product is (projectively) the return matrix of the
/// cross-section map for the given (sigma, eps, d): (-1,+1) -> S^d; (+1,+1) -> I S^-d I;
/// (-1,-1) -> I S^-d; (+1,-1) -> S^d I.
inline ReturnWord return_word(int component, int eps, const BigInt& d) {
    if (d < 1) throw std::domain_error("return_word: digit must be >= 1");
    if (component < 0 && eps > 0) return {false, d, false};
    if (component > 0 && eps > 0) return {true, -d, true};
    if (component < 0 && eps < 0) return {true, -d, false};
    return {false, d, true};
}

/// The four return-matrix shapes, coeff = d (Regular/Alpha) or d*lambda.
template <class Ring>
Mat2<Ring> return_matrix(int component, int eps, const Ring& coeff, const Ring& one) {
    Ring zero = one - one;
    if (component < 0 && eps < 0) return {zero, one, -one, coeff};
    if (component < 0 && eps > 0) return {one, coeff, zero, one};
    if (component > 0 && eps < 0) return {coeff, -one, one, zero};
    return {one, zero, coeff, one};
}

/// Exact product of a generator word over the ring. T = ((1, lambda),(0,1)),
/// Iota = ((0,-1),(1,0)); lambda = 1 for the integer ring.
template <class Ring>
Mat2<Ring> word_matrix(std::span<const Gen> word, const Ring& lambda, const Ring& one) {
    Ring zero = one - one;
    Mat2<Ring> t{one, lambda, zero, one};
    Mat2<Ring> tinv{one, -lambda, zero, one};
    Mat2<Ring> iota{zero, -one, one, zero};
    Mat2<Ring> acc{one, zero, zero, one};
    for (Gen g : word) {
        switch (g) {
            case Gen::T: acc = acc * t; break;
            case Gen::Tinv: acc = acc * tinv; break;
            case Gen::Iota: acc = acc * iota; break;
        }
    }
    return acc;
}

/// Applies a ReturnWord to a coset label; the T power goes through the
/// cycle structure in O(1) regardless of the digit size.
inline std::uint32_t apply_return_word(const CosetTable& table, std::uint32_t label,
                                       const ReturnWord& w) {
    if (w.pre_iota) label = table.apply(label, Gen::Iota);
    label = table.apply_t_power(label, w.t_exponent);
    if (w.post_iota) label = table.apply(label, Gen::Iota);
    return label;
}

/// Coset update of the skew product: right multiplication by M^-1, where
/// M is the return matrix of the step taken from component sigma.
inline std::uint32_t update_label(const CosetTable& table, std::uint32_t label, int component,
                                  const CFStep& s) {
    return apply_return_word(table, label, return_word(component, s.sign, s.digit).inverse());
}

/// One return of the cross-section map with flow time t = -2 log|x|.
struct ReturnEvent {
    ReturnWord word;
    double log_time = 0.0;
};

namespace detail {

inline double approx_log_abs(const BigRational& v) { return log_abs(v); }
inline double approx_log_abs(const AlgebraicReal& v) {
    if (v.is_rational()) return log_abs(v.rational_part());
    RatInterval iv = v.interval(64);
    return std::log(std::fabs((to_double(iv.lo) + to_double(iv.hi)) / 2));
}

inline BigRational abs_value(const BigRational& v) { return v.abs(); }
inline AlgebraicReal abs_value(const AlgebraicReal& v) { return v.sign() < 0 ? -v : v; }

}  // namespace detail

template <class V, class Y>
struct ReturnStepResult {
    ReturnEvent event;
    CFStep step;
    SectionPoint<V, Y> next;
};

/// Exact return step: digit map + y update + component switch; nullopt when
/// the expansion terminates (x = 0).
template <class V, class Y>
std::optional<ReturnStepResult<V, Y>> return_step(const CFKind& kind,
                                                  const SectionPoint<V, Y>& point) {
    auto r = planar_step(kind, point.x, point.y);
    if (!r) return std::nullopt;
    ReturnStepResult<V, Y> out;
    out.step = r->first.step;
    out.event.word = return_word(point.component, out.step.sign, out.step.digit);
    out.event.log_time = -2.0 * detail::approx_log_abs(point.x);
    out.next.component = next_component(point.component, out.step.sign);
    out.next.x = std::move(r->first.next);
    out.next.y = std::move(r->second);
    return out;
}

/// Full state of the lifted return map on an exact orbit: section point,
/// coset label, flow time (double), and the exact product of |x_j| whose
/// -2 log is that flow time.
template <class V, class Y>
struct SkewState {
    SectionPoint<V, Y> point;
    std::uint32_t label = 0;
    long k = 0;
    double flow_time = 0.0;
    V magnitude_product;
    std::vector<CFStep> digits;
};

template <class V, class Y>
SkewState<V, Y> make_skew_state(V x0, Y y0, std::uint32_t label = 0) {
    SkewState<V, Y> st;
    st.point = {-1, x0, std::move(y0)};
    st.label = label;
    st.magnitude_product = detail::make_value(x0, BigRational(1));
    return st;
}

template <class V, class Y>
std::optional<SkewState<V, Y>> skew_step(const SkewState<V, Y>& st, const CFKind& kind,
                                         const CosetTable& table) {
    auto r = return_step(kind, st.point);
    if (!r) return std::nullopt;
    SkewState<V, Y> out;
    out.label = apply_return_word(table, st.label, r->event.word.inverse());
    out.k = st.k + 1;
    out.flow_time = st.flow_time + r->event.log_time;
    out.magnitude_product = st.magnitude_product * detail::abs_value(st.point.x);
    out.digits = st.digits;
    out.digits.push_back(r->step);
    out.point = std::move(r->next);
    return out;
}

/// Label of the closed-form approximant matrix:
/// ((q_k, -q_{k-1}), (-p_k, p_{k-1})) when the walk sits on the sigma = -1
/// component (even number of eps = +1 steps), the index-shifted shape
/// otherwise. Independent oracle for the incremental skew label.
inline std::uint32_t approximant_matrix_label(std::span<const CFStep> digits, const CFKind& kind,
                                              const CosetTable& table) {
    auto ctx = table.residue_ctx();
    long plus_count = 0;
    for (const CFStep& s : digits)
        if (s.sign > 0) ++plus_count;
    const bool minus_component = plus_count % 2 == 0;

    Residue rp_prev(ctx), rp_cur(ctx), rq_prev(ctx), rq_cur(ctx);
    if (kind.family() == CFFamily::Rosen) {
        auto st = initial_approximants(kind.hecke_index());
        for (const CFStep& s : digits) st = push_approximant(st, s, kind);
        rp_prev = Residue::from_algebraic(ctx, st.p_prev);
        rp_cur = Residue::from_algebraic(ctx, st.p_cur);
        rq_prev = Residue::from_algebraic(ctx, st.q_prev);
        rq_cur = Residue::from_algebraic(ctx, st.q_cur);
    } else {
        auto st = initial_approximants();
        for (const CFStep& s : digits) st = push_approximant(st, s, kind);
        rp_prev = Residue::from_int(ctx, st.p_prev);
        rp_cur = Residue::from_int(ctx, st.p_cur);
        rq_prev = Residue::from_int(ctx, st.q_prev);
        rq_cur = Residue::from_int(ctx, st.q_cur);
    }
    ResidueMat mat = minus_component ? ResidueMat{rq_cur, -rq_prev, -rp_cur, rp_prev}
                                     : ResidueMat{rq_prev, -rq_cur, -rp_prev, rp_cur};
    auto label = table.lookup(mat);
    if (!label)
        throw std::logic_error("approximant_matrix_label: reduced matrix not in the table");
    return *label;
}

/// One observed step of the skew product, as the cusp statistics see it.
struct SkewSample {
    int component = -1;
    std::uint32_t label = 0;
};

struct CuspAverages {
    double psi_mean = 0.0;       // the halved two-indicator average
    double hit_frequency = 0.0;  // the same indicator without the 1/2
};

/// Time average of Psi = (1[sigma=-1, label in kappa_inf] +
/// 1[sigma=+1, label in kappa_zero]) / 2 along a trajectory, plus the
/// un-halved per-step hit frequency.
inline CuspAverages section_cusp_average(std::span<const SkewSample> trajectory,
                                         std::uint32_t cusp, const CuspTable& inf,
                                         const CuspTable& zero) {
    if (trajectory.empty()) throw std::invalid_argument("section_cusp_average: empty trajectory");
    std::uint64_t hits = 0;
    for (const SkewSample& s : trajectory) {
        const std::uint32_t id =
            s.component < 0 ? inf.cusp_of_label(s.label) : zero.cusp_of_label(s.label);
        if (id == cusp) ++hits;
    }
    CuspAverages out;
    out.hit_frequency = static_cast<double>(hits) / static_cast<double>(trajectory.size());
    out.psi_mean = out.hit_frequency / 2.0;
    return out;
}

struct TwistedRunOptions {
    bool record_steps = false;
    bool oracle_check = false;  // classify_fraction(p_k, q_k) must agree, exactly
};

struct TwistedRunResult {
    std::vector<std::uint64_t> cusp_counts;  // k >= 1 convention
    std::uint32_t k0_cusp = 0;               // class of p_0/q_0 = 0/1
    std::vector<std::uint32_t> step_cusps;
    std::size_t realized = 0;
    bool terminated = false;
};

/// Runs the skew product over iota H iota and transports each step's cusp
/// back to H, so step k reports the H-cusp containing p_k/q_k.
class TwistedClassifier {
  public:
    explicit TwistedClassifier(const SubgroupSpec& spec_h)
        : TwistedClassifier(CosetTable::build(spec_h)) {}

    explicit TwistedClassifier(CosetTable table_h)
        : table_h_(std::move(table_h)),
          table_c_(CosetTable::build(conjugate_spec(table_h_.spec()))),
          inf_h_(cusp_partition(table_h_, RelPoint::Infinity)),
          zero_h_(cusp_partition(table_h_, RelPoint::Zero)),
          inf_c_(cusp_partition(table_c_, RelPoint::Infinity)),
          zero_c_(cusp_partition(table_c_, RelPoint::Zero)) {
        IotaTransport tr = iota_transport(table_h_, table_c_);
        const std::uint32_t n = table_c_.index();
        cusp_when_minus_.resize(n);
        cusp_when_plus_.resize(n);
        for (std::uint32_t l = 0; l < n; ++l) {
            cusp_when_minus_[l] = tr.cusp_map[inf_c_.cusp_of_label(l)];
            cusp_when_plus_[l] = tr.cusp_map[zero_c_.cusp_of_label(l)];
        }
    }

    const CosetTable& table_h() const { return table_h_; }
    const CosetTable& table_c() const { return table_c_; }
    const CuspTable& inf_h() const { return inf_h_; }
    const CuspTable& zero_h() const { return zero_h_; }
    std::size_t cusp_count() const { return inf_h_.count(); }

    using RunOptions = TwistedRunOptions;
    using RunResult = TwistedRunResult;

    /// Consumes up to max_steps digits from the source.
    RunResult run(const CFKind& kind, DigitSource& source, std::size_t max_steps,
                  const RunOptions& opt = RunOptions()) const {
        RunResult out;
        out.cusp_counts.assign(cusp_count(), 0);
        // p_0/q_0 = 0/1 is the point iota * infinity, i.e. the coset H iota
        out.k0_cusp = inf_h_.cusp_of_label(table_h_.apply(0, Gen::Iota));

        std::uint32_t label = 0;
        int component = -1;

        std::optional<ApproximantPair<BigInt>> int_appr;
        std::optional<ApproximantPair<AlgebraicReal>> field_appr;
        if (opt.oracle_check) {
            if (kind.family() == CFFamily::Rosen)
                field_appr = initial_approximants(kind.hecke_index());
            else
                int_appr = initial_approximants();
        }

        for (std::size_t k = 1; k <= max_steps; ++k) {
            auto s = source.next();
            if (!s) {
                out.terminated = true;
                break;
            }
            label = update_label(table_c_, label, component, *s);
            component = next_component(component, s->sign);
            const std::uint32_t cusp =
                component < 0 ? cusp_when_minus_[label] : cusp_when_plus_[label];
            ++out.cusp_counts[cusp];
            if (opt.record_steps) out.step_cusps.push_back(cusp);
            ++out.realized;

            if (opt.oracle_check) {
                std::uint32_t direct;
                if (int_appr) {
                    *int_appr = push_approximant(*int_appr, *s, kind);
                    direct = classify_fraction(int_appr->p_cur, int_appr->q_cur, table_h_, inf_h_);
                } else {
                    *field_appr = push_approximant(*field_appr, *s, kind);
                    direct =
                        classify_fraction(field_appr->p_cur, field_appr->q_cur, table_h_, inf_h_);
                }
                if (direct != cusp)
                    throw std::logic_error(
                        "TwistedClassifier: twisted label disagrees with direct classification "
                        "at step " +
                        std::to_string(k));
            }
        }
        return out;
    }

  private:
    CosetTable table_h_;
    CosetTable table_c_;
    CuspTable inf_h_, zero_h_, inf_c_, zero_c_;
    std::vector<std::uint32_t> cusp_when_minus_, cusp_when_plus_;
};

/// Tab-separated trajectory dump: one record per step.
/// Columns: k, eps, d, sigma (post-step), coset label, cusp id under the
/// .infinity relation, cusp id under the .0 relation, t.
template <class V, class Y>
void dump_trajectory(std::ostream& os, const CFKind& kind, const CosetTable& table, V x0, Y y0,
                     std::size_t max_steps) {
    CuspTable inf = cusp_partition(table, RelPoint::Infinity);
    CuspTable zero = cusp_partition(table, RelPoint::Zero);
    os << "# k\teps\td\tsigma\tlabel\tcusp_inf\tcusp_zero\tt\n";
    auto st = make_skew_state<V, Y>(std::move(x0), std::move(y0));
    for (std::size_t k = 1; k <= max_steps; ++k) {
        auto next = skew_step(st, kind, table);
        if (!next) break;
        const CFStep& s = next->digits.back();
        os << next->k << '\t' << s.sign << '\t' << s.digit.to_string() << '\t'
           << next->point.component << '\t' << next->label << '\t'
           << inf.cusp_of_label(next->label) << '\t' << zero.cusp_of_label(next->label) << '\t'
           << (next->flow_time - st.flow_time) << '\n';
        st = std::move(*next);
    }
}

}  // namespace cuspdist
