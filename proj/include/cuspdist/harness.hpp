#pragma once

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <future>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "cuspdist/adaptive.hpp"
#include "cuspdist/cf.hpp"
#include "cuspdist/orbit.hpp"
#include "cuspdist/skew.hpp"
#include "cuspdist/subgroup.hpp"

namespace cuspdist {

enum class InputMode { RandomAdaptive, RandomRational, Explicit };

inline const char* to_string(InputMode m) {
    switch (m) {
        case InputMode::RandomAdaptive: return "adaptive";
        case InputMode::RandomRational: return "rational";
        case InputMode::Explicit: return "explicit";
    }
    return "?";
}

struct ExperimentConfig {
    CFKind kind = CFKind::regular();
    SubgroupSpec spec = SubgroupSpec::congruence(3, 2);
    std::uint64_t digits = 1000;  // N: digits per sample
    std::uint64_t samples = 1;    // S
    std::uint64_t seed = 1;
    InputMode mode = InputMode::RandomAdaptive;
    unsigned rational_bits = 64;
    std::string explicit_value;

    void validate() const {
        if (digits < 1) throw std::domain_error("config: n must be >= 1");
        if (samples < 1) throw std::domain_error("config: s must be >= 1");
        if (mode == InputMode::RandomRational && rational_bits < 16)
            throw std::domain_error("config: rational bit length must be >= 16");
        if (mode == InputMode::Explicit && explicit_value.empty())
            throw std::domain_error("config: explicit mode needs a value");
        if (kind.family() == CFFamily::Rosen && kind.hecke_index() != spec.m)
            throw std::domain_error("config: Rosen index must match the subgroup's group");
        if (kind.family() != CFFamily::Rosen && spec.m != 3)
            throw std::domain_error("config: regular/alpha kinds live over the modular group");
    }
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t sample,
                                  std::uint64_t attempt) {
    return splitmix64(seed ^ splitmix64(sample + 1) ^ (splitmix64(attempt) << 1));
}

/// Parses a Q(lambda_m) literal: sum of terms `c`, `c*l`, `l^k`, `-l`, with
/// rational c, e.g. "1/2*l - 1/3" or "l^2-2".
inline AlgebraicReal parse_algebraic(int m, const std::string& text) {
    AlgebraicReal acc(m);
    std::string cleaned;
    for (char ch : text)
        if (!isspace(static_cast<unsigned char>(ch))) cleaned.push_back(ch);
    if (cleaned.empty()) throw std::invalid_argument("parse_algebraic: empty literal");
    std::size_t pos = 0;
    while (pos < cleaned.size()) {
        int sign = 1;
        while (pos < cleaned.size() && (cleaned[pos] == '+' || cleaned[pos] == '-')) {
            if (cleaned[pos] == '-') sign = -sign;
            ++pos;
        }
        std::size_t end = pos;
        while (end < cleaned.size() && cleaned[end] != '+' && cleaned[end] != '-') ++end;
        std::string term = cleaned.substr(pos, end - pos);
        pos = end;
        if (term.empty()) throw std::invalid_argument("parse_algebraic: dangling sign");

        BigRational coeff(1);
        long power = 0;
        const std::size_t lpos = term.find('l');
        if (lpos == std::string::npos) {
            coeff = BigRational::parse(term);
        } else {
            std::string head = term.substr(0, lpos);
            if (!head.empty() && head.back() == '*') head.pop_back();
            if (!head.empty()) coeff = BigRational::parse(head);
            power = 1;
            if (lpos + 1 < term.size()) {
                if (term[lpos + 1] != '^')
                    throw std::invalid_argument("parse_algebraic: bad lambda power");
                power = std::stol(term.substr(lpos + 2));
            }
        }
        AlgebraicReal mono = AlgebraicReal::from_rational(m, sign < 0 ? -coeff : coeff);
        AlgebraicReal lam = AlgebraicReal::lambda(m);
        for (long i = 0; i < power; ++i) mono *= lam;
        acc += mono;
    }
    return acc;
}

/// Sampled input value: exactly one member is engaged, matching the mode
/// and kind (Rosen exact values are field elements).
struct InputValue {
    std::optional<BigRational> rational;
    std::optional<AlgebraicReal> algebraic;
    AdaptiveReal adaptive;
};

/// Deterministic input sampling: uniform on the kind's fundamental
/// interval, driven entirely by (mode, seed).
inline InputValue sample_input(InputMode mode, std::uint64_t seed, const CFKind& kind,
                               unsigned rational_bits = 64,
                               const std::string& explicit_value = "") {
    InputValue out;
    switch (mode) {
        case InputMode::RandomAdaptive: {
            auto stream = std::make_shared<BitStream>(seed);
            AdaptiveReal u = AdaptiveReal::uniform01(stream);
            if (kind.family() == CFFamily::Regular) {
                out.adaptive = u;
            } else if (kind.family() == CFFamily::Alpha) {
                BigRational shift = kind.alpha_value() - BigRational(1);
                out.adaptive = AdaptiveReal([u, shift](unsigned long bits) {
                    return u.at(bits + 1) + RatInterval(shift);
                });
            } else {
                const int m = kind.hecke_index();
                out.adaptive = AdaptiveReal([u, m](unsigned long bits) {
                    RatInterval centered =
                        u.at(bits + 4) + RatInterval(BigRational(-1, 2));
                    return centered * NumberField::get(m)->lambda(bits + 4);
                });
            }
            return out;
        }
        case InputMode::RandomRational: {
            BitStream stream(seed);
            BigRational u = dyadic(stream.prefix(rational_bits), rational_bits);
            if (kind.family() == CFFamily::Regular) {
                out.rational = u;
            } else if (kind.family() == CFFamily::Alpha) {
                out.rational = u + kind.alpha_value() - BigRational(1);
            } else {
                out.algebraic = AlgebraicReal::lambda(kind.hecke_index()) *
                                (u - BigRational(1, 2));
            }
            return out;
        }
        case InputMode::Explicit: {
            if (kind.family() == CFFamily::Rosen) {
                AlgebraicReal v = parse_algebraic(kind.hecke_index(), explicit_value);
                if (!in_fundamental_interval(kind, v))
                    throw std::domain_error("sample_input: value outside the Rosen interval");
                out.algebraic = std::move(v);
            } else {
                BigRational v = BigRational::parse(explicit_value);
                if (!in_fundamental_interval(kind, v))
                    throw std::domain_error("sample_input: value outside the fundamental interval");
                out.rational = std::move(v);
            }
            return out;
        }
    }
    throw std::logic_error("sample_input: unreachable");
}

/// Digit stream for a sampled input; digits_hint sizes the adaptive
/// orbit's initial precision.
inline DigitSource make_digit_source(const CFKind& kind, const InputValue& input,
                                     std::size_t digits_hint) {
    if (input.rational) {
        if (kind.family() == CFFamily::Rosen)
            throw std::domain_error("make_digit_source: Rosen needs a field or adaptive input");
        return DigitSource(ExactOrbit<BigRational>(kind, *input.rational));
    }
    if (input.algebraic) return DigitSource(ExactOrbit<AlgebraicReal>(kind, *input.algebraic));
    if (!input.adaptive.valid()) throw std::logic_error("make_digit_source: empty input");
    return DigitSource(AdaptiveOrbit(kind, input.adaptive, digits_hint));
}

struct CuspReport {
    std::uint32_t id = 0;
    std::uint32_t width = 0;
    double expected = 0.0;
    std::uint64_t count = 0;          // k >= 1 convention
    double observed = 0.0;
    std::uint64_t count_with_k0 = 0;  // k >= 0 convention (p_0/q_0 = 0/1 included)
    double observed_with_k0 = 0.0;
    std::string column;
};

struct SampleReport {
    std::uint64_t id = 0;
    std::uint64_t realized = 0;
    bool truncated = false;
    std::vector<std::uint64_t> counts;
};

struct DistributionReport {
    ExperimentConfig config;
    std::uint32_t index = 0;
    std::vector<CuspReport> cusps;
    std::vector<SampleReport> samples;
    std::uint64_t total_steps = 0;
    std::uint64_t truncated_samples = 0;
    std::uint64_t resampled = 0;

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["schema_version"] = 1;
        nlohmann::ordered_json cfg;
        cfg["kind"] = config.kind.to_string();
        cfg["group"] = "hecke:" + std::to_string(config.spec.m);
        cfg["spec"] = config.spec.canonical_string();
        cfg["n"] = config.digits;
        cfg["s"] = config.samples;
        cfg["seed"] = config.seed;
        cfg["mode"] = to_string(config.mode);
        if (config.mode == InputMode::RandomRational) cfg["bits"] = config.rational_bits;
        if (config.mode == InputMode::Explicit) cfg["value"] = config.explicit_value;
        j["config"] = cfg;
        j["group"] = "hecke:" + std::to_string(config.spec.m);
        j["index"] = index;
        nlohmann::ordered_json carr = nlohmann::ordered_json::array();
        for (const auto& c : cusps) {
            nlohmann::ordered_json e;
            e["id"] = c.id;
            e["width"] = c.width;
            e["expected"] = c.expected;
            e["count"] = c.count;
            e["observed"] = c.observed;
            e["count_with_k0"] = c.count_with_k0;
            e["observed_with_k0"] = c.observed_with_k0;
            if (!c.column.empty()) e["column"] = c.column;
            carr.push_back(std::move(e));
        }
        j["cusps"] = carr;
        nlohmann::ordered_json sarr = nlohmann::ordered_json::array();
        for (const auto& s : samples) {
            nlohmann::ordered_json e;
            e["id"] = s.id;
            e["realized"] = s.realized;
            e["truncated"] = s.truncated;
            e["counts"] = s.counts;
            sarr.push_back(std::move(e));
        }
        j["samples"] = sarr;
        j["total_steps"] = total_steps;
        j["truncated_samples"] = truncated_samples;
        j["resampled"] = resampled;
        j["seed"] = config.seed;
        return j;
    }

    /// Flat CSV projection of the cusp table.
    std::string to_csv() const {
        std::ostringstream os;
        os << "cusp_id,width,expected,count,observed,count_with_k0,observed_with_k0\n";
        for (const auto& c : cusps) {
            os << c.id << ',' << c.width << ',' << c.expected << ',' << c.count << ','
               << c.observed << ',' << c.count_with_k0 << ',' << c.observed_with_k0 << "\n";
        }
        return os.str();
    }
};

/// Renders the representative reduced column of a cusp class (congruence
/// tables; empty otherwise).
inline std::string cusp_column_string(const CosetTable& table, const CuspTable& inf,
                                      std::uint32_t cusp) {
    if (!table.has_residues()) return "";
    const std::uint32_t label = inf.classes[cusp].front();
    const ResidueMat& m = table.residue(label);
    auto render = [](const Residue& r) {
        const auto& c = r.coeffs();
        if (c.size() == 1) return std::to_string(c[0]);
        std::string s = "[";
        for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
        return s + "]";
    };
    return render(m.a) + "/" + render(m.c);
}

/// Table construction with the optional cache directory
/// (CUSPDIST_CACHE_DIR); cache hits are loaded and verified against the
/// spec, misses are built and written back deterministically.
inline CosetTable build_or_load_table(const SubgroupSpec& spec) {
    const char* dir = std::getenv("CUSPDIST_CACHE_DIR");
    if (!dir || !*dir) return CosetTable::build(spec);
    const std::string path = std::string(dir) + "/" + spec_cache_key(spec) + ".tbl";
    {
        std::ifstream in(path);
        if (in) return CosetTable::load(in, spec);
    }
    CosetTable t = CosetTable::build(spec);
    std::ofstream out(path);
    if (out) t.save(out);
    return t;
}

/// Runs the full experiment: for each sample, an iota-twisted skew run of
/// up to N digits, pooled into per-cusp counts against the expected
/// relative widths. Undecidable-floor samples are dropped, counted, and
/// redrawn deterministically.
inline DistributionReport run_distribution(const ExperimentConfig& config) {
    config.validate();
    TwistedClassifier tc{build_or_load_table(config.spec)};
    const CuspTable& inf = tc.inf_h();

    DistributionReport rep;
    rep.config = config;
    rep.index = tc.table_h().index();

    // samples are independent with per-sample seed chains, so they fan out
    // to workers; the reduction below is by sample id, which keeps reports
    // byte-identical regardless of scheduling
    struct Outcome {
        SampleReport report;
        std::uint64_t resampled = 0;
        std::uint32_t k0_cusp = 0;
    };
    auto run_one = [&](std::uint64_t s) {
        Outcome out;
        for (std::uint64_t attempt = 0;; ++attempt) {
            if (attempt > 32)
                throw undecidable_floor("run_distribution: sample kept hitting the precision cap");
            InputValue input =
                sample_input(config.mode, derived_seed(config.seed, s, attempt), config.kind,
                             config.rational_bits, config.explicit_value);
            DigitSource src = make_digit_source(config.kind, input, config.digits);
            try {
                auto res = tc.run(config.kind, src, config.digits);
                out.report.id = s;
                out.report.realized = res.realized;
                out.report.truncated = res.terminated;
                out.report.counts = std::move(res.cusp_counts);
                out.k0_cusp = res.k0_cusp;
                return out;
            } catch (const undecidable_floor&) {
                ++out.resampled;
            }
        }
    };

    std::vector<Outcome> outcomes(config.samples);
    const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                             static_cast<unsigned>(config.samples)));
    if (workers <= 1) {
        for (std::uint64_t s = 0; s < config.samples; ++s) outcomes[s] = run_one(s);
    } else {
        std::vector<std::future<void>> futures;
        futures.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            futures.push_back(std::async(std::launch::async, [&, w]() {
                for (std::uint64_t s = w; s < config.samples; s += workers)
                    outcomes[s] = run_one(s);
            }));
        }
        for (auto& f : futures) f.get();
    }

    std::vector<std::uint64_t> pooled(tc.cusp_count(), 0);
    std::uint64_t k0_hits = 0;
    std::uint32_t k0_cusp = 0;
    for (std::uint64_t s = 0; s < config.samples; ++s) {
        Outcome& out = outcomes[s];
        rep.resampled += out.resampled;
        if (out.report.truncated) ++rep.truncated_samples;
        for (std::size_t c = 0; c < pooled.size(); ++c) pooled[c] += out.report.counts[c];
        rep.total_steps += out.report.realized;
        k0_cusp = out.k0_cusp;
        ++k0_hits;
        rep.samples.push_back(std::move(out.report));
    }

    const double denom = static_cast<double>(rep.total_steps);
    const double denom_k0 = static_cast<double>(rep.total_steps + k0_hits);
    for (std::uint32_t c = 0; c < tc.cusp_count(); ++c) {
        CuspReport cr;
        cr.id = c;
        cr.width = inf.width[c];
        cr.expected = static_cast<double>(inf.width[c]) / static_cast<double>(rep.index);
        cr.count = pooled[c];
        cr.observed = denom > 0 ? static_cast<double>(pooled[c]) / denom : 0.0;
        cr.count_with_k0 = pooled[c] + (c == k0_cusp ? k0_hits : 0);
        cr.observed_with_k0 =
            denom_k0 > 0 ? static_cast<double>(cr.count_with_k0) / denom_k0 : 0.0;
        cr.column = cusp_column_string(tc.table_h(), inf, c);
        rep.cusps.push_back(std::move(cr));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// invariant measure checks
// ---------------------------------------------------------------------------

struct MeasureReport {
    std::string kind;
    std::uint64_t requested = 0;
    std::uint64_t realized = 0;
    int bins = 0;
    std::vector<double> observed;
    std::vector<double> expected;
    double max_bin_deviation = 0.0;
    bool against_exact_density = false;  // true for Regular, else split-half

    // planar box Monte Carlo (Regular only)
    std::uint64_t cloud_points = 0;
    int pushes = 0;
    double box_weight = 0.0;
    double box_freq_initial = 0.0;
    double box_freq_pushed = 0.0;
    double standard_error = 0.0;
    double z_initial = 0.0;
    double z_pushed = 0.0;
    std::uint64_t terminated_points = 0;

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["schema_version"] = 1;
        j["kind"] = kind;
        j["requested"] = requested;
        j["realized"] = realized;
        j["bins"] = bins;
        j["observed"] = observed;
        j["expected"] = expected;
        j["max_bin_deviation"] = max_bin_deviation;
        j["against_exact_density"] = against_exact_density;
        if (cloud_points > 0) {
            j["cloud_points"] = cloud_points;
            j["pushes"] = pushes;
            j["box_weight"] = box_weight;
            j["box_freq_initial"] = box_freq_initial;
            j["box_freq_pushed"] = box_freq_pushed;
            j["standard_error"] = standard_error;
            j["z_initial"] = z_initial;
            j["z_pushed"] = z_pushed;
            j["terminated_points"] = terminated_points;
        }
        return j;
    }
};

/// Normalized mu-mass of [0,a]x[0,b] under (1+xy)^-2 dx dy by composite
/// Simpson quadrature over the full Omega = [0,1]^2; the independent
/// numeric oracle for the box statistics.
inline double box_weight_quadrature(double a, double b, int panels = 128) {
    auto simpson2d = [panels](double x1, double y1) {
        const int n = panels;  // even
        const double hx = x1 / n, hy = y1 / n;
        double total = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double wx = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            for (int j = 0; j <= n; ++j) {
                const double wy = (j == 0 || j == n) ? 1.0 : (j % 2 ? 4.0 : 2.0);
                const double x = i * hx, y = j * hy;
                total += wx * wy / ((1.0 + x * y) * (1.0 + x * y));
            }
        }
        return total * hx * hy / 9.0;
    };
    return simpson2d(a, b) / simpson2d(1.0, 1.0);
}

namespace detail {

inline BigRational draw_dyadic(std::mt19937_64& eng, unsigned bits) {
    BigInt k;
    unsigned remaining = bits;
    while (remaining >= 64) {
        mpz_mul_2exp(k.raw(), k.raw(), 64);
        BigInt w(static_cast<unsigned long>(eng()));
        k += w;
        remaining -= 64;
    }
    if (remaining > 0) {
        mpz_mul_2exp(k.raw(), k.raw(), remaining);
        BigInt w(static_cast<unsigned long>(eng() >> (64 - remaining)));
        k += w;
    }
    return dyadic(k, bits);
}

}  // namespace detail

/// One long orbit histogram against the exact Gauss density (Regular), or
/// a split-half stationarity check (Alpha/Rosen); plus the planar box
/// Monte Carlo for the Regular natural extension.
inline MeasureReport run_measure_check(const CFKind& kind, std::uint64_t steps,
                                       std::uint64_t seed, int bins = 20,
                                       std::uint64_t cloud_points = 20000, int pushes = 8) {
    MeasureReport rep;
    rep.kind = kind.to_string();
    rep.requested = steps;
    rep.bins = bins;
    if (steps == 0) return rep;

    std::vector<std::uint64_t> hist(bins, 0);
    std::vector<std::uint64_t> hist_first_half(bins, 0);

    if (kind.family() == CFFamily::Regular) {
        rep.against_exact_density = true;
        // exact Gauss orbit of a random dyadic rational long enough to
        // survive `steps` Euclidean divisions
        const unsigned long total_bits =
            static_cast<unsigned long>(2.0 * static_cast<double>(steps)) + 4096;
        BitStream stream(seed);
        BigInt num = stream.prefix(total_bits);
        BigInt den = pow2(total_bits);
        std::uint64_t k = 0;
        while (k < steps && !num.is_zero()) {
            const double x = std::exp2(log2_abs(num) - log2_abs(den));
            int b = static_cast<int>(x * bins);
            if (b >= bins) b = bins - 1;
            if (b < 0) b = 0;
            ++hist[b];
            if (k < steps / 2) ++hist_first_half[b];
            ++k;
            auto [d, rem] = floor_divmod(den, num);
            den = num;
            num = rem;
        }
        rep.realized = k;
        for (int b = 0; b < bins; ++b) {
            const double lo = static_cast<double>(b) / bins;
            const double hi = static_cast<double>(b + 1) / bins;
            rep.expected.push_back(std::log2((1.0 + hi) / (1.0 + lo)));
        }
    } else {
        // empirical stationarity: second half against first half
        rep.against_exact_density = false;
        InputValue input = sample_input(InputMode::RandomAdaptive, seed, kind);
        AdaptiveOrbit orbit(kind, input.adaptive, steps);
        // bin over the fundamental interval [lo, lo + len)
        double lo = 0.0, len = 1.0;
        if (kind.family() == CFFamily::Alpha) {
            lo = to_double(kind.alpha_value()) - 1.0;
        } else {
            const double lam = to_double(NumberField::get(kind.hecke_index())->lambda(64).lo);
            lo = -lam / 2;
            len = lam;
        }
        std::uint64_t k = 0;
        while (k < steps) {
            if (!orbit.next()) break;
            const RatInterval& iv = orbit.current_interval();
            const double x = (to_double(iv.lo) + to_double(iv.hi)) / 2;
            int b = static_cast<int>((x - lo) / len * bins);
            if (b >= bins) b = bins - 1;
            if (b < 0) b = 0;
            ++hist[b];
            if (k < steps / 2) ++hist_first_half[b];
            ++k;
        }
        rep.realized = k;
        const double half = static_cast<double>(steps / 2);
        for (int b = 0; b < bins; ++b)
            rep.expected.push_back(half > 0 ? hist_first_half[b] / half : 0.0);
    }

    for (int b = 0; b < bins; ++b) {
        const double f = rep.realized ? static_cast<double>(hist[b]) /
                                            static_cast<double>(rep.realized)
                                      : 0.0;
        rep.observed.push_back(f);
        const double dev = std::fabs(f - rep.expected[b]);
        if (dev > rep.max_bin_deviation) rep.max_bin_deviation = dev;
    }

    if (kind.family() != CFFamily::Regular || cloud_points == 0) return rep;

    // planar cloud ~ mu via exact rejection, pushed through planar_step
    rep.cloud_points = cloud_points;
    rep.pushes = pushes;
    rep.box_weight = box_weight_quadrature(0.5, 0.5);
    std::mt19937_64 eng(splitmix64(seed ^ 0xb0cefull));
    const BigRational one(1);
    const BigRational half(1, 2);
    std::uint64_t in_box_initial = 0, in_box_pushed = 0, alive = 0;
    for (std::uint64_t p = 0; p < cloud_points; ++p) {
        BigRational x, y;
        for (;;) {
            x = detail::draw_dyadic(eng, 96);
            y = detail::draw_dyadic(eng, 96);
            BigRational u = detail::draw_dyadic(eng, 96);
            BigRational density_den = one + x * y;
            if (u * density_den * density_den < one) break;
        }
        if (x < half && y < half) ++in_box_initial;
        bool dead = false;
        for (int i = 0; i < pushes; ++i) {
            auto r = planar_step(CFKind::regular(), x, y);
            if (!r) {
                dead = true;
                break;
            }
            x = r->first.next;
            y = r->second;
        }
        if (dead) {
            ++rep.terminated_points;
            continue;
        }
        ++alive;
        if (x < half && y < half) ++in_box_pushed;
    }
    rep.box_freq_initial =
        static_cast<double>(in_box_initial) / static_cast<double>(cloud_points);
    rep.box_freq_pushed = alive ? static_cast<double>(in_box_pushed) / static_cast<double>(alive)
                                : 0.0;
    rep.standard_error =
        std::sqrt(rep.box_weight * (1.0 - rep.box_weight) / static_cast<double>(cloud_points));
    rep.z_initial = (rep.box_freq_initial - rep.box_weight) / rep.standard_error;
    rep.z_pushed = (rep.box_freq_pushed - rep.box_weight) / rep.standard_error;
    return rep;
}

// ---------------------------------------------------------------------------
// config files: simple key=value lines, # comments
// ---------------------------------------------------------------------------

inline SubgroupSpec parse_spec_argument(int m, const std::string& text) {
    if (text.rfind("mod:", 0) == 0) {
        return SubgroupSpec::congruence(m, static_cast<std::uint32_t>(std::stoul(text.substr(4))));
    }
    if (text.rfind("perm:", 0) == 0) {
        std::ifstream in(text.substr(5));
        if (!in) throw std::invalid_argument("spec: cannot open permutation file");
        std::vector<std::uint32_t> pt, pi;
        std::string line;
        auto read_perm = [&](std::vector<std::uint32_t>& out) {
            while (std::getline(in, line)) {
                if (line.empty() || line[0] == '#') continue;
                std::istringstream row(line);
                std::uint32_t v;
                while (row >> v) out.push_back(v);
                return;
            }
            throw std::invalid_argument("spec: permutation file needs two lines");
        };
        read_perm(pt);
        read_perm(pi);
        return SubgroupSpec::permutation(m, std::move(pt), std::move(pi));
    }
    throw std::invalid_argument("spec: expected mod:K or perm:FILE");
}

inline int parse_group_argument(const std::string& text) {
    if (text == "modular") return 3;
    if (text.rfind("hecke:", 0) == 0) return std::stoi(text.substr(6));
    throw std::invalid_argument("group: expected modular or hecke:M");
}

inline ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    ExperimentConfig cfg;
    int group_m = 3;
    std::string spec_text = "mod:2";
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("config: expected key=value");
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        if (key == "kind") cfg.kind = CFKind::parse(val);
        else if (key == "group") group_m = parse_group_argument(val);
        else if (key == "spec") spec_text = val;
        else if (key == "n") cfg.digits = std::stoull(val);
        else if (key == "s") cfg.samples = std::stoull(val);
        else if (key == "seed") cfg.seed = std::stoull(val);
        else if (key == "mode") {
            if (val == "adaptive") cfg.mode = InputMode::RandomAdaptive;
            else if (val.rfind("rational", 0) == 0) {
                cfg.mode = InputMode::RandomRational;
                const auto colon = val.find(':');
                if (colon != std::string::npos)
                    cfg.rational_bits = static_cast<unsigned>(std::stoul(val.substr(colon + 1)));
            } else if (val.rfind("value:", 0) == 0) {
                cfg.mode = InputMode::Explicit;
                cfg.explicit_value = val.substr(6);
            } else {
                throw std::invalid_argument("config: bad mode " + val);
            }
        } else {
            throw std::invalid_argument("config: unknown key " + key);
        }
    }
    cfg.spec = parse_spec_argument(group_m, spec_text);
    return cfg;
}

}  // namespace cuspdist
