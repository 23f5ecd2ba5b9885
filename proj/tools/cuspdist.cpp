// cuspdist: continued-fraction cusp-distribution experiments.
//
// Subcommands:
//   cusps       index, cusp classes and widths of a subgroup
//   expand      digits and exact approximants of one expansion
//   distribute  equidistribution experiment, JSON/CSV report
//   crosscheck  exact oracle suites (exit 1 on any failure)
//   measure     invariant-measure checks for one long orbit

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "cuspdist/crosscheck.hpp"
#include "cuspdist/harness.hpp"

using namespace cuspdist;

namespace {

int cmd_cusps(const std::string& group, const std::string& spec_text) {
    const int m = parse_group_argument(group);
    SubgroupSpec spec = parse_spec_argument(m, spec_text);
    CosetTable table = build_or_load_table(spec);
    std::cout << "group hecke:" << m << (m == 3 ? " (modular)" : "") << "\n";
    std::cout << "spec " << spec.canonical_string() << "\n";
    std::cout << "index " << table.index() << "\n";
    for (RelPoint p : {RelPoint::Infinity, RelPoint::Zero}) {
        CuspTable cusps = cusp_partition(table, p);
        std::cout << "relation ." << to_string(p) << ": " << cusps.count() << " classes\n";
        for (std::uint32_t c = 0; c < cusps.count(); ++c) {
            std::cout << "  cusp " << cusps.cusp_id[c] << " width " << cusps.width[c];
            if (table.has_residues() && p == RelPoint::Infinity) {
                std::cout << " column " << cusp_column_string(table, cusps, c);
            }
            std::cout << " labels";
            for (auto l : cusps.classes[c]) std::cout << ' ' << l;
            std::cout << "\n";
        }
    }
    return 0;
}

int cmd_expand(const std::string& kind_text, const std::string& value, std::uint64_t n,
               const std::string& group, const std::string& spec_text,
               const std::string& trajectory_path) {
    CFKind kind = CFKind::parse(kind_text);
    InputValue input = sample_input(InputMode::Explicit, 0, kind, 64, value);

    std::optional<CosetTable> table;
    if (!spec_text.empty()) {
        const int m = group.empty() ? kind.hecke_index() : parse_group_argument(group);
        table = build_or_load_table(parse_spec_argument(m, spec_text));
    }

    if (!trajectory_path.empty()) {
        if (!table) {
            std::cerr << "expand: --trajectory needs --spec\n";
            return 2;
        }
        std::ofstream os(trajectory_path);
        if (!os) {
            std::cerr << "expand: cannot write " << trajectory_path << "\n";
            return 2;
        }
        if (kind.family() == CFFamily::Rosen) {
            dump_trajectory(os, kind, *table, *input.algebraic, AlgebraicReal(kind.hecke_index()),
                            n);
        } else {
            dump_trajectory(os, kind, *table, *input.rational, BigRational(0), n);
        }
        std::cout << "trajectory written to " << trajectory_path << "\n";
    }

    DigitSource src = make_digit_source(kind, input, n);
    bool terminated = false;
    std::uint64_t k = 0;
    std::cout << "digits:";
    std::vector<CFStep> steps;
    for (; k < n; ++k) {
        auto s = src.next();
        if (!s) {
            terminated = true;
            break;
        }
        std::cout << ' ';
        if (kind.signed_digits()) std::cout << (s->sign > 0 ? "+" : "-") << ":";
        std::cout << s->digit.to_string();
        steps.push_back(*s);
    }
    std::cout << "\napproximants:";
    if (kind.family() == CFFamily::Rosen) {
        auto st = initial_approximants(kind.hecke_index());
        for (const auto& s : steps) {
            st = push_approximant(st, s, kind);
            std::cout << " (" << st.p_cur.to_string() << ")/(" << st.q_cur.to_string() << ")";
        }
    } else {
        auto st = initial_approximants();
        for (const auto& s : steps) {
            st = push_approximant(st, s, kind);
            std::cout << ' ' << st.p_cur.to_string() << '/' << st.q_cur.to_string();
        }
    }
    std::cout << "\n";
    if (terminated) std::cout << "expansion terminated after " << k << " digits\n";
    return 0;
}

int cmd_distribute(ExperimentConfig cfg, const std::string& format, const std::string& out_path) {
    DistributionReport rep = run_distribution(cfg);
    const std::string payload =
        format == "csv" ? rep.to_csv() : rep.to_json().dump(2) + "\n";
    if (!out_path.empty()) {
        std::ofstream os(out_path);
        if (!os) {
            std::cerr << "distribute: cannot write " << out_path << "\n";
            return 2;
        }
        os << payload;
    } else {
        std::cout << payload;
    }
    std::cerr << "index " << rep.index << ", pooled steps " << rep.total_steps << ", truncated "
              << rep.truncated_samples << ", resampled " << rep.resampled << "\n";
    double worst = 0.0;
    for (const auto& c : rep.cusps) worst = std::max(worst, std::fabs(c.observed - c.expected));
    std::cerr << "max |observed - expected| = " << worst << "\n";
    return 0;
}

int cmd_crosscheck(std::uint64_t seed) {
    bool all = true;
    for (const CheckResult& r : run_all_crosschecks(seed)) {
        std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << "\n";
        all = all && r.passed;
    }
    return all ? 0 : 1;
}

int cmd_measure(const std::string& kind_text, std::uint64_t n, std::uint64_t seed, int bins,
                std::uint64_t cloud, const std::string& out_path) {
    MeasureReport rep = run_measure_check(CFKind::parse(kind_text), n, seed, bins, cloud);
    const std::string payload = rep.to_json().dump(2) + "\n";
    if (!out_path.empty()) {
        std::ofstream os(out_path);
        if (!os) {
            std::cerr << "measure: cannot write " << out_path << "\n";
            return 2;
        }
        os << payload;
    } else {
        std::cout << payload;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"continued-fraction approximants, coset dynamics, cusp distribution"};
    app.require_subcommand(1);

    auto* cusps = app.add_subcommand("cusps", "cusp classes and widths of a subgroup");
    std::string group = "modular", spec_text;
    cusps->add_option("--group", group, "modular or hecke:M");
    cusps->add_option("--spec", spec_text, "mod:K or perm:FILE")->required();

    auto* expand = app.add_subcommand("expand", "digits and approximants of one expansion");
    std::string kind_text = "regular", value, traj;
    std::uint64_t n = 10;
    std::string expand_group, expand_spec;
    expand->add_option("--kind", kind_text, "regular | alpha:A | rosen:M");
    expand->add_option("--x", value, "exact value: p/q, or a lambda literal for rosen")
        ->required();
    expand->add_option("--n", n, "max digits");
    expand->add_option("--group", expand_group, "group for --trajectory");
    expand->add_option("--spec", expand_spec, "subgroup for --trajectory");
    expand->add_option("--trajectory", traj, "write a TSV trajectory dump here");

    auto* dist = app.add_subcommand("distribute", "cusp equidistribution experiment");
    std::string dist_kind = "regular", dist_group = "modular", dist_spec, dist_mode = "adaptive";
    std::string dist_config, dist_format = "json", dist_out;
    std::uint64_t dist_n = 10000, dist_s = 10, dist_seed = 1;
    dist->add_option("--config", dist_config, "key=value config file (overrides flags)");
    dist->add_option("--kind", dist_kind, "regular | alpha:A | rosen:M");
    dist->add_option("--group", dist_group, "modular or hecke:M");
    dist->add_option("--spec", dist_spec, "mod:K or perm:FILE");
    dist->add_option("--n", dist_n, "digits per sample");
    dist->add_option("--s", dist_s, "sample count");
    dist->add_option("--seed", dist_seed, "seed");
    dist->add_option("--mode", dist_mode, "adaptive | rational[:BITS] | value:X");
    dist->add_option("--format", dist_format, "json or csv");
    dist->add_option("--out", dist_out, "output path (stdout otherwise)");

    auto* cross = app.add_subcommand("crosscheck", "exact oracle suites");
    std::uint64_t cross_seed = 20120727;
    cross->add_option("--seed", cross_seed, "seed");

    auto* measure = app.add_subcommand("measure", "invariant-measure checks");
    std::string m_kind = "regular", m_out;
    std::uint64_t m_n = 100000, m_seed = 1, m_cloud = 20000;
    int m_bins = 20;
    measure->add_option("--kind", m_kind, "regular | alpha:A | rosen:M");
    measure->add_option("--n", m_n, "orbit length");
    measure->add_option("--seed", m_seed, "seed");
    measure->add_option("--bins", m_bins, "histogram bins");
    measure->add_option("--cloud", m_cloud, "planar cloud size (regular only)");
    measure->add_option("--out", m_out, "output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (cusps->parsed()) return cmd_cusps(group, spec_text);
        if (expand->parsed())
            return cmd_expand(kind_text, value, n, expand_group, expand_spec, traj);
        if (dist->parsed()) {
            ExperimentConfig cfg;
            if (!dist_config.empty()) {
                cfg = parse_config_file(dist_config);
            } else {
                if (dist_spec.empty()) {
                    std::cerr << "distribute: --spec (or --config) is required\n";
                    return 2;
                }
                cfg.kind = CFKind::parse(dist_kind);
                cfg.spec = parse_spec_argument(parse_group_argument(dist_group), dist_spec);
                cfg.digits = dist_n;
                cfg.samples = dist_s;
                cfg.seed = dist_seed;
                if (dist_mode == "adaptive") {
                    cfg.mode = InputMode::RandomAdaptive;
                } else if (dist_mode.rfind("rational", 0) == 0) {
                    cfg.mode = InputMode::RandomRational;
                    const auto colon = dist_mode.find(':');
                    if (colon != std::string::npos)
                        cfg.rational_bits =
                            static_cast<unsigned>(std::stoul(dist_mode.substr(colon + 1)));
                } else if (dist_mode.rfind("value:", 0) == 0) {
                    cfg.mode = InputMode::Explicit;
                    cfg.explicit_value = dist_mode.substr(6);
                } else {
                    std::cerr << "distribute: bad --mode\n";
                    return 2;
                }
            }
            if (dist_format != "json" && dist_format != "csv") {
                std::cerr << "distribute: --format must be json or csv\n";
                return 2;
            }
            return cmd_distribute(cfg, dist_format, dist_out);
        }
        if (cross->parsed()) return cmd_crosscheck(cross_seed);
        if (measure->parsed()) return cmd_measure(m_kind, m_n, m_seed, m_bins, m_cloud, m_out);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
