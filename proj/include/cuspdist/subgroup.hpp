#pragma once

#include <cstdint>
#include <deque>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cuspdist/bigint.hpp"
#include "cuspdist/errors.hpp"
#include "cuspdist/field.hpp"
#include "cuspdist/mat2.hpp"

namespace cuspdist {

/// Generator letters for words acting on cosets by right multiplication:
/// T is the translation generator (gamma_m; the classical T for m = 3),
/// Iota is z -> -1/z. Words apply left to right.
enum class Gen : std::uint8_t { T, Tinv, Iota };

enum class RelPoint : std::uint8_t { Infinity, Zero };

inline const char* to_string(RelPoint p) { return p == RelPoint::Infinity ? "inf" : "zero"; }

/// A finite-index subgroup of the Hecke group Gamma_m (m = 3 is the
/// modular group), given either as a principal congruence level or as the
/// permutation action of the generators on cosets.
struct SubgroupSpec {
    int m = 3;
    bool is_congruence = true;
    std::uint32_t modulus = 2;
    std::vector<std::uint32_t> perm_t;     // permutation case: right mult by T
    std::vector<std::uint32_t> perm_iota;  // right mult by iota

    static SubgroupSpec congruence(int m, std::uint32_t modulus) {
        if (m < 3) throw std::domain_error("SubgroupSpec: m must be >= 3");
        if (modulus < 2) throw std::domain_error("SubgroupSpec: modulus must be >= 2");
        SubgroupSpec s;
        s.m = m;
        s.is_congruence = true;
        s.modulus = modulus;
        return s;
    }

    static SubgroupSpec permutation(int m, std::vector<std::uint32_t> t,
                                    std::vector<std::uint32_t> iota) {
        if (m < 3) throw std::domain_error("SubgroupSpec: m must be >= 3");
        SubgroupSpec s;
        s.m = m;
        s.is_congruence = false;
        s.perm_t = std::move(t);
        s.perm_iota = std::move(iota);
        return s;
    }

    std::string canonical_string() const {
        std::string out = "hecke:" + std::to_string(m) + ";";
        if (is_congruence) {
            out += "mod:" + std::to_string(modulus);
        } else {
            out += "perm:" + std::to_string(perm_t.size()) + ":";
            for (std::size_t i = 0; i < perm_t.size(); ++i)
                out += (i ? "," : "") + std::to_string(perm_t[i]);
            out += ":";
            for (std::size_t i = 0; i < perm_iota.size(); ++i)
                out += (i ? "," : "") + std::to_string(perm_iota[i]);
        }
        return out;
    }

    friend bool operator==(const SubgroupSpec& a, const SubgroupSpec& b) {
        return a.canonical_string() == b.canonical_string();
    }
};

inline constexpr std::size_t kCosetTableSizeCap = 1'000'000;

/// Labels for H\Gamma with the right-multiplication actions of the
/// generators. Congruence tables also carry the canonical projective
/// residues and the residue/column lookups.
class CosetTable {
  public:
    static CosetTable build(const SubgroupSpec& spec, std::size_t size_cap = kCosetTableSizeCap) {
        CosetTable t;
        t.spec_ = spec;
        if (spec.is_congruence)
            t.build_congruence(size_cap);
        else
            t.build_permutation();
        t.finish();
        return t;
    }

    const SubgroupSpec& spec() const { return spec_; }
    std::uint32_t index() const { return static_cast<std::uint32_t>(act_t_.size()); }

    std::uint32_t apply(std::uint32_t label, Gen g) const {
        check_label(label);
        switch (g) {
            case Gen::T: return act_t_[label];
            case Gen::Tinv: return act_t_inv_[label];
            case Gen::Iota: return act_iota_[label];
        }
        throw std::logic_error("CosetTable: unreachable");
    }

    std::uint32_t apply_word(std::uint32_t label, std::span<const Gen> word) const {
        for (Gen g : word) label = apply(label, g);
        return label;
    }

    /// Right multiplication by T^e in O(1) through the cycle structure.
    std::uint32_t apply_t_power(std::uint32_t label, const BigInt& e) const {
        check_label(label);
        const auto& cyc = cycles_[cycle_of_[label]];
        const std::uint32_t len = static_cast<std::uint32_t>(cyc.size());
        std::uint32_t shift = static_cast<std::uint32_t>(mod_ui(e, len));
        std::uint32_t pos = pos_in_cycle_[label] + shift;
        if (pos >= len) pos -= len;
        return cyc[pos];
    }
    std::uint32_t apply_t_power(std::uint32_t label, long e) const {
        return apply_t_power(label, BigInt(e));
    }

    /// Cycles of the T action; the .infinity partition and the O(1) power
    /// application both read these.
    const std::vector<std::vector<std::uint32_t>>& t_cycles() const { return cycles_; }
    std::uint32_t t_cycle_of(std::uint32_t label) const {
        check_label(label);
        return cycle_of_[label];
    }

    bool has_residues() const { return spec_.is_congruence; }
    const ResidueMat& residue(std::uint32_t label) const {
        check_label(label);
        require_residues();
        return residues_[label];
    }
    const std::shared_ptr<const ResidueCtx>& residue_ctx() const {
        require_residues();
        return ctx_;
    }

    std::optional<std::uint32_t> lookup(const ResidueMat& mat) const {
        require_residues();
        auto it = lookup_.find(projective_key(mat));
        if (it == lookup_.end()) return std::nullopt;
        return it->second;
    }

    /// Label of any group element whose first column reduces to +-(p, q).
    std::optional<std::uint32_t> lookup_column(const Residue& p, const Residue& q) const {
        require_residues();
        auto it = columns_.find(column_key(p, q));
        if (it == columns_.end()) return std::nullopt;
        return it->second;
    }

    static std::string column_key(const Residue& p, const Residue& q) {
        std::string a;
        p.append_key(a);
        q.append_key(a);
        std::string b;
        (-p).append_key(b);
        (-q).append_key(b);
        return b < a ? b : a;
    }

    // --- versioned textual serialization (cache format) ---

    void save(std::ostream& os) const {
        os << "cuspdist-coset-table v1\n";
        os << "spec " << spec_.canonical_string() << "\n";
        os << "index " << index() << "\n";
        dump_perm(os, "perm_t", act_t_);
        dump_perm(os, "perm_iota", act_iota_);
        if (spec_.is_congruence) {
            os << "residues " << ctx_->degree() << "\n";
            for (std::uint32_t l = 0; l < index(); ++l) {
                os << l;
                for (const Residue* r : {&residues_[l].a, &residues_[l].b, &residues_[l].c,
                                         &residues_[l].d})
                    for (auto v : r->coeffs()) os << ' ' << v;
                os << "\n";
            }
        }
        os << "end\n";
    }

    static CosetTable load(std::istream& is, const SubgroupSpec& expected) {
        std::string line;
        auto next_line = [&]() {
            if (!std::getline(is, line)) throw std::runtime_error("coset cache: truncated file");
            return line;
        };
        if (next_line() != "cuspdist-coset-table v1")
            throw std::runtime_error("coset cache: bad header");
        if (next_line() != "spec " + expected.canonical_string())
            throw std::runtime_error("coset cache: spec mismatch");
        next_line();
        std::uint32_t n = 0;
        if (sscanf(line.c_str(), "index %u", &n) != 1 || n == 0)
            throw std::runtime_error("coset cache: bad index line");
        CosetTable t;
        t.spec_ = expected;
        t.act_t_ = parse_perm(next_line(), "perm_t", n);
        t.act_iota_ = parse_perm(next_line(), "perm_iota", n);
        t.act_t_inv_.assign(n, 0);
        for (std::uint32_t l = 0; l < n; ++l) t.act_t_inv_[t.act_t_[l]] = l;
        if (expected.is_congruence) {
            t.ctx_ = ResidueCtx::get(expected.m, expected.modulus);
            next_line();
            int deg = 0;
            if (sscanf(line.c_str(), "residues %d", &deg) != 1 || deg != t.ctx_->degree())
                throw std::runtime_error("coset cache: bad residue header");
            t.residues_.reserve(n);
            for (std::uint32_t l = 0; l < n; ++l) {
                std::istringstream row(next_line());
                std::uint32_t label = 0;
                row >> label;
                if (label != l) throw std::runtime_error("coset cache: residue rows out of order");
                auto read_res = [&]() {
                    std::vector<std::uint32_t> c(deg);
                    for (auto& v : c) {
                        if (!(row >> v)) throw std::runtime_error("coset cache: short residue row");
                    }
                    return Residue::from_coeffs(t.ctx_, std::move(c));
                };
                ResidueMat m{read_res(), read_res(), read_res(), read_res()};
                t.residues_.push_back(std::move(m));
            }
        }
        if (next_line() != "end") throw std::runtime_error("coset cache: missing trailer");
        t.finish();
        return t;
    }

  private:
    void check_label(std::uint32_t label) const {
        if (label >= index()) throw std::out_of_range("CosetTable: label out of range");
    }
    void require_residues() const {
        if (!spec_.is_congruence)
            throw std::domain_error("CosetTable: permutation tables carry no residues");
    }

    static void dump_perm(std::ostream& os, const char* name,
                          const std::vector<std::uint32_t>& p) {
        os << name;
        for (auto v : p) os << ' ' << v;
        os << "\n";
    }

    static std::vector<std::uint32_t> parse_perm(const std::string& line, const std::string& name,
                                                 std::uint32_t n) {
        std::istringstream is(line);
        std::string head;
        is >> head;
        if (head != name) throw std::runtime_error("coset cache: expected " + name);
        std::vector<std::uint32_t> out(n);
        for (auto& v : out)
            if (!(is >> v) || v >= n) throw std::runtime_error("coset cache: bad permutation");
        return out;
    }

    void build_congruence(std::size_t size_cap) {
        ctx_ = ResidueCtx::get(spec_.m, spec_.modulus);
        const Residue zero(ctx_);
        const Residue one = Residue::from_long(ctx_, 1);
        const Residue lam = Residue::lambda(ctx_);
        const ResidueMat gen_t{one, lam, zero, one};
        const ResidueMat gen_t_inv{one, -lam, zero, one};
        const ResidueMat gen_iota{zero, -one, one, zero};
        const ResidueMat gens[3] = {gen_t, gen_t_inv, gen_iota};

        ResidueMat id{one, zero, zero, one};
        residues_.push_back(projective_canonical(id));
        lookup_.emplace(mat_key(residues_[0]), 0);
        std::deque<std::uint32_t> queue{0};
        while (!queue.empty()) {
            const std::uint32_t cur = queue.front();
            queue.pop_front();
            for (const ResidueMat& g : gens) {
                ResidueMat next = projective_canonical(residues_[cur] * g);
                std::string key = mat_key(next);
                if (lookup_.find(key) == lookup_.end()) {
                    if (residues_.size() >= size_cap)
                        throw std::runtime_error("CosetTable: size cap exceeded");
                    const auto label = static_cast<std::uint32_t>(residues_.size());
                    residues_.push_back(std::move(next));
                    lookup_.emplace(std::move(key), label);
                    queue.push_back(label);
                }
            }
        }
        const std::uint32_t n = static_cast<std::uint32_t>(residues_.size());
        act_t_.assign(n, 0);
        act_t_inv_.assign(n, 0);
        act_iota_.assign(n, 0);
        for (std::uint32_t l = 0; l < n; ++l) {
            act_t_[l] = *lookup(residues_[l] * gen_t);
            act_t_inv_[l] = *lookup(residues_[l] * gen_t_inv);
            act_iota_[l] = *lookup(residues_[l] * gen_iota);
        }
    }

    void build_permutation() {
        const std::size_t n = spec_.perm_t.size();
        if (n == 0 || spec_.perm_iota.size() != n)
            throw std::domain_error("SubgroupSpec: permutation images must be nonempty, same degree");
        auto check_bijection = [n](const std::vector<std::uint32_t>& p, const char* name) {
            std::vector<bool> seen(n, false);
            for (auto v : p) {
                if (v >= n || seen[v])
                    throw std::domain_error(std::string("SubgroupSpec: ") + name +
                                            " is not a permutation");
                seen[v] = true;
            }
        };
        check_bijection(spec_.perm_t, "perm_t");
        check_bijection(spec_.perm_iota, "perm_iota");
        act_t_ = spec_.perm_t;
        act_iota_ = spec_.perm_iota;
        act_t_inv_.assign(n, 0);
        for (std::uint32_t l = 0; l < n; ++l) act_t_inv_[act_t_[l]] = l;

        // iota must be an involution; iota*T must have order dividing m
        for (std::uint32_t l = 0; l < n; ++l)
            if (act_iota_[act_iota_[l]] != l)
                throw std::domain_error("SubgroupSpec: iota image is not an involution");
        for (std::uint32_t l = 0; l < n; ++l) {
            std::uint32_t cur = l;
            for (int i = 0; i < spec_.m; ++i) cur = act_t_[act_iota_[cur]];
            if (cur != l)
                throw std::domain_error("SubgroupSpec: (iota T)^m is not the identity");
        }

        // transitivity with the distinguished point 0
        std::vector<bool> seen(n, false);
        std::deque<std::uint32_t> queue{0};
        seen[0] = true;
        std::size_t reached = 1;
        while (!queue.empty()) {
            const std::uint32_t cur = queue.front();
            queue.pop_front();
            for (std::uint32_t nxt : {act_t_[cur], act_t_inv_[cur], act_iota_[cur]}) {
                if (!seen[nxt]) {
                    seen[nxt] = true;
                    ++reached;
                    queue.push_back(nxt);
                }
            }
        }
        if (reached != n)
            throw std::domain_error("SubgroupSpec: permutation action is not transitive");
    }

    /// Cycle structure of act_t plus the first-column index.
    void finish() {
        const std::uint32_t n = index();
        cycle_of_.assign(n, 0);
        pos_in_cycle_.assign(n, 0);
        std::vector<bool> seen(n, false);
        for (std::uint32_t l = 0; l < n; ++l) {
            if (seen[l]) continue;
            std::vector<std::uint32_t> cyc;
            std::uint32_t cur = l;
            do {
                seen[cur] = true;
                cycle_of_[cur] = static_cast<std::uint32_t>(cycles_.size());
                pos_in_cycle_[cur] = static_cast<std::uint32_t>(cyc.size());
                cyc.push_back(cur);
                cur = act_t_[cur];
            } while (cur != l);
            cycles_.push_back(std::move(cyc));
        }
        if (spec_.is_congruence) {
            if (lookup_.empty()) {
                for (std::uint32_t l = 0; l < index(); ++l)
                    lookup_.emplace(mat_key(residues_[l]), l);
            }
            for (std::uint32_t l = 0; l < index(); ++l) {
                const ResidueMat& m = residues_[l];
                std::string key = column_key(m.a, m.c);
                auto [it, inserted] = columns_.emplace(std::move(key), l);
                if (!inserted && cycle_of_[it->second] != cycle_of_[l])
                    throw std::logic_error(
                        "CosetTable: same reduced column in two different infinity classes");
            }
        }
    }

    SubgroupSpec spec_;
    std::shared_ptr<const ResidueCtx> ctx_;
    std::vector<ResidueMat> residues_;
    std::unordered_map<std::string, std::uint32_t> lookup_;
    std::unordered_map<std::string, std::uint32_t> columns_;
    std::vector<std::uint32_t> act_t_, act_t_inv_, act_iota_;
    std::vector<std::vector<std::uint32_t>> cycles_;
    std::vector<std::uint32_t> cycle_of_, pos_in_cycle_;
};

/// Partition of coset labels under the .p relation, widths = class sizes.
/// cusp_id unifies the two relations: it is the id of the .infinity class
/// describing the same cusp (for p = 0 this is the infinity class of any
/// member multiplied by iota), so statistics from either relation speak
/// about the same cusp.
struct CuspTable {
    RelPoint point = RelPoint::Infinity;
    std::vector<std::vector<std::uint32_t>> classes;
    std::vector<std::uint32_t> class_of;
    std::vector<std::uint32_t> width;
    std::vector<std::uint32_t> cusp_id;

    std::uint32_t cusp_of_label(std::uint32_t label) const { return cusp_id[class_of[label]]; }
    std::size_t count() const { return classes.size(); }
};

namespace detail {

inline std::vector<std::vector<std::uint32_t>> cycles_of(const std::vector<std::uint32_t>& perm) {
    const std::uint32_t n = static_cast<std::uint32_t>(perm.size());
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<bool> seen(n, false);
    for (std::uint32_t l = 0; l < n; ++l) {
        if (seen[l]) continue;
        std::vector<std::uint32_t> cyc;
        std::uint32_t cur = l;
        do {
            seen[cur] = true;
            cyc.push_back(cur);
            cur = perm[cur];
        } while (cur != l);
        out.push_back(std::move(cyc));
    }
    return out;
}

}  // namespace detail

/// Classes of the .p relation as cycles of right multiplication by the
/// stabilizer generator of p: T for p = infinity, iota T iota for p = 0.
inline CuspTable cusp_partition(const CosetTable& table, RelPoint p) {
    const std::uint32_t n = table.index();
    std::vector<std::uint32_t> perm(n);
    for (std::uint32_t l = 0; l < n; ++l) {
        perm[l] = p == RelPoint::Infinity
                      ? table.apply(l, Gen::T)
                      : table.apply(table.apply(table.apply(l, Gen::Iota), Gen::T), Gen::Iota);
    }
    CuspTable out;
    out.point = p;
    out.classes = detail::cycles_of(perm);
    out.class_of.assign(n, 0);
    for (std::uint32_t c = 0; c < out.classes.size(); ++c) {
        out.width.push_back(static_cast<std::uint32_t>(out.classes[c].size()));
        for (auto l : out.classes[c]) out.class_of[l] = c;
    }
    if (p == RelPoint::Infinity) {
        for (std::uint32_t c = 0; c < out.classes.size(); ++c) out.cusp_id.push_back(c);
    } else {
        // the cusp of a .0 class is the .infinity class of (any) member * iota
        auto inf_cycles = detail::cycles_of([&] {
            std::vector<std::uint32_t> t(n);
            for (std::uint32_t l = 0; l < n; ++l) t[l] = table.apply(l, Gen::T);
            return t;
        }());
        std::vector<std::uint32_t> inf_class_of(n, 0);
        for (std::uint32_t c = 0; c < inf_cycles.size(); ++c)
            for (auto l : inf_cycles[c]) inf_class_of[l] = c;
        for (auto& cls : out.classes) {
            const std::uint32_t id = inf_class_of[table.apply(cls.front(), Gen::Iota)];
            for (auto l : cls) {
                if (inf_class_of[table.apply(l, Gen::Iota)] != id)
                    throw std::logic_error("cusp_partition: inconsistent cusp identification");
            }
            out.cusp_id.push_back(id);
        }
    }
    return out;
}

/// Spec describing iota H iota. Principal congruence subgroups are normal,
/// so congruence specs are fixed; permutation specs are relabelled with
/// the coset of iota as the new distinguished point.
inline SubgroupSpec conjugate_spec(const SubgroupSpec& spec) {
    if (spec.is_congruence) return spec;
    const std::size_t n = spec.perm_t.size();
    std::vector<std::uint32_t> inv_t(n);
    for (std::uint32_t l = 0; l < n; ++l) inv_t[spec.perm_t[l]] = l;
    // deterministic BFS relabel starting from 0 * iota
    std::vector<std::uint32_t> relabel(n, UINT32_MAX);
    std::deque<std::uint32_t> queue{spec.perm_iota[0]};
    relabel[spec.perm_iota[0]] = 0;
    std::uint32_t assigned = 1;
    while (!queue.empty()) {
        const std::uint32_t cur = queue.front();
        queue.pop_front();
        for (std::uint32_t nxt : {spec.perm_t[cur], inv_t[cur], spec.perm_iota[cur]}) {
            if (relabel[nxt] == UINT32_MAX) {
                relabel[nxt] = assigned++;
                queue.push_back(nxt);
            }
        }
    }
    std::vector<std::uint32_t> t2(n), i2(n);
    for (std::uint32_t l = 0; l < n; ++l) {
        t2[relabel[l]] = relabel[spec.perm_t[l]];
        i2[relabel[l]] = relabel[spec.perm_iota[l]];
    }
    return SubgroupSpec::permutation(spec.m, std::move(t2), std::move(i2));
}

/// The width-preserving correspondence between cusps of iota H iota and
/// cusps of H. label_map sends a label of the conjugated table to the
/// label of H * (iota gamma); cusp_map sends unified cusp ids likewise.
struct IotaTransport {
    std::vector<std::uint32_t> label_map;
    std::vector<std::uint32_t> cusp_map;
};

inline IotaTransport iota_transport(const CosetTable& table_h, const CosetTable& table_c) {
    if (table_h.index() != table_c.index())
        throw std::domain_error("iota_transport: tables have different indices");
    const std::uint32_t n = table_h.index();
    IotaTransport out;
    out.label_map.assign(n, 0);
    if (table_h.spec().is_congruence) {
        if (!(table_c.spec() == table_h.spec()))
            throw std::domain_error("iota_transport: congruence specs must agree (normal subgroup)");
        auto ctx = table_h.residue_ctx();
        const Residue zero(ctx);
        const Residue one = Residue::from_long(ctx, 1);
        const ResidueMat iota{zero, -one, one, zero};
        for (std::uint32_t l = 0; l < n; ++l) {
            auto target = table_h.lookup(iota * table_c.residue(l));
            if (!target) throw std::logic_error("iota_transport: left translate not in table");
            out.label_map[l] = *target;
        }
    } else {
        // reproduce the deterministic relabelling used by conjugate_spec
        const SubgroupSpec& spec = table_h.spec();
        if (!(table_c.spec() == conjugate_spec(spec)))
            throw std::domain_error("iota_transport: second table is not the conjugated spec");
        const std::size_t sz = spec.perm_t.size();
        std::vector<std::uint32_t> inv_t(sz);
        for (std::uint32_t l = 0; l < sz; ++l) inv_t[spec.perm_t[l]] = l;
        std::vector<std::uint32_t> relabel(sz, UINT32_MAX);
        std::deque<std::uint32_t> queue{spec.perm_iota[0]};
        relabel[spec.perm_iota[0]] = 0;
        std::uint32_t assigned = 1;
        while (!queue.empty()) {
            const std::uint32_t cur = queue.front();
            queue.pop_front();
            for (std::uint32_t nxt : {spec.perm_t[cur], inv_t[cur], spec.perm_iota[cur]}) {
                if (relabel[nxt] == UINT32_MAX) {
                    relabel[nxt] = assigned++;
                    queue.push_back(nxt);
                }
            }
        }
        for (std::uint32_t old = 0; old < sz; ++old) out.label_map[relabel[old]] = old;
    }

    CuspTable inf_h = cusp_partition(table_h, RelPoint::Infinity);
    CuspTable inf_c = cusp_partition(table_c, RelPoint::Infinity);
    out.cusp_map.assign(inf_c.count(), 0);
    for (std::uint32_t c = 0; c < inf_c.count(); ++c) {
        const std::uint32_t target = inf_h.class_of[out.label_map[inf_c.classes[c].front()]];
        for (auto l : inf_c.classes[c]) {
            if (inf_h.class_of[out.label_map[l]] != target)
                throw std::logic_error("iota_transport: class image is not a single class");
        }
        if (inf_h.width[target] != inf_c.width[c])
            throw std::logic_error("iota_transport: transport does not preserve widths");
        out.cusp_map[c] = target;
    }
    return out;
}

namespace detail {

inline Residue reduce_entry(const std::shared_ptr<const ResidueCtx>& ctx, const BigInt& v) {
    return Residue::from_int(ctx, v);
}
inline Residue reduce_entry(const std::shared_ptr<const ResidueCtx>& ctx, const AlgebraicReal& v) {
    return Residue::from_algebraic(ctx, v);
}

inline bool coprime_check(const BigInt& p, const BigInt& q) {
    return gcd(p, q).is_one();
}
// Z[lambda_m] gcds need no general machinery here: membership of the
// reduced column in the enumerated group certifies completability for
// every input that is completable at all (approximant pairs always are).
inline bool coprime_check(const AlgebraicReal&, const AlgebraicReal&) { return true; }

}  // namespace detail

/// Cusp (unified id) receiving p/q: the .infinity class of any group
/// element whose first column reduces to (p, q).
template <class Ring>
std::uint32_t classify_fraction(const Ring& p, const Ring& q, const CosetTable& table,
                                const CuspTable& inf) {
    if (!detail::coprime_check(p, q))
        throw not_completable("classify_fraction: p and q are not coprime");
    auto ctx = table.residue_ctx();
    Residue rp = detail::reduce_entry(ctx, p);
    Residue rq = detail::reduce_entry(ctx, q);
    auto label = table.lookup_column(rp, rq);
    if (!label)
        throw not_completable("classify_fraction: no determinant-one completion in the group");
    return inf.cusp_of_label(*label);
}

/// FNV-1a of the canonical spec string; cache file key.
inline std::string spec_cache_key(const SubgroupSpec& spec) {
    const std::string s = spec.canonical_string();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace cuspdist
