#pragma once

// Minimal graded projective resolutions, computed degree by degree.
//
// Everything decomposes along the vertex at which words end, so each kernel
// and each generator choice happens inside one (internal degree, vertex)
// block. Within a block new generators are the kernel basis vectors (in
// echelon order) that are not already in the image of the lower-degree
// generators, which is the graded Nakayama lemma made algorithmic.

#include <algorithm>
#include <climits>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "errors.hpp"
#include "modules.hpp"
#include "scalars.hpp"

namespace pkoszul {

using AlgebraPtr = std::shared_ptr<const GradedAlgebraData>;

struct Resolution {
    AlgebraPtr algebra;
    ModulePresentation module;
    /// P_0 .. P_N
    std::vector<FreeModule> modules;
    /// differentials[n] : P_n -> P_{n-1} for n >= 1; differentials[0] : P_0 -> module.generators.
    std::vector<ModuleMap> differentials;
    int max_hdeg = 0;
    int max_ideg = 0;
    /// Row n is complete: P_n has no generators beyond those found.
    std::vector<bool> certified;
    /// Row n's certification rests on a proven degree bound rather than the D-1 heuristic.
    std::vector<bool> rigorous;

    const GradedAlgebraData& alg() const { return *algebra; }
    const FreeModule& P(int n) const { return modules.at(static_cast<std::size_t>(n)); }
    const ModuleMap& d(int n) const { return differentials.at(static_cast<std::size_t>(n)); }

    /// Largest n with rows 0..n all certified, or -1.
    int certified_to() const {
        int n = -1;
        while (n + 1 <= max_hdeg && certified[static_cast<std::size_t>(n + 1)]) ++n;
        return n;
    }

    /// First certified n with P_n = 0 (the resolution stops there).
    std::optional<int> termination_degree() const {
        for (int n = 0; n <= max_hdeg; ++n) {
            if (!certified[static_cast<std::size_t>(n)]) return std::nullopt;
            if (P(n).empty()) return n;
        }
        return std::nullopt;
    }
};

namespace detail {

/// Chooses minimal generators of a graded submodule K of `over`, where
/// kernel(k, block) spans K in that block. Returns the covering map.
inline ModuleMap minimal_cover(const GradedAlgebraData& alg, const FreeModule& over, int max_ideg,
                               const std::function<std::vector<Vector>(const Block&)>& kernel) {
    ModuleMap cover = ModuleMap::zero({}, over);
    for (int k = 0; k <= max_ideg; ++k)
        for (int v = 0; v < alg.vertex_count(); ++v) {
            Block b(over, alg, k, v);
            if (!b.size()) continue;
            auto K = kernel(b);
            if (K.empty()) continue;
            SpanBuilder span(b.size(), alg.field());
            Block src(cover.source, alg, k, v);
            Matrix img = map_block(alg, cover, src, b);
            for (std::size_t j = 0; j < img.cols(); ++j) span.add(img.column(j));
            for (auto& x : K) {
                if (!span.add(x)) continue;
                auto elem = element_from_block(b, x);
                int origin = over[static_cast<std::size_t>(elem.terms.front().gen)].origin;
                cover.source.gens.push_back({v, k, origin});
                cover.images.push_back(std::move(elem));
            }
        }
    return cover;
}

/// Spanning set of {x in S-block : phi(x) in image(rel)} for one block.
inline std::vector<Vector> preimage_block(const GradedAlgebraData& alg, const ModuleMap& phi, const ModuleMap& rel,
                                          const Block& sb) {
    Block tb(phi.target, alg, sb.degree(), sb.vertex());
    Block rb(rel.source, alg, sb.degree(), sb.vertex());
    Matrix a = map_block(alg, phi, sb, tb);
    if (!rb.size() || !tb.size()) return kernel_basis(a);
    Matrix r = map_block(alg, rel, rb, tb);
    Matrix joint(tb.size(), sb.size() + rb.size(), alg.field());
    for (std::size_t i = 0; i < tb.size(); ++i) {
        for (std::size_t j = 0; j < sb.size(); ++j) joint(i, j) = a(i, j);
        for (std::size_t j = 0; j < rb.size(); ++j) joint(i, sb.size() + j) = r(i, j);
    }
    SpanBuilder proj(sb.size(), alg.field());
    for (auto& x : kernel_basis(joint)) proj.add(Vector(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(sb.size())));
    return proj.basis();
}

/// Minimal generators of coker(rel) chosen among the standard basis vectors of
/// the presentation's generator module, degree by degree.
inline ModuleMap minimal_generators(const GradedAlgebraData& alg, const ModulePresentation& m, int max_ideg) {
    ModuleMap eps = ModuleMap::zero({}, m.generators);
    for (int k = 0; k <= max_ideg; ++k)
        for (int v = 0; v < alg.vertex_count(); ++v) {
            Block fb(m.generators, alg, k, v);
            if (!fb.size()) continue;
            SpanBuilder span(fb.size(), alg.field());
            Block rb(m.relations.source, alg, k, v);
            Matrix r = map_block(alg, m.relations, rb, fb);
            for (std::size_t j = 0; j < r.cols(); ++j) span.add(r.column(j));
            Block pb(eps.source, alg, k, v);
            Matrix e = map_block(alg, eps, pb, fb);
            for (std::size_t j = 0; j < e.cols(); ++j) span.add(e.column(j));
            for (std::size_t i = 0; i < fb.size(); ++i) {
                Vector unit(fb.size(), 0);
                unit[i] = 1;
                if (!span.add(unit)) continue;
                const auto& entry = fb.entries()[i];
                eps.source.gens.push_back({v, k, m.generators[static_cast<std::size_t>(entry.gen)].origin});
                eps.images.push_back({k, {{entry.gen, entry.word, 1}}});
            }
        }
    return eps;
}

}  // namespace detail

/// Minimal resolution of coker(m.relations) up to homological degree N and
/// internal degree D. `trivial` marks resolutions of simple/trivial modules,
/// for which a complete Groebner basis gives a degree bound on generators.
inline Resolution minimal_resolution(AlgebraPtr alg, const ModulePresentation& m, int N, int D, bool trivial = false) {
    const auto& A = *alg;
    if (N < 0) throw input_error("homological bound must be nonnegative");
    if (D < 1) throw input_error("internal bound must be at least 1");
    if (D > A.max_degree())
        throw input_error("internal bound " + std::to_string(D) + " exceeds the algebra truncation " +
                          std::to_string(A.max_degree()));
    if (D > m.valid_to)
        throw input_error("internal bound " + std::to_string(D) + " exceeds the degree " + std::to_string(m.valid_to) +
                          " to which the module presentation is known");

    Resolution r;
    r.algebra = alg;
    r.module = m;
    r.max_hdeg = N;
    r.max_ideg = D;

    ModuleMap eps = detail::minimal_generators(A, m, D);
    r.modules.push_back(eps.source);
    r.differentials.push_back(eps);

    for (int n = 1; n <= N; ++n) {
        const ModuleMap& prev = r.differentials.back();
        const FreeModule& over = r.modules.back();
        std::function<std::vector<Vector>(const Block&)> kernel;
        if (n == 1) {
            kernel = [&](const Block& b) { return detail::preimage_block(A, prev, m.relations, b); };
        } else {
            kernel = [&](const Block& b) {
                Block tb(prev.target, A, b.degree(), b.vertex());
                if (!tb.size()) {
                    std::vector<Vector> all;
                    for (std::size_t i = 0; i < b.size(); ++i) {
                        Vector u(b.size(), 0);
                        u[i] = 1;
                        all.push_back(std::move(u));
                    }
                    return all;
                }
                return kernel_basis(map_block(A, prev, b, tb));
            };
        }
        ModuleMap dn = detail::minimal_cover(A, over, D, kernel);
        r.modules.push_back(dn.source);
        r.differentials.push_back(std::move(dn));
    }

    // Certification.
    const auto& bounds = A.bounds();
    r.certified.assign(static_cast<std::size_t>(N) + 1, false);
    r.rigorous.assign(static_cast<std::size_t>(N) + 1, false);
    for (int n = 0; n <= N; ++n) {
        // past a certified zero term everything is zero
        if (n > 0 && r.certified[static_cast<std::size_t>(n) - 1] && r.P(n - 1).empty()) {
            r.certified[static_cast<std::size_t>(n)] = true;
            r.rigorous[static_cast<std::size_t>(n)] = r.rigorous[static_cast<std::size_t>(n) - 1];
            continue;
        }
        std::optional<int> bound;  // INT_MIN encodes "no generators at all"
        if (n == 0) {
            bound = m.generators.empty() ? INT_MIN : m.generators.max_degree();
        } else if (bounds.top_degree) {
            const auto& prev = r.P(n - 1);
            int kernel_top = prev.empty() ? INT_MIN : prev.max_degree() + *bounds.top_degree;
            if (n == 1 && !m.relations.source.empty()) kernel_top = std::max(kernel_top, m.relations.source.max_degree());
            bound = kernel_top;
        } else if (trivial && bounds.complete_tip_degree && bounds.generated_in_degree_one) {
            int g = *bounds.complete_tip_degree;
            if (n == 1) bound = 1;
            else if (g == 0) bound = INT_MIN;
            else bound = (n - 1) * (g - 1) + 1;
        }
        bool prev_ok = n == 0 || r.certified[static_cast<std::size_t>(n) - 1];
        bool ok;
        if (bound) {
            ok = *bound <= D;
            r.rigorous[static_cast<std::size_t>(n)] = ok;
        } else {
            ok = r.P(n).empty() || r.P(n).max_degree() <= D - 1;
        }
        r.certified[static_cast<std::size_t>(n)] = prev_ok && ok;
        r.rigorous[static_cast<std::size_t>(n)] = r.certified[static_cast<std::size_t>(n)] && r.rigorous[static_cast<std::size_t>(n)] &&
                                                  (n == 0 || r.rigorous[static_cast<std::size_t>(n) - 1]);
    }
    return r;
}

/// Direct sum of resolutions (of the same algebra and bounds).
inline Resolution direct_sum(const std::vector<Resolution>& parts, ModulePresentation module) {
    if (parts.empty()) throw input_error("direct sum of nothing");
    Resolution r;
    r.algebra = parts.front().algebra;
    r.module = std::move(module);
    r.max_hdeg = parts.front().max_hdeg;
    r.max_ideg = parts.front().max_ideg;
    const int N = r.max_hdeg;
    r.modules.resize(static_cast<std::size_t>(N) + 1);
    r.certified.assign(static_cast<std::size_t>(N) + 1, true);
    r.rigorous.assign(static_cast<std::size_t>(N) + 1, true);
    std::vector<std::vector<int>> offset(parts.size(), std::vector<int>(static_cast<std::size_t>(N) + 2, 0));
    int gen_offset = 0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        offset[i][0] = gen_offset;  // offset into module.generators for the augmentation
        gen_offset += static_cast<int>(parts[i].module.generators.rank());
    }
    for (int n = 0; n <= N; ++n) {
        for (std::size_t i = 0; i < parts.size(); ++i) {
            offset[i][static_cast<std::size_t>(n) + 1] = static_cast<int>(r.modules[static_cast<std::size_t>(n)].rank());
            const auto& g = parts[i].P(n).gens;
            r.modules[static_cast<std::size_t>(n)].gens.insert(r.modules[static_cast<std::size_t>(n)].gens.end(), g.begin(), g.end());
            r.certified[static_cast<std::size_t>(n)] = r.certified[static_cast<std::size_t>(n)] && parts[i].certified[static_cast<std::size_t>(n)];
            r.rigorous[static_cast<std::size_t>(n)] = r.rigorous[static_cast<std::size_t>(n)] && parts[i].rigorous[static_cast<std::size_t>(n)];
        }
    }
    for (int n = 0; n <= N; ++n) {
        ModuleMap d;
        d.source = r.modules[static_cast<std::size_t>(n)];
        d.target = n == 0 ? r.module.generators : r.modules[static_cast<std::size_t>(n) - 1];
        for (std::size_t i = 0; i < parts.size(); ++i) {
            int off = offset[i][static_cast<std::size_t>(n)];  // target offset: previous module (or generators for n == 0)
            for (auto img : parts[i].d(n).images) {
                for (auto& t : img.terms) t.gen += off;
                d.images.push_back(std::move(img));
            }
        }
        r.differentials.push_back(std::move(d));
    }
    return r;
}

/// Resolution of the simple module at vertex v.
inline Resolution resolve_simple(AlgebraPtr alg, int v, int N, int D) {
    return minimal_resolution(alg, trivial_presentation(*alg, v), N, D, true);
}

/// Resolution of A_0, assembled as the direct sum of the resolutions of the simples.
inline Resolution resolve_trivial(AlgebraPtr alg, int N, int D) {
    std::vector<Resolution> parts;
    for (int v = 0; v < alg->vertex_count(); ++v) parts.push_back(resolve_simple(alg, v, N, D));
    return direct_sum(parts, trivial_presentation(*alg));
}

/// Presentation of the n-th syzygy, coker(d_{n+1} : P_{n+1} -> P_n).
/// Omega^0 is the module itself (minimally presented).
inline ModulePresentation syzygy(const Resolution& r, int n) {
    if (n < 0) throw input_error("syzygy index must be nonnegative");
    if (n + 1 > r.max_hdeg)
        throw refusal("syzygy " + std::to_string(n) + " needs homological degree " + std::to_string(n + 1) +
                      " but the resolution stops at " + std::to_string(r.max_hdeg));
    if (!r.certified[static_cast<std::size_t>(n) + 1])
        throw refusal("syzygy " + std::to_string(n) + " needs row " + std::to_string(n + 1) +
                      " of the resolution, which is not certified");
    ModulePresentation p;
    p.name = "Omega^" + std::to_string(n) + "(" + r.module.name + ")";
    p.generators = r.P(n);
    for (auto& g : p.generators.gens) g.origin = -1;
    p.relations = r.d(n + 1);
    p.relations.target = p.generators;
    for (auto& g : p.relations.source.gens) g.origin = -1;
    p.valid_to = r.rigorous[static_cast<std::size_t>(n) + 1] ? INT_MAX : r.max_ideg;
    return p;
}

/// Presentation of JM: generated by gen * w over degree-one words w, with
/// relations computed up to internal degree D.
inline ModulePresentation radical_submodule(const GradedAlgebraData& alg, const ModulePresentation& m, int D) {
    ModuleMap phi;
    phi.target = m.generators;
    const int top = alg.bounds().generated_in_degree_one ? std::min(1, alg.max_degree()) : alg.max_degree();
    for (std::size_t g = 0; g < m.generators.rank(); ++g)
        for (int k = 1; k <= top; ++k)
            for (int w : alg.starting_at(k, m.generators[g].vertex)) {
                phi.source.gens.push_back({alg.element(k, w).target, m.generators[g].degree + k, -1});
                phi.images.push_back({m.generators[g].degree + k, {{static_cast<int>(g), w, 1}}});
            }
    ModuleMap rel = detail::minimal_cover(alg, phi.source, D, [&](const Block& b) {
        return detail::preimage_block(alg, phi, m.relations, b);
    });
    ModulePresentation out;
    out.name = "J" + m.name;
    out.generators = phi.source;
    out.relations = std::move(rel);
    out.valid_to = std::min(D, m.valid_to);
    return out;
}

// ---------------------------------------------------------------- Betti data

struct BettiRow {
    int n = 0;
    bool certified = false;
    /// (internal degree, vertex) -> multiplicity
    std::map<std::pair<int, int>, int> counts;
    /// (internal degree, origin, vertex) -> multiplicity; origin is -1 outside resolutions of A_0
    std::map<std::tuple<int, int, int>, int> by_origin;

    bool empty() const { return counts.empty(); }
    int total() const {
        int t = 0;
        for (const auto& [k, c] : counts) t += c;
        return t;
    }
    /// Distinct internal degrees present in the row.
    std::vector<int> degrees() const {
        std::vector<int> d;
        for (const auto& [k, c] : counts)
            if (d.empty() || d.back() != k.first) d.push_back(k.first);
        return d;
    }
    int at_degree(int j) const {
        int t = 0;
        for (const auto& [k, c] : counts)
            if (k.first == j) t += c;
        return t;
    }
};

struct BettiTable {
    std::vector<std::string> vertex_labels;
    int max_hdeg = 0;
    int max_ideg = 0;
    std::vector<BettiRow> rows;

    const BettiRow& row(int n) const { return rows.at(static_cast<std::size_t>(n)); }
    int certified_to() const {
        int n = -1;
        while (n + 1 <= max_hdeg && rows[static_cast<std::size_t>(n + 1)].certified) ++n;
        return n;
    }
    std::optional<int> termination_degree() const {
        for (const auto& r : rows) {
            if (!r.certified) return std::nullopt;
            if (r.empty()) return r.n;
        }
        return std::nullopt;
    }
};

inline BettiTable betti_table(const Resolution& r) {
    BettiTable b{r.alg().vertex_labels(), r.max_hdeg, r.max_ideg, {}};
    for (int n = 0; n <= r.max_hdeg; ++n) {
        BettiRow row{n, static_cast<bool>(r.certified[static_cast<std::size_t>(n)]), {}, {}};
        for (const auto& g : r.P(n).gens) {
            ++row.counts[{g.degree, g.vertex}];
            ++row.by_origin[{g.degree, g.origin, g.vertex}];
        }
        b.rows.push_back(std::move(row));
    }
    return b;
}

// ------------------------------------------------------- structural checks

/// d_{n-1} o d_n = 0 on every slice up to the internal bound.
inline bool differentials_square_to_zero(const Resolution& r) {
    for (int n = 2; n <= r.max_hdeg; ++n) {
        auto c = compose(r.alg(), r.d(n - 1), r.d(n));
        for (const auto& img : c.images)
            if (!img.is_zero()) return false;
    }
    // d_1 lands in the relations of the presented module
    if (r.max_hdeg >= 1) {
        auto eps_d1 = compose(r.alg(), r.d(0), r.d(1));
        for (std::size_t g = 0; g < eps_d1.images.size(); ++g) {
            const auto& x = eps_d1.images[g];
            int v = r.P(1)[g].vertex;
            Block fb(r.module.generators, r.alg(), x.degree, v);
            Block rb(r.module.relations.source, r.alg(), x.degree, v);
            auto rel = map_block(r.alg(), r.module.relations, rb, fb);
            SpanBuilder span(fb.size(), r.alg().field());
            for (std::size_t j = 0; j < rel.cols(); ++j) span.add(rel.column(j));
            std::vector<Residue> dense(fb.size(), 0);
            for (const auto& t : x.terms) dense[fb.position(r.alg(), r.module.generators, t.gen, t.word)] = t.coeff;
            if (!span.contains(dense)) return false;
        }
    }
    return true;
}

/// No differential has a scalar entry between generators (all entries in J).
inline bool is_minimal(const Resolution& r) {
    for (int n = 1; n <= r.max_hdeg; ++n) {
        const auto& d = r.d(n);
        for (std::size_t g = 0; g < d.images.size(); ++g)
            for (const auto& t : d.images[g].terms)
                if (d.target[static_cast<std::size_t>(t.gen)].degree >= d.images[g].degree) return false;
    }
    return true;
}

/// ker d_{n-1} = im d_n on every block up to the internal bound, for 2 <= n <= N.
inline bool is_exact(const Resolution& r) {
    const auto& A = r.alg();
    for (int n = 2; n <= r.max_hdeg; ++n)
        for (int k = 0; k <= r.max_ideg; ++k)
            for (int v = 0; v < A.vertex_count(); ++v) {
                Block mid(r.P(n - 1), A, k, v);
                if (!mid.size()) continue;
                Block lo(r.P(n - 2), A, k, v);
                Block hi(r.P(n), A, k, v);
                std::size_t rk_out = lo.size() ? rank(map_block(A, r.d(n - 1), mid, lo)) : 0;
                std::size_t rk_in = hi.size() ? rank(map_block(A, r.d(n), hi, mid)) : 0;
                if (rk_out + rk_in != mid.size()) return false;
            }
    return true;
}

}  // namespace pkoszul
