#pragma once

// Ext groups read off minimal resolutions, Yoneda products by chain-map
// lifting, and the classifications and structural checks built on them.
//
// Ext^i(A_0, A_0) is the dual of P_i / J P_i, so a class is a functional on
// the generators of P_i. A generator of the resolution of S_u sitting at
// vertex v gives a class in Ext^i(S_u, S_v).

#include <algorithm>
#include <array>
#include <climits>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "delta.hpp"
#include "errors.hpp"
#include "modules.hpp"
#include "resolution.hpp"
#include "scalars.hpp"

namespace pkoszul {

// ---------------------------------------------------------------- Ext table

struct ExtTable {
    int max_hdeg = 0;
    int max_ideg = 0;
    /// (ext-degree i, shift j) -> dimension
    std::map<std::pair<int, int>, int> dims;
    /// (i, j, u, v) -> dim Ext^i(S_u, S_v)_j; u is -1 when the resolved module is not A_0
    std::map<std::tuple<int, int, int, int>, int> by_pair;
    std::vector<bool> certified;

    int dim(int i, int j) const {
        auto it = dims.find({i, j});
        return it == dims.end() ? 0 : it->second;
    }
    int total(int i) const {
        int t = 0;
        for (const auto& [k, c] : dims)
            if (k.first == i) t += c;
        return t;
    }
    std::vector<int> shifts(int i) const {
        std::vector<int> s;
        for (const auto& [k, c] : dims)
            if (k.first == i && c) s.push_back(k.second);
        return s;
    }
    int certified_to() const {
        int n = -1;
        while (n + 1 <= max_hdeg && certified[static_cast<std::size_t>(n + 1)]) ++n;
        return n;
    }
};

inline ExtTable ext_table(const BettiTable& b) {
    ExtTable e;
    e.max_hdeg = b.max_hdeg;
    e.max_ideg = b.max_ideg;
    for (const auto& row : b.rows) {
        e.certified.push_back(row.certified);
        for (const auto& [key, c] : row.by_origin) {
            auto [j, u, v] = key;
            e.dims[{row.n, j}] += c;
            e.by_pair[{row.n, j, u, v}] += c;
        }
    }
    return e;
}

/// Table with dims(n, delta(n)) = multiplicity for n = 0..N, everything certified.
inline ExtTable concentrated_table(DeltaFunction f, int N, int multiplicity = 1) {
    ExtTable e;
    e.max_hdeg = N;
    e.max_ideg = f(N);
    for (int n = 0; n <= N; ++n) {
        e.dims[{n, f(n)}] = multiplicity;
        e.certified.push_back(true);
    }
    return e;
}

// --------------------------------------------------------------- Ext classes

struct ExtClass {
    int degree = 0;
    int shift = 0;
    /// One coefficient per generator of P_degree.
    Vector coeffs;

    bool is_zero() const {
        return std::all_of(coeffs.begin(), coeffs.end(), [](Residue c) { return c == 0; });
    }
    friend bool operator==(const ExtClass&, const ExtClass&) = default;
};

/// The class dual to generator `gen` of P_i.
inline ExtClass basis_class(const Resolution& r, int i, int gen) {
    const auto& P = r.P(i);
    if (gen < 0 || static_cast<std::size_t>(gen) >= P.rank()) throw input_error("no generator " + std::to_string(gen) + " in P_" + std::to_string(i));
    ExtClass c{i, P[static_cast<std::size_t>(gen)].degree, Vector(P.rank(), 0)};
    c.coeffs[static_cast<std::size_t>(gen)] = 1;
    return c;
}

/// Lifts classes to chain maps into the resolution of A_0 and composes.
class YonedaEngine {
public:
    explicit YonedaEngine(const Resolution& trivial) : r_(&trivial) {
        const auto& A = alg();
        p0_.assign(static_cast<std::size_t>(A.vertex_count()), -1);
        const auto& P0 = trivial.P(0);
        for (std::size_t g = 0; g < P0.rank(); ++g)
            if (P0[g].degree == 0 && p0_[static_cast<std::size_t>(P0[g].vertex)] < 0)
                p0_[static_cast<std::size_t>(P0[g].vertex)] = static_cast<int>(g);
    }

    const Resolution& resolution() const { return *r_; }
    const GradedAlgebraData& alg() const { return r_->alg(); }
    int certified_to() const { return r_->certified_to(); }

    /// Chain map xi_i : src.P(n + i) -> P_i over xi : src.P(n) -> A_0, for i = 0..depth.
    /// With `perturb`, each lift is shifted by a random element of the relevant kernel.
    std::vector<ModuleMap> lift(const Resolution& src, const ExtClass& xi, int depth, std::mt19937* perturb = nullptr) {
        const auto& A = alg();
        const auto& f = A.field();
        const int n = xi.degree, j = xi.shift;
        if (n + depth > src.max_hdeg || depth > r_->max_hdeg)
            throw refusal("lifting an Ext^" + std::to_string(n) + " class " + std::to_string(depth) +
                          " steps needs homological degree " + std::to_string(n + depth));
        const auto& Pn = src.P(n);
        if (xi.coeffs.size() != Pn.rank()) throw input_error("class does not match the resolution");

        std::vector<ModuleMap> maps;
        ModuleMap x0{Pn, r_->P(0), j, {}};
        for (std::size_t g = 0; g < Pn.rank(); ++g) {
            ModuleElement img{Pn[g].degree - j, {}};
            if (Residue c = xi.coeffs[g]) {
                if (Pn[g].degree != j) throw input_error("class is not homogeneous");
                int target = p0_[static_cast<std::size_t>(Pn[g].vertex)];
                if (target < 0)
                    throw refusal("P_0 has no degree-0 generator at vertex " + A.vertex_label(Pn[g].vertex));
                img.terms.push_back({target, A.idempotent(Pn[g].vertex), c});
            }
            x0.images.push_back(std::move(img));
        }
        maps.push_back(std::move(x0));

        for (int i = 1; i <= depth; ++i) {
            const ModuleMap& prev = maps.back();
            const auto& src_gens = src.P(n + i);
            const auto& dsrc = src.d(n + i);
            ModuleMap xi_i{src_gens, r_->P(i), j, {}};
            for (std::size_t g = 0; g < src_gens.rank(); ++g) {
                const int k = src_gens[g].degree - j, v = src_gens[g].vertex;
                ModuleElement out{k, {}};
                if (k >= 0 && k <= r_->max_ideg) {
                    auto& e = solver(i, k, v);
                    if (e.src.size()) {
                        auto rhs = apply_dense(A, prev, dsrc.images[g], e.dst);
                        Vector x(e.src.size(), 0);
                        if (std::any_of(rhs.begin(), rhs.end(), [](Residue c) { return c != 0; })) {
                            auto sol = e.solver.solve(rhs);
                            if (!sol) throw std::logic_error("chain map lift has no solution");
                            x = std::move(*sol);
                        }
                        if (perturb) {
                            if (!e.kernel) e.kernel = e.solver.kernel();
                            std::uniform_int_distribution<Residue> pick(0, f.characteristic() - 1);
                            for (const auto& kv : *e.kernel) {
                                Residue s = pick(*perturb);
                                for (std::size_t t = 0; t < x.size(); ++t) x[t] = f.fma(x[t], s, kv[t]);
                            }
                        }
                        out = element_from_block(e.src, x);
                    }
                }
                xi_i.images.push_back(std::move(out));
            }
            maps.push_back(std::move(xi_i));
        }
        return maps;
    }

    /// eta o xi_m for a lift xi_m : src.P(n + m) -> P_m.
    ExtClass compose_with(const ExtClass& eta, const ModuleMap& xi_m, int src_degree, int xi_shift) const {
        const auto& f = alg().field();
        const auto& Pm = r_->P(eta.degree);
        ExtClass out{src_degree, xi_shift + eta.shift, Vector(xi_m.source.rank(), 0)};
        for (std::size_t g = 0; g < xi_m.source.rank(); ++g)
            for (const auto& t : xi_m.images[g].terms)
                if (Pm[static_cast<std::size_t>(t.gen)].degree == xi_m.images[g].degree)
                    out.coeffs[g] = f.fma(out.coeffs[g], t.coeff, eta.coeffs[static_cast<std::size_t>(t.gen)]);
        return out;
    }

    /// Yoneda product eta o xi of classes of Ext(A_0, A_0).
    ExtClass product(const ExtClass& eta, const ExtClass& xi, std::mt19937* perturb = nullptr) {
        require_certified(eta.degree + xi.degree);
        auto maps = lift(*r_, xi, eta.degree, perturb);
        return compose_with(eta, maps.back(), eta.degree + xi.degree, xi.shift);
    }

    /// Action of eta in Ext^m(A_0, A_0) on xi in Ext^n(M, A_0), M resolved by src.
    ExtClass act(const ExtClass& eta, const Resolution& src, const ExtClass& xi) {
        require_certified(eta.degree);
        if (eta.degree + xi.degree > src.certified_to())
            throw refusal("degree " + std::to_string(eta.degree + xi.degree) + " of the module resolution is not certified");
        auto maps = lift(src, xi, eta.degree);
        return compose_with(eta, maps.back(), eta.degree + xi.degree, xi.shift);
    }

    /// delta_h o delta_g for every generator h of P_m, where g is a generator of P_n.
    std::vector<ExtClass> left_products(int n, int g, int m) {
        require_certified(n + m);
        const auto& maps = basis_lift(n, g, m);
        const auto& xi_m = maps[static_cast<std::size_t>(m)];
        const auto& f = alg().field();
        const auto& Pm = r_->P(m);
        const int shift = r_->P(n)[static_cast<std::size_t>(g)].degree;
        std::vector<ExtClass> out;
        for (std::size_t h = 0; h < Pm.rank(); ++h)
            out.push_back({n + m, shift + Pm[h].degree, Vector(xi_m.source.rank(), 0)});
        for (std::size_t x = 0; x < xi_m.source.rank(); ++x)
            for (const auto& t : xi_m.images[x].terms)
                if (Pm[static_cast<std::size_t>(t.gen)].degree == xi_m.images[x].degree) {
                    auto& c = out[static_cast<std::size_t>(t.gen)].coeffs[x];
                    c = f.add(c, t.coeff);
                }
        return out;
    }

    void require_certified(int n) const {
        if (n > certified_to())
            throw refusal("Ext^" + std::to_string(n) + " lies beyond the certified range (certified to " +
                          std::to_string(certified_to()) + ")");
    }

private:
    struct SolverEntry {
        Block src, dst;
        LinearSolver solver;
        std::optional<std::vector<Vector>> kernel;
    };

    SolverEntry& solver(int i, int k, int v) {
        auto key = std::tuple{i, k, v};
        auto it = solvers_.find(key);
        if (it != solvers_.end()) return *it->second;
        const auto& A = alg();
        Block src(r_->P(i), A, k, v);
        Block dst(r_->P(i - 1), A, k, v);
        Matrix m = map_block(A, r_->d(i), src, dst);
        auto entry = std::make_unique<SolverEntry>(SolverEntry{std::move(src), std::move(dst), LinearSolver(m), std::nullopt});
        return *solvers_.emplace(key, std::move(entry)).first->second;
    }

    const std::vector<ModuleMap>& basis_lift(int n, int g, int depth) {
        auto& slot = lifts_[{n, g}];
        if (static_cast<int>(slot.size()) <= depth) slot = lift(*r_, basis_class(*r_, n, g), depth);
        return slot;
    }

    const Resolution* r_;
    std::vector<int> p0_;
    std::map<std::tuple<int, int, int>, std::unique_ptr<SolverEntry>> solvers_;
    std::map<std::pair<int, int>, std::vector<ModuleMap>> lifts_;
};

inline ExtClass yoneda_product(YonedaEngine& eng, const ExtClass& eta, const ExtClass& xi) { return eng.product(eta, xi); }

// ------------------------------------------------------------ classification

enum class Verdict { koszul, d_koszul, piecewise_koszul, not_pure, no_fit };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::koszul: return "Koszul";
        case Verdict::d_koszul: return "dKoszul";
        case Verdict::piecewise_koszul: return "PK";
        case Verdict::not_pure: return "NotPure";
        case Verdict::no_fit: return "NoFit";
    }
    return "?";
}

struct Classification {
    Verdict verdict = Verdict::no_fit;
    std::optional<int> p, d;
    int certified_to = -1;
    std::vector<std::pair<int, int>> fitting_pairs;
    std::optional<int> termination_degree;
    std::vector<int> impure_rows;
};

/// Generator degree of each certified row: nullopt for an empty row. Throws nothing;
/// impure rows are collected separately.
inline std::vector<std::optional<int>> row_degrees(const BettiTable& b, std::vector<int>* impure = nullptr) {
    std::vector<std::optional<int>> out;
    for (int n = 0; n <= b.certified_to(); ++n) {
        auto deg = b.row(n).degrees();
        if (deg.size() > 1 && impure) impure->push_back(n);
        out.push_back(deg.empty() ? std::nullopt : std::optional<int>(deg.front()));
    }
    return out;
}

/// All (p, d) with 2 <= p <= max(2, N), p <= d <= D such that every nonempty
/// certified row n sits in degree delta(n) + s.
inline std::vector<std::pair<int, int>> fitting_pairs(const std::vector<std::optional<int>>& degrees, int max_ideg, int s = 0) {
    std::vector<std::pair<int, int>> out;
    const int N = static_cast<int>(degrees.size()) - 1;
    for (int p = 2; p <= std::max(2, N); ++p)
        for (int d = p; d <= std::max(p, max_ideg); ++d) {
            DeltaFunction f(p, d);
            bool ok = true;
            for (int n = 0; n <= N && ok; ++n)
                if (degrees[static_cast<std::size_t>(n)] && *degrees[static_cast<std::size_t>(n)] != f(n) + s) ok = false;
            if (ok) out.emplace_back(p, d);
        }
    return out;
}

inline Verdict verdict_for(const std::vector<std::pair<int, int>>& pairs, std::optional<int>& p, std::optional<int>& d) {
    if (pairs.empty()) return Verdict::no_fit;
    p = pairs.front().first;
    d = pairs.front().second;
    if (*d == *p) {
        p = 2;
        d = 2;
        return Verdict::koszul;
    }
    return *p == 2 ? Verdict::d_koszul : Verdict::piecewise_koszul;
}

inline Classification classify(const BettiTable& b) {
    Classification c;
    c.certified_to = b.certified_to();
    c.termination_degree = b.termination_degree();
    auto degrees = row_degrees(b, &c.impure_rows);
    if (!c.impure_rows.empty()) {
        c.verdict = Verdict::not_pure;
        return c;
    }
    if (c.certified_to < 0) return c;
    c.fitting_pairs = fitting_pairs(degrees, b.max_ideg);
    c.verdict = verdict_for(c.fitting_pairs, c.p, c.d);
    return c;
}

struct ModuleClassification {
    bool piecewise_koszul = false;
    std::optional<int> s;
    int certified_to = -1;
    std::optional<int> failing_row;
    std::string reason;
};

inline ModuleClassification classify_module(const BettiTable& bm, DeltaFunction f) {
    ModuleClassification mc;
    mc.certified_to = bm.certified_to();
    if (mc.certified_to < 0) {
        mc.reason = "no certified rows";
        return mc;
    }
    for (int n = 0; n <= mc.certified_to; ++n) {
        auto deg = bm.row(n).degrees();
        if (deg.empty()) continue;
        if (deg.size() > 1) {
            mc.failing_row = n;
            mc.reason = "row " + std::to_string(n) + " is not pure";
            return mc;
        }
        if (!mc.s) {
            if (n != 0) {
                mc.failing_row = n;
                mc.reason = "row 0 is empty but row " + std::to_string(n) + " is not";
                return mc;
            }
            mc.s = deg.front();
        }
        if (deg.front() != f(n) + *mc.s) {
            mc.failing_row = n;
            mc.reason = "row " + std::to_string(n) + " sits in degree " + std::to_string(deg.front()) + ", expected " +
                        std::to_string(f(n) + *mc.s);
            return mc;
        }
    }
    mc.piecewise_koszul = true;
    return mc;
}

// ------------------------------------------------------- generation degrees

struct GenerationReport {
    int requested = 0;
    int checked_to = -1;
    bool truncated = false;
    /// ext-degree -> shift -> number of classes not in the span of products of lower positive degrees
    std::map<int, std::map<int, int>> new_generators;
    /// ext-degree -> shift -> dim Ext
    std::map<int, std::map<int, int>> dims;

    std::vector<int> degrees() const {
        std::vector<int> d;
        for (const auto& [i, m] : new_generators) d.push_back(i);
        return d;
    }
};

inline GenerationReport ext_generation_degrees(YonedaEngine& eng, int N) {
    GenerationReport rep;
    rep.requested = N;
    rep.checked_to = std::min(N, eng.certified_to());
    rep.truncated = rep.checked_to < N;
    const auto& r = eng.resolution();
    const auto& f = eng.alg().field();
    for (int i = 0; i <= rep.checked_to; ++i) {
        const auto& Pi = r.P(i);
        std::map<int, int> count;
        for (const auto& g : Pi.gens) ++count[g.degree];
        if (!count.empty()) rep.dims[i] = count;
        std::map<int, SpanBuilder> span;
        for (int b = 1; b < i; ++b)
            for (std::size_t g = 0; g < r.P(b).rank(); ++g)
                for (auto& prod : eng.left_products(b, static_cast<int>(g), i - b)) {
                    if (prod.is_zero()) continue;
                    span.try_emplace(prod.shift, Pi.rank(), f).first->second.add(std::move(prod.coeffs));
                }
        for (const auto& [j, c] : count) {
            int reached = 0;
            if (auto it = span.find(j); it != span.end()) reached = static_cast<int>(it->second.rank());
            if (c > reached) rep.new_generators[i][j] = c - reached;
        }
    }
    return rep;
}

/// (p, d) for which Ext is generated in ext-degrees {0, 1, p} with Ext^1 in
/// shift 1 and Ext^p in shift d, within the checked range.
inline std::vector<std::pair<int, int>> generation_fitting_pairs(const GenerationReport& g, int max_ideg) {
    std::vector<std::pair<int, int>> out;
    const int N = g.checked_to;
    if (N < 0) return out;
    auto only_in = [&](int i, int j) {
        auto it = g.dims.find(i);
        if (it == g.dims.end()) return true;
        return std::all_of(it->second.begin(), it->second.end(), [&](const auto& kv) { return kv.first == j; });
    };
    for (int p = 2; p <= std::max(2, N); ++p)
        for (int d = p; d <= std::max(p, max_ideg); ++d) {
            bool ok = only_in(1, 1);
            for (const auto& [i, m] : g.new_generators)
                if (i != 0 && i != 1 && i != p) ok = false;
            if (p <= N && !only_in(p, d)) ok = false;
            if (ok) out.emplace_back(p, d);
        }
    return out;
}

/// True iff products Ext^i . Ext^j span Ext^{i+j}. Refused unless
/// delta(i + j) = delta(i) + delta(j) and i + j is certified.
inline bool yoneda_surjectivity_check(YonedaEngine& eng, DeltaFunction f, int i, int j) {
    if (i < 0 || j < 0) throw input_error("ext-degrees must be nonnegative");
    if (f(i + j) != f(i) + f(j))
        throw refusal("delta(" + std::to_string(i + j) + ") = " + std::to_string(f(i + j)) + " differs from delta(" +
                      std::to_string(i) + ") + delta(" + std::to_string(j) + ") = " + std::to_string(f(i) + f(j)) +
                      "; the surjectivity hypothesis does not hold");
    eng.require_certified(i + j);
    const auto& r = eng.resolution();
    SpanBuilder span(r.P(i + j).rank(), eng.alg().field());
    for (std::size_t g = 0; g < r.P(j).rank(); ++g)
        for (auto& prod : eng.left_products(j, static_cast<int>(g), i)) span.add(std::move(prod.coeffs));
    return span.rank() == r.P(i + j).rank();
}

// ------------------------------------------------------------ module action

struct ModuleGenerationReport {
    int checked_to = -1;
    /// ext-degree -> dim Ext^i(M, A_0)
    std::map<int, int> dims;
    /// ext-degree -> dim of Ext^i(A_0, A_0) . Ext^0(M, A_0)
    std::map<int, int> reached;
    bool generated_in_degree_zero = false;
};

/// Whether Ext(M, A_0) is generated by its ext-degree-0 part under the Yoneda action.
inline ModuleGenerationReport module_generation(YonedaEngine& eng, const Resolution& rm, int N) {
    ModuleGenerationReport rep;
    rep.checked_to = std::min({N, rm.certified_to(), eng.certified_to()});
    if (rep.checked_to < 0) return rep;
    const auto& f = eng.alg().field();
    const auto& R = eng.resolution();
    std::vector<std::vector<ModuleMap>> lifts;
    for (std::size_t g = 0; g < rm.P(0).rank(); ++g)
        lifts.push_back(eng.lift(rm, basis_class(rm, 0, static_cast<int>(g)), rep.checked_to));
    rep.generated_in_degree_zero = true;
    for (int i = 0; i <= rep.checked_to; ++i) {
        SpanBuilder span(rm.P(i).rank(), f);
        for (std::size_t g = 0; g < lifts.size(); ++g)
            for (std::size_t h = 0; h < R.P(i).rank(); ++h) {
                auto eta = basis_class(R, i, static_cast<int>(h));
                span.add(eng.compose_with(eta, lifts[g][static_cast<std::size_t>(i)], i, rm.P(0)[g].degree).coeffs);
            }
        rep.dims[i] = static_cast<int>(rm.P(i).rank());
        rep.reached[i] = static_cast<int>(span.rank());
        if (span.rank() != rm.P(i).rank()) rep.generated_in_degree_zero = false;
    }
    return rep;
}

// ------------------------------------------------------------- E_k pieces

/// The subalgebra of Ext(A_0, A_0) in ext-degrees p k n, n = 0..n_max, as a
/// graded algebra with degree-n piece Ext^{pkn}. A class of Ext(S_u, S_v) has
/// source v and target u, so products compose like paths.
inline GradedAlgebraData ek_subalgebra(YonedaEngine& eng, DeltaFunction f, int k, int n_max) {
    if (k < 1) throw input_error("k must be at least 1");
    if (n_max < 0) throw input_error("n_max must be nonnegative");
    const int step = f.p * k;
    eng.require_certified(step * n_max);
    const auto& r = eng.resolution();
    const auto& A = eng.alg();
    const auto& P0 = r.P(0);
    if (static_cast<int>(P0.rank()) != A.vertex_count())
        throw refusal("Ext^0 is not one-dimensional per vertex");

    // basis order per degree: pair-major, then generator index
    std::vector<std::vector<int>> order(static_cast<std::size_t>(n_max) + 1);
    std::vector<std::vector<int>> index_of(static_cast<std::size_t>(n_max) + 1);
    std::vector<std::vector<BasisElement>> basis(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) {
        const auto& P = r.P(step * n);
        auto& ord = order[static_cast<std::size_t>(n)];
        for (std::size_t g = 0; g < P.rank(); ++g) ord.push_back(static_cast<int>(g));
        std::stable_sort(ord.begin(), ord.end(), [&](int a, int b) {
            const auto &x = P[static_cast<std::size_t>(a)], &y = P[static_cast<std::size_t>(b)];
            return std::pair{x.vertex, x.origin} < std::pair{y.vertex, y.origin};
        });
        index_of[static_cast<std::size_t>(n)].assign(P.rank(), -1);
        for (std::size_t pos = 0; pos < ord.size(); ++pos) {
            const auto& g = P[static_cast<std::size_t>(ord[pos])];
            index_of[static_cast<std::size_t>(n)][static_cast<std::size_t>(ord[pos])] = static_cast<int>(pos);
            std::string label = n == 0 ? "e_" + A.vertex_label(g.vertex)
                                       : "E" + std::to_string(step * n) + "_" + std::to_string(ord[pos]);
            basis[static_cast<std::size_t>(n)].push_back({g.vertex, g.origin, label});
        }
    }

    std::vector<std::vector<std::vector<SparseVector>>> products(static_cast<std::size_t>(n_max) + 1);
    for (int a = 0; a <= n_max; ++a)
        for (int b = 0; a + b <= n_max; ++b) {
            const std::size_t da = order[static_cast<std::size_t>(a)].size(), db = order[static_cast<std::size_t>(b)].size();
            std::vector<SparseVector> block(da * db);
            for (std::size_t y = 0; y < db; ++y) {
                int gb = order[static_cast<std::size_t>(b)][y];
                auto prods = eng.left_products(step * b, gb, step * a);
                for (std::size_t x = 0; x < da; ++x) {
                    const auto& c = prods[static_cast<std::size_t>(order[static_cast<std::size_t>(a)][x])].coeffs;
                    SparseVector sv;
                    for (std::size_t t = 0; t < c.size(); ++t)
                        if (c[t]) sv.emplace_back(index_of[static_cast<std::size_t>(a + b)][t], c[t]);
                    std::sort(sv.begin(), sv.end());
                    block[x * db + y] = std::move(sv);
                }
            }
            products[static_cast<std::size_t>(a)].push_back(std::move(block));
        }
    return GradedAlgebraData(A.field(), A.vertex_labels(), std::move(basis), std::move(products));
}

// ------------------------------------------------------------------ arities

struct ArityReport {
    int q_max = 0;
    int checked_to = -1;
    std::vector<int> support;
    std::optional<std::vector<int>> closed_form;
    std::optional<bool> consistent;
};

namespace detail {

/// Bidegrees (i, j) with i >= 1 and nonzero dimension, i within the certified range.
inline std::vector<std::pair<int, int>> positive_support(const ExtTable& e) {
    std::vector<std::pair<int, int>> s;
    const int N = e.certified_to();
    for (const auto& [k, c] : e.dims)
        if (c > 0 && k.first >= 1 && k.first <= N) s.push_back(k);
    return s;
}

inline int max_shift(const ExtTable& e) {
    int m = 0;
    for (const auto& [k, c] : e.dims)
        if (c > 0 && k.first <= e.certified_to()) m = std::max(m, k.second);
    return m;
}

}  // namespace detail

/// Arities q <= q_max for which the bigrading admits a nonzero m_q. For p = 3
/// also the closed-form set {k(d-3)+2}.
inline ArityReport ainfty_feasible_arities(const ExtTable& e, std::optional<DeltaFunction> f, int q_max) {
    ArityReport rep;
    rep.q_max = q_max;
    rep.checked_to = e.certified_to();
    const int N = rep.checked_to;
    const auto bideg = detail::positive_support(e);
    const int J = detail::max_shift(e);
    std::set<std::pair<int, int>> sums{{0, 0}};
    for (int q = 1; q <= q_max; ++q) {
        std::set<std::pair<int, int>> next;
        for (auto [si, sj] : sums)
            for (auto [i, j] : bideg)
                if (si + i <= N + q_max - 2 && sj + j <= J) next.insert({si + i, sj + j});
        sums = std::move(next);
        if (q < 2) continue;
        for (auto [si, sj] : sums) {
            int target = si + 2 - q;
            if (target >= 0 && target <= N && e.dim(target, sj) > 0) {
                rep.support.push_back(q);
                break;
            }
        }
    }
    if (f && f->p == 3) {
        std::vector<int> closed;
        for (int q = 2; q <= q_max; ++q) {
            if (f->d == 3) {
                if (q == 2) closed.push_back(q);
            } else if ((q - 2) % (f->d - 3) == 0) {
                closed.push_back(q);
            }
        }
        rep.consistent = std::includes(closed.begin(), closed.end(), rep.support.begin(), rep.support.end());
        rep.closed_form = std::move(closed);
    }
    return rep;
}

// ---------------------------------------------------------- reduced (2,l)

struct Reduced2lReport {
    int l = 0;
    int checked_to = -1;
    /// E^0 is one class per vertex in shift 0
    bool cond1 = false;
    /// m_2 vanishes on E^{3k+s1} (x) E^{3k'+s2} with (s1, s2) in {(1,2), (2,1), (2,2)}
    bool cond2 = false;
    std::vector<std::array<int, 4>> cond2_offending;  // i1, j1, i2, j2
    /// every disallowed l-tuple is forced to zero by the bigrading
    bool cond3_forced = false;
    std::vector<std::pair<int, int>> cond3_undetermined;  // target bidegrees of disallowed tuples
    /// ext-degree -> shift -> dimension not reached by m_2 products of positive degrees
    std::map<int, std::map<int, int>> m2_missing;
    /// every unreached bidegree of degree >= 2 is a possible target of m_l on allowed tuples
    bool ml_feasible = false;
    std::vector<std::pair<int, int>> ml_unreachable;
};

inline Reduced2lReport reduced_2l_check(YonedaEngine& eng, const ExtTable& e, int l) {
    if (l < 3) throw input_error("l must be at least 3");
    Reduced2lReport rep;
    rep.l = l;
    const auto& r = eng.resolution();
    const auto& A = eng.alg();
    rep.checked_to = std::min(eng.certified_to(), e.certified_to());
    const int N = rep.checked_to;

    rep.cond1 = N >= 0 && static_cast<int>(r.P(0).rank()) == A.vertex_count() &&
                std::all_of(r.P(0).gens.begin(), r.P(0).gens.end(), [](const Generator& g) { return g.degree == 0; });

    rep.cond2 = true;
    auto is_restricted = [](int i1, int i2) {
        int s1 = i1 % 3, s2 = i2 % 3;
        return s1 != 0 && s2 != 0 && s1 + s2 >= 3;
    };
    std::set<std::array<int, 4>> offending;
    for (int i = 2; i <= N; ++i) {
        const auto& Pi = r.P(i);
        std::map<int, SpanBuilder> span;
        for (int i2 = 1; i2 < i; ++i2) {
            const int i1 = i - i2;
            for (std::size_t g = 0; g < r.P(i2).rank(); ++g) {
                auto prods = eng.left_products(i2, static_cast<int>(g), i1);
                for (std::size_t h = 0; h < prods.size(); ++h) {
                    if (prods[h].is_zero()) continue;
                    if (is_restricted(i1, i2)) {
                        rep.cond2 = false;
                        offending.insert({i1, r.P(i1)[h].degree, i2, r.P(i2)[g].degree});
                    }
                    span.try_emplace(prods[h].shift, Pi.rank(), A.field()).first->second.add(std::move(prods[h].coeffs));
                }
            }
        }
        std::map<int, int> count;
        for (const auto& g : Pi.gens) ++count[g.degree];
        for (const auto& [j, c] : count) {
            int reached = 0;
            if (auto it = span.find(j); it != span.end()) reached = static_cast<int>(it->second.rank());
            if (c > reached) rep.m2_missing[i][j] = c - reached;
        }
    }
    rep.cond2_offending.assign(offending.begin(), offending.end());

    // l-fold bigrading sums, split by whether the residues mod 3 form an allowed tuple
    // (exactly one entry = 2, the rest = 1).
    const auto bideg = detail::positive_support(e);
    const int J = detail::max_shift(e);
    using State = std::tuple<int, int, int, int>;  // sum i, sum j, #(=2) capped at 2, #(=0) capped at 1
    std::set<State> states{{0, 0, 0, 0}};
    for (int t = 0; t < l; ++t) {
        std::set<State> next;
        for (auto [si, sj, c2, c0] : states)
            for (auto [i, j] : bideg) {
                if (si + i > N + l - 2 || sj + j > J) continue;
                next.insert({si + i, sj + j, std::min(2, c2 + (i % 3 == 2)), std::min(1, c0 + (i % 3 == 0))});
            }
        states = std::move(next);
    }
    std::set<std::pair<int, int>> allowed_targets, disallowed_targets;
    for (auto [si, sj, c2, c0] : states) {
        int ti = si + 2 - l;
        if (ti < 0 || ti > N || e.dim(ti, sj) == 0) continue;
        (c2 == 1 && c0 == 0 ? allowed_targets : disallowed_targets).insert({ti, sj});
    }
    rep.cond3_undetermined.assign(disallowed_targets.begin(), disallowed_targets.end());
    rep.cond3_forced = rep.cond3_undetermined.empty();

    rep.ml_feasible = true;
    for (const auto& [i, m] : rep.m2_missing)
        for (const auto& [j, c] : m)
            if (!allowed_targets.count({i, j})) {
                rep.ml_feasible = false;
                rep.ml_unreachable.emplace_back(i, j);
            }
    return rep;
}

// ------------------------------------------------ radical exact sequence

struct RadicalSequenceReport {
    ModuleClassification module, radical, top;
    int checked_to = -1;
    /// beta_n(M/JM) = beta_n(M) + beta_{n-1}(JM) for all checked n, by degree and vertex
    bool betti_additive = false;
    std::optional<int> first_mismatch;
};

/// Resolves M, JM and M/JM to (N, D) and compares them along 0 -> JM -> M -> M/JM -> 0.
inline RadicalSequenceReport radical_sequence_check(const AlgebraPtr& alg, const ModulePresentation& m, DeltaFunction f,
                                                    int N, int D) {
    RadicalSequenceReport rep;
    auto rm = minimal_resolution(alg, m, N, D);
    auto rj = minimal_resolution(alg, radical_submodule(*alg, m, D), N, D);
    auto rt = minimal_resolution(alg, top_quotient(m, *alg), N, D);
    auto bm = betti_table(rm), bj = betti_table(rj), bt = betti_table(rt);
    rep.module = classify_module(bm, f);
    rep.radical = classify_module(bj, f);
    rep.top = classify_module(bt, f);
    rep.checked_to = std::min({bm.certified_to(), bt.certified_to(), bj.certified_to() + 1});
    rep.betti_additive = true;
    for (int n = 0; n <= rep.checked_to; ++n) {
        auto expect = bm.row(n).counts;
        if (n >= 1)
            for (const auto& [k, c] : bj.row(n - 1).counts) expect[k] += c;
        if (expect != bt.row(n).counts) {
            rep.betti_additive = false;
            rep.first_mismatch = n;
            break;
        }
    }
    return rep;
}

}  // namespace pkoszul
