#pragma once

// Graded free right modules over a GradedAlgebraData, homogeneous module maps,
// and module presentations.
//
// The free module on a generator g at vertex v is g * e_v A: its degree-k part
// is spanned by g * w for basis words w of degree k - deg(g) starting at v.
// A map is determined by the images of its generators and acts by
// f(g * w) = f(g) * w.

#include <algorithm>
#include <climits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "errors.hpp"
#include "scalars.hpp"

namespace pkoszul {

struct Generator {
    int vertex = 0;
    int degree = 0;
    /// Vertex of the simple module this generator belongs to in a resolution of A_0; -1 otherwise.
    int origin = -1;

    friend bool operator==(const Generator&, const Generator&) = default;
};

struct FreeModule {
    std::vector<Generator> gens;

    std::size_t rank() const { return gens.size(); }
    bool empty() const { return gens.empty(); }
    const Generator& operator[](std::size_t i) const { return gens[i]; }

    int min_degree() const {
        int d = INT_MAX;
        for (const auto& g : gens) d = std::min(d, g.degree);
        return d;
    }
    int max_degree() const {
        int d = INT_MIN;
        for (const auto& g : gens) d = std::max(d, g.degree);
        return d;
    }

    friend bool operator==(const FreeModule&, const FreeModule&) = default;
};

/// One basis vector gen * word of a degree slice; word indexes the algebra
/// basis in degree (slice degree - generator degree).
struct SliceEntry {
    int gen;
    int word;

    friend bool operator==(const SliceEntry&, const SliceEntry&) = default;
};

/// Basis of the degree-k part of a free module: generators in order, then
/// algebra words in basis (monomial) order.
inline std::vector<SliceEntry> degree_slice(const FreeModule& m, const GradedAlgebraData& alg, int k) {
    if (k > alg.max_degree() + std::max(0, m.max_degree()))
        throw input_error("slice degree " + std::to_string(k) + " beyond the algebra truncation");
    std::vector<SliceEntry> out;
    for (std::size_t g = 0; g < m.rank(); ++g) {
        int e = k - m[g].degree;
        if (e < 0 || e > alg.max_degree()) continue;
        for (int w : alg.starting_at(e, m[g].vertex)) out.push_back({static_cast<int>(g), w});
    }
    return out;
}

/// Index layout of the part of a degree slice whose words end at one vertex.
/// Resolutions decompose along this splitting, so the engine works blockwise.
class Block {
public:
    Block(const FreeModule& m, const GradedAlgebraData& alg, int k, int v) : degree_(k), vertex_(v) {
        offsets_.assign(m.rank(), -1);
        int size = 0;
        for (std::size_t g = 0; g < m.rank(); ++g) {
            int e = k - m[g].degree;
            if (e < 0 || e > alg.max_degree()) continue;
            offsets_[g] = size;
            for (int w : alg.between(e, m[g].vertex, v)) entries_.push_back({static_cast<int>(g), w});
            size += static_cast<int>(alg.between(e, m[g].vertex, v).size());
        }
    }

    int degree() const { return degree_; }
    int vertex() const { return vertex_; }
    std::size_t size() const { return entries_.size(); }
    const std::vector<SliceEntry>& entries() const { return entries_; }

    /// Position of gen * word, where word has degree (block degree - deg(gen)).
    std::size_t position(const GradedAlgebraData& alg, const FreeModule& m, int gen, int word) const {
        int e = degree_ - m[static_cast<std::size_t>(gen)].degree;
        return static_cast<std::size_t>(offsets_[static_cast<std::size_t>(gen)] + alg.position_between(e, word));
    }

private:
    int degree_, vertex_;
    std::vector<int> offsets_;
    std::vector<SliceEntry> entries_;
};

struct ModuleTerm {
    int gen;
    int word;
    Residue coeff;

    friend bool operator==(const ModuleTerm&, const ModuleTerm&) = default;
};

/// Homogeneous element sum coeff * gen * word of a free module.
struct ModuleElement {
    int degree = 0;
    std::vector<ModuleTerm> terms;

    bool is_zero() const { return terms.empty(); }
    friend bool operator==(const ModuleElement&, const ModuleElement&) = default;
};

/// Element whose coordinates in the given block are v.
inline ModuleElement element_from_block(const Block& b, const std::vector<Residue>& v) {
    ModuleElement e{b.degree(), {}};
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i]) e.terms.push_back({b.entries()[i].gen, b.entries()[i].word, v[i]});
    return e;
}

inline ModuleElement generator_element(const FreeModule& m, const GradedAlgebraData& alg, int gen, Residue c = 1) {
    const auto& g = m[static_cast<std::size_t>(gen)];
    return {g.degree, {{gen, alg.idempotent(g.vertex), c}}};
}

/// Accumulates x * word (word of degree l, starting where x's words end) into
/// a dense vector over the block of degree deg(x) + l at the word's target.
inline void add_times_word(const GradedAlgebraData& alg, const FreeModule& m, const ModuleElement& x, int l, int word,
                           Residue scale, const Block& into, std::vector<Residue>& acc) {
    const auto& f = alg.field();
    for (const auto& t : x.terms) {
        int e = x.degree - m[static_cast<std::size_t>(t.gen)].degree;
        Residue c = f.mul(t.coeff, scale);
        for (auto [r, v] : alg.multiply(e, t.word, l, word))
            if (v) {
                auto pos = into.position(alg, m, t.gen, r);
                acc[pos] = f.fma(acc[pos], c, v);
            }
    }
}

/// Homogeneous map of free modules lowering internal degree by `shift`
/// (shift 0 for differentials). images[g] lives in target degree deg(g) - shift
/// and is supported on words ending at g's vertex.
struct ModuleMap {
    FreeModule source;
    FreeModule target;
    int shift = 0;
    std::vector<ModuleElement> images;

    static ModuleMap zero(FreeModule src, FreeModule tgt, int shift = 0) {
        ModuleMap m{std::move(src), std::move(tgt), shift, {}};
        for (const auto& g : m.source.gens) m.images.push_back({g.degree - shift, {}});
        return m;
    }

    static ModuleMap identity(const FreeModule& f, const GradedAlgebraData& alg) {
        ModuleMap m{f, f, 0, {}};
        for (std::size_t g = 0; g < f.rank(); ++g) m.images.push_back(generator_element(f, alg, static_cast<int>(g)));
        return m;
    }
};

/// f(x) as a dense vector over target block (deg(x) - shift, v), where x lies in the v block.
inline std::vector<Residue> apply_dense(const GradedAlgebraData& alg, const ModuleMap& f, const ModuleElement& x,
                                        const Block& into) {
    std::vector<Residue> acc(into.size(), 0);
    for (const auto& t : x.terms) {
        const auto& img = f.images[static_cast<std::size_t>(t.gen)];
        int l = x.degree - f.source[static_cast<std::size_t>(t.gen)].degree;
        add_times_word(alg, f.target, img, l, t.word, t.coeff, into, acc);
    }
    return acc;
}

/// Matrix of f restricted to the degree-k, vertex-v blocks.
inline Matrix map_block(const GradedAlgebraData& alg, const ModuleMap& f, const Block& src, const Block& dst) {
    Matrix m(dst.size(), src.size(), alg.field());
    std::vector<Residue> col(dst.size());
    for (std::size_t j = 0; j < src.size(); ++j) {
        const auto& e = src.entries()[j];
        std::fill(col.begin(), col.end(), 0);
        int l = src.degree() - f.source[static_cast<std::size_t>(e.gen)].degree;
        add_times_word(alg, f.target, f.images[static_cast<std::size_t>(e.gen)], l, e.word, 1, dst, col);
        m.set_column(j, col);
    }
    return m;
}

/// Scalar matrix of f on full degree-k slices (degree k -> degree k - shift),
/// in degree_slice order on both sides.
inline Matrix map_slice(const ModuleMap& f, const GradedAlgebraData& alg, int k) {
    auto src = degree_slice(f.source, alg, k);
    auto dst = degree_slice(f.target, alg, k - f.shift);
    std::map<std::pair<int, int>, std::size_t> row_of;
    for (std::size_t i = 0; i < dst.size(); ++i) row_of[{dst[i].gen, dst[i].word}] = i;
    Matrix m(dst.size(), src.size(), alg.field());
    const auto& fld = alg.field();
    for (std::size_t j = 0; j < src.size(); ++j) {
        const auto& e = src[j];
        const auto& img = f.images[static_cast<std::size_t>(e.gen)];
        int l = k - f.source[static_cast<std::size_t>(e.gen)].degree;
        for (const auto& t : img.terms) {
            int de = img.degree - f.target[static_cast<std::size_t>(t.gen)].degree;
            for (auto [r, v] : alg.multiply(de, t.word, l, e.word)) {
                auto& cell = m(row_of.at({t.gen, r}), j);
                cell = fld.fma(cell, t.coeff, v);
            }
        }
    }
    return m;
}

/// g o f
inline ModuleMap compose(const GradedAlgebraData& alg, const ModuleMap& g, const ModuleMap& f) {
    if (!(f.target == g.source)) throw input_error("compose: modules do not match");
    ModuleMap h{f.source, g.target, f.shift + g.shift, {}};
    for (std::size_t i = 0; i < f.source.rank(); ++i) {
        const auto& x = f.images[i];
        int v = f.source[i].vertex;
        Block into(g.target, alg, x.degree - g.shift, v);
        h.images.push_back(element_from_block(into, apply_dense(alg, g, x, into)));
    }
    return h;
}

/// The module coker(relations: F1 -> generators). valid_to bounds the internal
/// degrees in which the relation list is known to be complete.
struct ModulePresentation {
    std::string name;
    FreeModule generators;
    ModuleMap relations;
    int valid_to = INT_MAX;

    /// Lowest generator degree (the s of a module generated in degree s).
    int shift() const { return generators.min_degree(); }
};

/// Trivial module S_v = e_v A / e_v J, or A_0 when v < 0. Presented by the
/// degree-one words when A is generated in degree one, otherwise by all of J.
inline ModulePresentation trivial_presentation(const GradedAlgebraData& alg, int v = -1) {
    ModulePresentation p;
    p.name = v < 0 ? "A0" : "S_" + alg.vertex_label(v);
    for (int u = 0; u < alg.vertex_count(); ++u)
        if (v < 0 || u == v) p.generators.gens.push_back({u, 0, u});
    FreeModule rel;
    std::vector<ModuleElement> images;
    const int top = alg.bounds().generated_in_degree_one ? std::min(1, alg.max_degree()) : alg.max_degree();
    for (std::size_t g = 0; g < p.generators.rank(); ++g)
        for (int k = 1; k <= top; ++k)
            for (int w : alg.starting_at(k, p.generators[g].vertex)) {
                rel.gens.push_back({alg.element(k, w).target, k, -1});
                images.push_back({k, {{static_cast<int>(g), w, 1}}});
            }
    p.relations = ModuleMap{rel, p.generators, 0, std::move(images)};
    return p;
}

inline ModulePresentation free_presentation(const FreeModule& f, std::string name = "free") {
    return {std::move(name), f, ModuleMap::zero({}, f), INT_MAX};
}

inline ModulePresentation direct_sum(const ModulePresentation& a, const ModulePresentation& b) {
    ModulePresentation s;
    s.name = a.name + "+" + b.name;
    s.generators.gens = a.generators.gens;
    s.generators.gens.insert(s.generators.gens.end(), b.generators.gens.begin(), b.generators.gens.end());
    FreeModule rel;
    rel.gens = a.relations.source.gens;
    rel.gens.insert(rel.gens.end(), b.relations.source.gens.begin(), b.relations.source.gens.end());
    std::vector<ModuleElement> images = a.relations.images;
    const int off = static_cast<int>(a.generators.rank());
    for (auto img : b.relations.images) {
        for (auto& t : img.terms) t.gen += off;
        images.push_back(std::move(img));
    }
    s.relations = ModuleMap{rel, s.generators, 0, std::move(images)};
    s.valid_to = std::min(a.valid_to, b.valid_to);
    return s;
}

/// M / JM: adds gen * w for every generator and every degree-one word w.
inline ModulePresentation top_quotient(const ModulePresentation& m, const GradedAlgebraData& alg) {
    ModulePresentation q = m;
    q.name = m.name + "/J" + m.name;
    const int top = alg.bounds().generated_in_degree_one ? std::min(1, alg.max_degree()) : alg.max_degree();
    for (std::size_t g = 0; g < m.generators.rank(); ++g)
        for (int k = 1; k <= top; ++k)
            for (int w : alg.starting_at(k, m.generators[g].vertex)) {
                q.relations.source.gens.push_back({alg.element(k, w).target, m.generators[g].degree + k, -1});
                q.relations.images.push_back({m.generators[g].degree + k, {{static_cast<int>(g), w, 1}}});
            }
    return q;
}

}  // namespace pkoszul
