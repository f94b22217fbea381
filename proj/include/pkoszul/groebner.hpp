#pragma once

// Degree-truncated noncommutative Groebner bases for homogeneous ideals in a
// path algebra, normal forms, and the resulting truncated graded algebra.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "errors.hpp"
#include "presentation.hpp"
#include "scalars.hpp"

namespace pkoszul {

/// Length first, then left-to-right comparison by arrow precedence. Arrows
/// earlier in the precedence list are larger. Idempotents compare by vertex.
class MonomialOrder {
public:
    MonomialOrder() = default;

    /// Declaration order: the first arrow is the largest.
    explicit MonomialOrder(int arrow_count) : rank_(static_cast<std::size_t>(arrow_count)) {
        std::iota(rank_.begin(), rank_.end(), 0);
    }

    /// precedence[i] is the arrow at position i (position 0 is the largest).
    static MonomialOrder from_precedence(const std::vector<int>& precedence) {
        MonomialOrder o;
        o.rank_.assign(precedence.size(), -1);
        for (std::size_t i = 0; i < precedence.size(); ++i) {
            int a = precedence[i];
            if (a < 0 || a >= static_cast<int>(precedence.size()) || o.rank_[static_cast<std::size_t>(a)] != -1)
                throw input_error("arrow precedence must be a permutation of the arrows");
            o.rank_[static_cast<std::size_t>(a)] = static_cast<int>(i);
        }
        return o;
    }

    std::vector<int> precedence() const {
        std::vector<int> p(rank_.size());
        for (std::size_t a = 0; a < rank_.size(); ++a) p[static_cast<std::size_t>(rank_[a])] = static_cast<int>(a);
        return p;
    }
    std::size_t arrow_count() const { return rank_.size(); }

    /// <0 if a < b, 0 if equal, >0 if a > b.
    int compare(const PathWord& a, const PathWord& b) const {
        if (a.length() != b.length()) return a.length() < b.length() ? -1 : 1;
        for (std::size_t i = 0; i < a.arrows.size(); ++i) {
            int ra = rank_[static_cast<std::size_t>(a.arrows[i])], rb = rank_[static_cast<std::size_t>(b.arrows[i])];
            if (ra != rb) return ra < rb ? 1 : -1;
        }
        if (a.source != b.source) return a.source < b.source ? 1 : -1;
        if (a.target != b.target) return a.target < b.target ? 1 : -1;
        return 0;
    }

    /// Comparator placing larger words first.
    struct Descending {
        const MonomialOrder* order;
        bool operator()(const PathWord& a, const PathWord& b) const { return order->compare(a, b) > 0; }
    };

private:
    std::vector<int> rank_;
};

/// Leading (largest) word of a nonzero element.
inline PathWord leading_word(const AlgebraElement& e, const MonomialOrder& o) {
    if (e.is_zero()) throw std::invalid_argument("leading word of zero");
    const PathWord* best = nullptr;
    for (const auto& [w, c] : e.terms())
        if (!best || o.compare(w, *best) > 0) best = &w;
    return *best;
}

struct GroebnerBasis {
    Quiver quiver;
    PrimeField field;
    MonomialOrder order;
    int truncation = 0;
    /// Monic, homogeneous, leading words pairwise non-divisible.
    std::vector<AlgebraElement> elements;
    std::vector<PathWord> tips;

    int max_tip_degree() const {
        int g = 0;
        for (const auto& t : tips) g = std::max(g, t.length());
        return g;
    }
    /// All overlaps of the basis have degree <= 2g-1, so if that fits under the
    /// truncation the basis is a Groebner basis in every degree.
    bool complete() const { return tips.empty() || 2 * max_tip_degree() - 1 <= truncation; }
};

namespace detail {

using Poly = std::map<PathWord, Residue, MonomialOrder::Descending>;

class Reducer {
public:
    explicit Reducer(const GroebnerBasis& gb) : gb_(gb), memo_(MonomialOrder::Descending{&gb.order}) {
        for (std::size_t i = 0; i < gb.tips.size(); ++i) add_tip(i);
    }

    void add_tip(std::size_t i) {
        tip_index_[gb_.tips[i].arrows] = i;
        tip_lengths_.insert(gb_.tips[i].length());
        memo_.clear();
    }

    Poly empty() const { return Poly(MonomialOrder::Descending{&gb_.order}); }

    const Poly& word(const PathWord& w) {
        if (auto it = memo_.find(w); it != memo_.end()) return it->second;
        Poly result = empty();
        auto hit = find_tip(w);
        if (!hit) {
            result.emplace(w, 1);
        } else {
            auto [start, idx] = *hit;
            const PathWord& tip = gb_.tips[idx];
            const auto& f = gb_.field;
            for (const auto& [t, c] : gb_.elements[idx].terms()) {
                if (t == tip) continue;
                PathWord rewritten{w.source, w.target, {}};
                rewritten.arrows.assign(w.arrows.begin(), w.arrows.begin() + static_cast<std::ptrdiff_t>(start));
                rewritten.arrows.insert(rewritten.arrows.end(), t.arrows.begin(), t.arrows.end());
                rewritten.arrows.insert(rewritten.arrows.end(),
                                        w.arrows.begin() + static_cast<std::ptrdiff_t>(start) + tip.length(), w.arrows.end());
                Residue factor = f.neg(c);
                for (const auto& [u, d] : word(rewritten)) accumulate(result, u, f.mul(factor, d));
            }
        }
        return memo_.emplace(w, std::move(result)).first->second;
    }

    Poly reduce(const Poly& p) {
        Poly r = empty();
        for (const auto& [w, c] : p)
            for (const auto& [u, d] : word(w)) accumulate(r, u, gb_.field.mul(c, d));
        return r;
    }

    void accumulate(Poly& p, const PathWord& w, Residue c) const {
        if (!c) return;
        auto [it, inserted] = p.try_emplace(w, c);
        if (!inserted) {
            it->second = gb_.field.add(it->second, c);
            if (!it->second) p.erase(it);
        }
    }

    /// (start position, basis index) of the leftmost tip occurring in w.
    std::optional<std::pair<std::size_t, std::size_t>> find_tip(const PathWord& w) const {
        for (std::size_t s = 0; s < w.arrows.size(); ++s)
            for (int len : tip_lengths_) {
                if (s + static_cast<std::size_t>(len) > w.arrows.size()) break;
                std::vector<int> sub(w.arrows.begin() + static_cast<std::ptrdiff_t>(s),
                                     w.arrows.begin() + static_cast<std::ptrdiff_t>(s) + len);
                if (auto it = tip_index_.find(sub); it != tip_index_.end()) return std::pair{s, it->second};
            }
        return std::nullopt;
    }

    bool has_tip_suffix(const PathWord& w) const {
        for (int len : tip_lengths_) {
            if (static_cast<std::size_t>(len) > w.arrows.size()) break;
            std::vector<int> sub(w.arrows.end() - len, w.arrows.end());
            if (tip_index_.count(sub)) return true;
        }
        return false;
    }

private:
    const GroebnerBasis& gb_;
    std::map<std::vector<int>, std::size_t> tip_index_;
    std::set<int> tip_lengths_;
    std::map<PathWord, Poly, MonomialOrder::Descending> memo_;
};

inline AlgebraElement to_element(const Poly& p, PrimeField f) {
    AlgebraElement e(f);
    for (const auto& [w, c] : p) e.add_term(w, c);
    return e;
}

}  // namespace detail

/// Homogeneous noncommutative Buchberger completion, processed degree by
/// degree up to the truncation. Overlaps within a degree are taken in
/// lexicographic order of (first element, second element, overlap length).
inline GroebnerBasis buchberger_truncated(const QuiverPresentation& p, const MonomialOrder& order, int truncation) {
    if (auto rep = validate(p); !rep.ok())
        throw input_error("presentation is invalid: relation " + std::to_string(rep.issues.front().relation + 1) + " is " +
                          to_string(rep.issues.front().kind));
    if (order.arrow_count() != static_cast<std::size_t>(p.quiver.arrow_count()))
        throw input_error("monomial order does not match the quiver's arrows");
    if (truncation < p.max_relation_degree())
        throw input_error("truncation degree " + std::to_string(truncation) + " is below the relation degree " +
                          std::to_string(p.max_relation_degree()));

    GroebnerBasis gb{p.quiver, p.field, order, truncation, {}, {}};
    detail::Reducer reducer(gb);
    const PrimeField f = p.field;

    auto add_candidate = [&](const detail::Poly& cand) {
        detail::Poly r = reducer.reduce(cand);
        if (r.empty()) return;
        Residue s = f.inv(r.begin()->second);
        for (auto& [w, c] : r) c = f.mul(c, s);
        gb.tips.push_back(r.begin()->first);
        gb.elements.push_back(detail::to_element(r, f));
        reducer.add_tip(gb.tips.size() - 1);
    };

    for (int k = 2; k <= truncation; ++k) {
        const std::size_t existing = gb.elements.size();
        for (const auto& rel : p.relations) {
            if (rel.degree() != k) continue;
            detail::Poly cand = reducer.empty();
            for (const auto& [w, c] : rel.terms()) reducer.accumulate(cand, w, c);
            add_candidate(cand);
        }
        for (std::size_t i = 0; i < existing; ++i)
            for (std::size_t j = 0; j < existing; ++j) {
                const auto& ti = gb.tips[i].arrows;
                const auto& tj = gb.tips[j].arrows;
                const int li = static_cast<int>(ti.size()), lj = static_cast<int>(tj.size());
                for (int o = 1; o < std::min(li, lj); ++o) {
                    if (li + lj - o != k) continue;
                    if (!std::equal(ti.end() - o, ti.end(), tj.begin())) continue;
                    // S = g_i * v - u * g_j with t_i = u o, t_j = o v
                    std::vector<int> u(ti.begin(), ti.end() - o), v(tj.begin() + o, tj.end());
                    detail::Poly s = reducer.empty();
                    for (const auto& [w, c] : gb.elements[i].terms()) {
                        PathWord x{w.source, gb.tips[j].target, w.arrows};
                        x.arrows.insert(x.arrows.end(), v.begin(), v.end());
                        reducer.accumulate(s, x, c);
                    }
                    for (const auto& [w, c] : gb.elements[j].terms()) {
                        PathWord x{gb.tips[i].source, w.target, u};
                        x.arrows.insert(x.arrows.end(), w.arrows.begin(), w.arrows.end());
                        reducer.accumulate(s, x, f.neg(c));
                    }
                    add_candidate(s);
                }
            }
    }
    return gb;
}

inline AlgebraElement normal_form(const AlgebraElement& a, const GroebnerBasis& gb) {
    for (const auto& [w, c] : a.terms())
        if (w.length() > gb.truncation)
            throw input_error("normal form requested in degree " + std::to_string(w.length()) + " above the truncation " +
                              std::to_string(gb.truncation));
    detail::Reducer r(gb);
    detail::Poly p = r.empty();
    for (const auto& [w, c] : a.terms()) r.accumulate(p, w, c);
    return detail::to_element(r.reduce(p), gb.field);
}

/// Normal words of each degree 0..d, largest first within a degree.
inline std::vector<std::vector<PathWord>> normal_words(const GroebnerBasis& gb, int d) {
    detail::Reducer r(gb);
    std::vector<std::vector<PathWord>> words(static_cast<std::size_t>(d) + 1);
    for (int v = 0; v < gb.quiver.vertex_count(); ++v) words[0].push_back(PathWord::idempotent(v));
    for (int k = 1; k <= d; ++k) {
        auto& cur = words[static_cast<std::size_t>(k)];
        for (const auto& w : words[static_cast<std::size_t>(k) - 1])
            for (int a = 0; a < gb.quiver.arrow_count(); ++a) {
                const auto& ar = gb.quiver.arrow_at(a);
                if (ar.source != w.target) continue;
                PathWord x{w.source, ar.target, w.arrows};
                x.arrows.push_back(a);
                if (!r.has_tip_suffix(x)) cur.push_back(std::move(x));
            }
        std::sort(cur.begin(), cur.end(), MonomialOrder::Descending{&gb.order});
    }
    return words;
}

/// Truncated graded algebra on the normal words: products are computed by
/// concatenation followed by normal form.
inline GradedAlgebraData graded_algebra_data(const GroebnerBasis& gb, int d) {
    if (d > gb.truncation) throw input_error("algebra degree exceeds the Groebner truncation");
    const PrimeField f = gb.field;
    auto words = normal_words(gb, d);
    std::vector<std::map<PathWord, int, MonomialOrder::Descending>> index;
    std::vector<std::vector<BasisElement>> basis(static_cast<std::size_t>(d) + 1);
    for (int k = 0; k <= d; ++k) {
        index.emplace_back(MonomialOrder::Descending{&gb.order});
        for (const auto& w : words[static_cast<std::size_t>(k)]) {
            index.back().emplace(w, static_cast<int>(basis[static_cast<std::size_t>(k)].size()));
            basis[static_cast<std::size_t>(k)].push_back({w.source, w.target, to_string(w, gb.quiver)});
        }
    }
    detail::Reducer r(gb);
    std::vector<std::vector<std::vector<SparseVector>>> products(static_cast<std::size_t>(d) + 1);
    for (int k = 0; k <= d; ++k)
        for (int l = 0; k + l <= d; ++l) {
            const auto& wk = words[static_cast<std::size_t>(k)];
            const auto& wl = words[static_cast<std::size_t>(l)];
            std::vector<SparseVector> block(wk.size() * wl.size());
            for (std::size_t a = 0; a < wk.size(); ++a)
                for (std::size_t b = 0; b < wl.size(); ++b) {
                    auto w = compose(wk[a], wl[b]);
                    if (!w) continue;
                    SparseVector sv;
                    for (const auto& [u, c] : r.word(*w)) sv.emplace_back(index[static_cast<std::size_t>(k + l)].at(u), c);
                    std::sort(sv.begin(), sv.end());
                    block[a * wl.size() + b] = std::move(sv);
                }
            products[static_cast<std::size_t>(k)].push_back(std::move(block));
        }
    GradedAlgebraData alg(f, gb.quiver.vertices(), std::move(basis), std::move(products));
    if (gb.complete()) alg.set_complete_tip_degree(gb.max_tip_degree());
    return alg;
}

/// Convenience: validate, complete, and tabulate in one step.
inline GradedAlgebraData build_algebra(const QuiverPresentation& p, int d,
                                       std::optional<MonomialOrder> order = std::nullopt) {
    auto gb = buchberger_truncated(p, order.value_or(MonomialOrder(p.quiver.arrow_count())), d);
    return graded_algebra_data(gb, d);
}

}  // namespace pkoszul
