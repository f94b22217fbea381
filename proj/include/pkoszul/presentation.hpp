#pragma once

// Quivers, paths and graded presentations A = F(quiver)/(relations).
//
// Paths compose left to right: the word "a b" means a first, then b, so the
// target of a must equal the source of b.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "scalars.hpp"

namespace pkoszul {

struct Arrow {
    std::string label;
    int source = 0;
    int target = 0;

    friend bool operator==(const Arrow&, const Arrow&) = default;
};

class Quiver {
public:
    Quiver() = default;

    int add_vertex(const std::string& label) {
        if (vertex_index_.count(label)) throw input_error("duplicate vertex '" + label + "'");
        if (arrow_index_.count(label)) throw input_error("label '" + label + "' already names an arrow");
        vertex_index_[label] = static_cast<int>(vertices_.size());
        vertices_.push_back(label);
        return static_cast<int>(vertices_.size()) - 1;
    }

    int add_arrow(const std::string& label, const std::string& source, const std::string& target) {
        if (arrow_index_.count(label)) throw input_error("duplicate arrow '" + label + "'");
        if (vertex_index_.count(label)) throw input_error("label '" + label + "' already names a vertex");
        auto s = vertex(source), t = vertex(target);
        if (!s) throw input_error("unknown vertex '" + source + "'");
        if (!t) throw input_error("unknown vertex '" + target + "'");
        arrow_index_[label] = static_cast<int>(arrows_.size());
        arrows_.push_back({label, *s, *t});
        return static_cast<int>(arrows_.size()) - 1;
    }

    std::optional<int> vertex(const std::string& label) const {
        auto it = vertex_index_.find(label);
        if (it == vertex_index_.end()) return std::nullopt;
        return it->second;
    }
    std::optional<int> arrow(const std::string& label) const {
        auto it = arrow_index_.find(label);
        if (it == arrow_index_.end()) return std::nullopt;
        return it->second;
    }

    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    int arrow_count() const { return static_cast<int>(arrows_.size()); }
    const std::string& vertex_label(int v) const { return vertices_.at(static_cast<std::size_t>(v)); }
    const Arrow& arrow_at(int a) const { return arrows_.at(static_cast<std::size_t>(a)); }
    const std::vector<std::string>& vertices() const { return vertices_; }
    const std::vector<Arrow>& arrows() const { return arrows_; }

    friend bool operator==(const Quiver& a, const Quiver& b) {
        return a.vertices_ == b.vertices_ && a.arrows_ == b.arrows_;
    }

private:
    std::vector<std::string> vertices_;
    std::vector<Arrow> arrows_;
    std::unordered_map<std::string, int> vertex_index_;
    std::unordered_map<std::string, int> arrow_index_;
};

/// A path in the quiver. Length-zero paths are the vertex idempotents.
struct PathWord {
    int source = 0;
    int target = 0;
    std::vector<int> arrows;

    static PathWord idempotent(int v) { return {v, v, {}}; }
    static PathWord of_arrow(const Quiver& q, int a) {
        const auto& ar = q.arrow_at(a);
        return {ar.source, ar.target, {a}};
    }

    int length() const { return static_cast<int>(arrows.size()); }
    bool is_idempotent() const { return arrows.empty(); }

    /// True iff consecutive arrows compose and the endpoints agree with the arrows.
    bool well_formed(const Quiver& q) const {
        if (source < 0 || source >= q.vertex_count() || target < 0 || target >= q.vertex_count()) return false;
        if (arrows.empty()) return source == target;
        int at = source;
        for (int a : arrows) {
            if (a < 0 || a >= q.arrow_count()) return false;
            if (q.arrow_at(a).source != at) return false;
            at = q.arrow_at(a).target;
        }
        return at == target;
    }

    friend auto operator<=>(const PathWord&, const PathWord&) = default;
};

inline std::optional<PathWord> compose(const PathWord& p, const PathWord& q) {
    if (p.target != q.source) return std::nullopt;
    PathWord r{p.source, q.target, p.arrows};
    r.arrows.insert(r.arrows.end(), q.arrows.begin(), q.arrows.end());
    return r;
}

inline std::string to_string(const PathWord& w, const Quiver& q) {
    if (w.arrows.empty()) return "e_" + q.vertex_label(w.source);
    std::string s;
    for (std::size_t i = 0; i < w.arrows.size(); ++i) {
        if (i) s += '*';
        s += q.arrow_at(w.arrows[i]).label;
    }
    return s;
}

/// Linear combination of paths with nonzero coefficients.
class AlgebraElement {
public:
    explicit AlgebraElement(PrimeField f = PrimeField()) : field_(f) {}

    const PrimeField& field() const { return field_; }

    void add_term(const PathWord& w, Residue c) {
        c %= field_.characteristic();
        if (!c) return;
        auto [it, inserted] = terms_.try_emplace(w, c);
        if (!inserted) {
            it->second = field_.add(it->second, c);
            if (!it->second) terms_.erase(it);
        }
    }
    void add_term(const PathWord& w, FieldElement c) {
        if (c.characteristic() != field_.characteristic()) throw input_error("coefficient from a different field");
        add_term(w, c.value());
    }

    const std::map<PathWord, Residue>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool is_homogeneous() const {
        if (terms_.empty()) return true;
        int len = terms_.begin()->first.length();
        return std::all_of(terms_.begin(), terms_.end(), [&](const auto& t) { return t.first.length() == len; });
    }
    bool is_parallel() const {
        if (terms_.empty()) return true;
        const auto& w = terms_.begin()->first;
        return std::all_of(terms_.begin(), terms_.end(), [&](const auto& t) {
            return t.first.source == w.source && t.first.target == w.target;
        });
    }
    /// Length of the first (all, when homogeneous) path; -1 for zero.
    int degree() const { return terms_.empty() ? -1 : terms_.begin()->first.length(); }
    int min_degree() const {
        int d = -1;
        for (const auto& [w, c] : terms_) d = d < 0 ? w.length() : std::min(d, w.length());
        return d;
    }

    friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
        AlgebraElement r(a.field_);
        for (const auto& [u, x] : a.terms_)
            for (const auto& [v, y] : b.terms_)
                if (auto w = compose(u, v)) r.add_term(*w, a.field_.mul(x, y));
        return r;
    }

    friend bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
        return a.field_ == b.field_ && a.terms_ == b.terms_;
    }

private:
    PrimeField field_;
    std::map<PathWord, Residue> terms_;
};

struct QuiverPresentation {
    Quiver quiver;
    std::vector<AlgebraElement> relations;
    PrimeField field;

    int max_relation_degree() const {
        int d = 0;
        for (const auto& r : relations) d = std::max(d, r.degree());
        return d;
    }
};

enum class Violation { inhomogeneous, not_parallel, degree_below_two, zero_relation, malformed_path, wrong_field };

inline const char* to_string(Violation v) {
    switch (v) {
        case Violation::inhomogeneous: return "inhomogeneous";
        case Violation::not_parallel: return "not parallel";
        case Violation::degree_below_two: return "degree below 2";
        case Violation::zero_relation: return "zero relation";
        case Violation::malformed_path: return "malformed path";
        case Violation::wrong_field: return "coefficients not in the declared field";
    }
    return "?";
}

struct ValidationIssue {
    std::size_t relation;
    Violation kind;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;

    bool ok() const { return issues.empty(); }
    bool has(std::size_t relation, Violation kind) const {
        return std::any_of(issues.begin(), issues.end(),
                           [&](const auto& i) { return i.relation == relation && i.kind == kind; });
    }
};

inline ValidationReport validate(const QuiverPresentation& p) {
    ValidationReport rep;
    for (std::size_t i = 0; i < p.relations.size(); ++i) {
        const auto& r = p.relations[i];
        auto flag = [&](Violation v) { rep.issues.push_back({i, v}); };
        if (r.field().characteristic() != p.field.characteristic()) flag(Violation::wrong_field);
        if (r.is_zero()) {
            flag(Violation::zero_relation);
            continue;
        }
        bool malformed = false;
        for (const auto& [w, c] : r.terms())
            if (!w.well_formed(p.quiver)) malformed = true;
        if (malformed) flag(Violation::malformed_path);
        if (!r.is_homogeneous()) flag(Violation::inhomogeneous);
        if (!r.is_parallel()) flag(Violation::not_parallel);
        if (r.min_degree() < 2) flag(Violation::degree_below_two);
    }
    return rep;
}

}  // namespace pkoszul
