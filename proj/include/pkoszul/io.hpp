#pragma once

// Text input grammar, structure-constant JSON, and JSON report emitters.
//
//   # comment
//   field 32003
//   vertices 1 2 3
//   arrow a : 1 -> 2
//   order b a               (optional arrow precedence, largest first)
//   bounds 8 16             (optional N D)
//   relation a*b - 2*c*d
//   module M
//     gen g 1 0             (name, vertex, degree)
//     rel g*a*b + 3*g*c
//   end

#include <algorithm>
#include <cctype>
#include <climits>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "algebra.hpp"
#include "errors.hpp"
#include "ext.hpp"
#include "groebner.hpp"
#include "modules.hpp"
#include "presentation.hpp"
#include "resolution.hpp"
#include "scalars.hpp"

namespace pkoszul {

using ordered_json = nlohmann::ordered_json;

class parse_error : public input_error {
public:
    parse_error(int line, int column, const std::string& what)
        : input_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line),
          column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_, column_;
};

/// One signed term coeff * name_1 * ... * name_k as written.
struct TermSpec {
    std::int64_t coeff = 1;
    std::vector<std::string> names;
    std::vector<int> columns;
};

struct ModuleBlock {
    std::string name;
    int line = 0;
    std::vector<std::string> gen_names;
    std::vector<std::pair<std::string, int>> gens;  // vertex label, degree
    std::vector<std::vector<TermSpec>> rels;
    std::vector<int> rel_lines;
};

struct InputDocument {
    QuiverPresentation presentation;
    bool field_declared = false;
    std::optional<std::vector<std::string>> order;
    std::optional<std::pair<int, int>> bounds;
    std::vector<ModuleBlock> modules;
    std::vector<int> relation_lines;

    MonomialOrder monomial_order() const {
        const auto& q = presentation.quiver;
        if (!order) return MonomialOrder(q.arrow_count());
        std::vector<int> prec;
        for (const auto& a : *order) prec.push_back(*q.arrow(a));
        return MonomialOrder::from_precedence(prec);
    }
};

namespace detail {

struct Token {
    std::string text;
    int column;
};

inline bool name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '\''; }

inline std::vector<Token> tokenize(const std::string& line, int lineno) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (c == '#') break;
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        int col = static_cast<int>(i) + 1;
        if (c == '-' && i + 1 < line.size() && line[i + 1] == '>') {
            out.push_back({"->", col});
            i += 2;
        } else if (c == '*' || c == '+' || c == '-' || c == ':') {
            out.push_back({std::string(1, c), col});
            ++i;
        } else if (name_char(c)) {
            std::size_t j = i;
            while (j < line.size() && name_char(line[j])) ++j;
            out.push_back({line.substr(i, j - i), col});
            i = j;
        } else {
            throw parse_error(lineno, col, std::string("unexpected character '") + c + "'");
        }
    }
    return out;
}

inline bool is_number(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}
inline bool is_name(const std::string& s) { return !s.empty() && name_char(s[0]); }

inline std::int64_t parse_int(const Token& t, int lineno, std::int64_t lo, std::int64_t hi) {
    if (!is_number(t.text) || t.text.size() > 12) throw parse_error(lineno, t.column, "expected a number, got '" + t.text + "'");
    std::int64_t v = std::stoll(t.text);
    if (v < lo || v > hi) throw parse_error(lineno, t.column, "number " + t.text + " out of range");
    return v;
}

/// [sign] term (sign term)*, term = [number '*'] name ('*' name)*
inline std::vector<TermSpec> parse_terms(const std::vector<Token>& toks, std::size_t start, int lineno) {
    std::vector<TermSpec> terms;
    std::size_t i = start;
    if (i >= toks.size()) throw parse_error(lineno, toks.empty() ? 1 : toks.back().column, "expected a term");
    bool first = true;
    while (i < toks.size()) {
        std::int64_t sign = 1;
        if (toks[i].text == "+" || toks[i].text == "-") {
            sign = toks[i].text == "-" ? -1 : 1;
            ++i;
        } else if (!first) {
            throw parse_error(lineno, toks[i].column, "expected '+' or '-' before '" + toks[i].text + "'");
        }
        first = false;
        if (i >= toks.size()) throw parse_error(lineno, toks.back().column + 1, "expected a term after the sign");
        TermSpec t;
        t.coeff = sign;
        if (is_number(toks[i].text)) {
            if (toks[i].text.size() > 12) throw parse_error(lineno, toks[i].column, "coefficient too large");
            t.coeff = sign * std::stoll(toks[i].text);
            t.columns.push_back(toks[i].column);
            ++i;
            if (i >= toks.size() || toks[i].text != "*")
                throw parse_error(lineno, i < toks.size() ? toks[i].column : toks.back().column + 1, "expected '*' after coefficient");
            ++i;
        } else {
            t.columns.push_back(toks[i].column);
        }
        while (true) {
            if (i >= toks.size() || !is_name(toks[i].text) || is_number(toks[i].text))
                throw parse_error(lineno, i < toks.size() ? toks[i].column : toks.back().column + 1, "expected a name");
            t.names.push_back(toks[i].text);
            t.columns.push_back(toks[i].column);
            ++i;
            if (i < toks.size() && toks[i].text == "*") {
                ++i;
                continue;
            }
            break;
        }
        terms.push_back(std::move(t));
    }
    return terms;
}

inline Residue coefficient(std::int64_t c, const PrimeField& f, int lineno, int col) {
    std::int64_t a = c < 0 ? -c : c;
    if (a >= static_cast<std::int64_t>(f.characteristic()))
        throw parse_error(lineno, col, "coefficient " + std::to_string(a) + " is not below the characteristic " +
                                           std::to_string(f.characteristic()));
    return f.reduce(c);
}

}  // namespace detail

inline InputDocument parse_input(const std::string& text, Residue default_char = default_characteristic) {
    InputDocument doc;
    doc.presentation.field = PrimeField(default_char);
    auto& q = doc.presentation.quiver;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool seen_vertices = false, seen_relation = false;
    ModuleBlock* open = nullptr;
    int open_line = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto toks = detail::tokenize(line, lineno);
        if (toks.empty()) continue;
        const auto& kw = toks[0].text;
        auto expect_count = [&](std::size_t n) {
            if (toks.size() != n)
                throw parse_error(lineno, toks.size() > n ? toks[n].column : toks.back().column + 1,
                                  "'" + kw + "' expects " + std::to_string(n - 1) + " argument(s)");
        };
        if (open) {
            if (kw == "end") {
                expect_count(1);
                if (open->gens.empty()) throw parse_error(lineno, 1, "module '" + open->name + "' has no generators");
                open = nullptr;
            } else if (kw == "gen") {
                expect_count(4);
                const auto& name = toks[1].text;
                if (!detail::is_name(name) || detail::is_number(name)) throw parse_error(lineno, toks[1].column, "invalid generator name");
                if (std::count(open->gen_names.begin(), open->gen_names.end(), name))
                    throw parse_error(lineno, toks[1].column, "duplicate generator '" + name + "'");
                if (q.arrow(name)) throw parse_error(lineno, toks[1].column, "generator name '" + name + "' is an arrow");
                if (!q.vertex(toks[2].text)) throw parse_error(lineno, toks[2].column, "unknown vertex '" + toks[2].text + "'");
                int deg = static_cast<int>(detail::parse_int(toks[3], lineno, 0, 1000));
                open->gen_names.push_back(name);
                open->gens.emplace_back(toks[2].text, deg);
            } else if (kw == "rel") {
                auto terms = detail::parse_terms(toks, 1, lineno);
                for (const auto& t : terms) {
                    if (!std::count(open->gen_names.begin(), open->gen_names.end(), t.names[0]))
                        throw parse_error(lineno, t.columns[t.columns.size() - t.names.size()],
                                          "unknown generator '" + t.names[0] + "'");
                    detail::coefficient(t.coeff, doc.presentation.field, lineno, t.columns.front());
                }
                open->rels.push_back(std::move(terms));
                open->rel_lines.push_back(lineno);
            } else {
                throw parse_error(lineno, toks[0].column, "unexpected '" + kw + "' inside module block (missing 'end'?)");
            }
            continue;
        }
        if (kw == "field") {
            expect_count(2);
            if (doc.field_declared) throw parse_error(lineno, 1, "field declared twice");
            if (seen_relation || !doc.modules.empty())
                throw parse_error(lineno, 1, "field must be declared before relations and modules");
            auto p = detail::parse_int(toks[1], lineno, 2, 2147483647);
            if (!is_prime(static_cast<std::uint64_t>(p))) throw parse_error(lineno, toks[1].column, toks[1].text + " is not prime");
            doc.presentation.field = PrimeField(static_cast<Residue>(p));
            doc.field_declared = true;
        } else if (kw == "vertices") {
            if (seen_vertices) throw parse_error(lineno, 1, "vertices declared twice");
            if (toks.size() < 2) throw parse_error(lineno, toks[0].column, "'vertices' needs at least one label");
            for (std::size_t i = 1; i < toks.size(); ++i) {
                if (!detail::is_name(toks[i].text)) throw parse_error(lineno, toks[i].column, "invalid vertex label '" + toks[i].text + "'");
                try {
                    q.add_vertex(toks[i].text);
                } catch (const input_error& e) {
                    throw parse_error(lineno, toks[i].column, e.what());
                }
            }
            seen_vertices = true;
        } else if (kw == "arrow") {
            // arrow <name> : <src> -> <tgt>
            if (toks.size() != 6 || toks[2].text != ":" || toks[4].text != "->")
                throw parse_error(lineno, toks[0].column, "expected 'arrow <name> : <source> -> <target>'");
            const auto& name = toks[1].text;
            if (!detail::is_name(name) || detail::is_number(name))
                throw parse_error(lineno, toks[1].column, "arrow names must not be purely numeric");
            if (!q.vertex(toks[3].text)) throw parse_error(lineno, toks[3].column, "unknown vertex '" + toks[3].text + "'");
            if (!q.vertex(toks[5].text)) throw parse_error(lineno, toks[5].column, "unknown vertex '" + toks[5].text + "'");
            try {
                q.add_arrow(name, toks[3].text, toks[5].text);
            } catch (const input_error& e) {
                throw parse_error(lineno, toks[1].column, e.what());
            }
        } else if (kw == "order") {
            if (doc.order) throw parse_error(lineno, 1, "order declared twice");
            std::vector<std::string> names;
            for (std::size_t i = 1; i < toks.size(); ++i) {
                if (!q.arrow(toks[i].text)) throw parse_error(lineno, toks[i].column, "unknown arrow '" + toks[i].text + "'");
                if (std::count(names.begin(), names.end(), toks[i].text))
                    throw parse_error(lineno, toks[i].column, "arrow '" + toks[i].text + "' listed twice");
                names.push_back(toks[i].text);
            }
            if (static_cast<int>(names.size()) != q.arrow_count())
                throw parse_error(lineno, 1, "order must list every arrow exactly once");
            doc.order = std::move(names);
        } else if (kw == "bounds") {
            expect_count(3);
            int N = static_cast<int>(detail::parse_int(toks[1], lineno, 0, 1000));
            int D = static_cast<int>(detail::parse_int(toks[2], lineno, 2, 1000));
            doc.bounds = {N, D};
        } else if (kw == "relation") {
            auto terms = detail::parse_terms(toks, 1, lineno);
            AlgebraElement rel(doc.presentation.field);
            for (const auto& t : terms) {
                std::size_t off = t.columns.size() - t.names.size();
                PathWord w;
                for (std::size_t k = 0; k < t.names.size(); ++k) {
                    auto a = q.arrow(t.names[k]);
                    if (!a) throw parse_error(lineno, t.columns[off + k], "unknown arrow '" + t.names[k] + "'");
                    const auto& ar = q.arrow_at(*a);
                    if (k == 0) {
                        w.source = ar.source;
                    } else if (ar.source != w.target) {
                        throw parse_error(lineno, t.columns[off + k],
                                          "arrow '" + t.names[k] + "' does not start where '" + t.names[k - 1] + "' ends");
                    }
                    w.target = ar.target;
                    w.arrows.push_back(*a);
                }
                rel.add_term(w, detail::coefficient(t.coeff, doc.presentation.field, lineno, t.columns.front()));
            }
            doc.presentation.relations.push_back(std::move(rel));
            doc.relation_lines.push_back(lineno);
            seen_relation = true;
        } else if (kw == "module") {
            expect_count(2);
            for (const auto& m : doc.modules)
                if (m.name == toks[1].text) throw parse_error(lineno, toks[1].column, "duplicate module '" + toks[1].text + "'");
            doc.modules.push_back({toks[1].text, lineno, {}, {}, {}, {}});
            open = &doc.modules.back();
            open_line = lineno;
        } else {
            throw parse_error(lineno, toks[0].column, "unknown declaration '" + kw + "'");
        }
    }
    if (open) throw parse_error(open_line, 1, "module '" + open->name + "' is missing 'end'");
    if (q.vertex_count() == 0) throw parse_error(lineno == 0 ? 1 : lineno, 1, "no vertices declared");
    auto rep = validate(doc.presentation);
    if (!rep.ok()) {
        const auto& issue = rep.issues.front();
        throw parse_error(doc.relation_lines[issue.relation], 1, std::string("relation is ") + to_string(issue.kind));
    }
    return doc;
}

namespace detail {

inline std::string coeff_prefix(Residue c, const PrimeField& f, bool first) {
    const Residue p = f.characteristic();
    bool negative = c > p / 2;
    Residue a = negative ? p - c : c;
    std::string s = first ? (negative ? "-" : "") : (negative ? " - " : " + ");
    if (a != 1) s += std::to_string(a) + "*";
    return s;
}

}  // namespace detail

/// Canonical text of a document; parse_input(print_document(d)) reproduces d.
inline std::string print_document(const InputDocument& doc) {
    const auto& p = doc.presentation;
    const auto& q = p.quiver;
    std::ostringstream out;
    out << "field " << p.field.characteristic() << "\n";
    out << "vertices";
    for (const auto& v : q.vertices()) out << " " << v;
    out << "\n";
    for (const auto& a : q.arrows()) out << "arrow " << a.label << " : " << q.vertex_label(a.source) << " -> " << q.vertex_label(a.target) << "\n";
    if (doc.order) {
        out << "order";
        for (const auto& a : *doc.order) out << " " << a;
        out << "\n";
    }
    if (doc.bounds) out << "bounds " << doc.bounds->first << " " << doc.bounds->second << "\n";
    for (const auto& r : p.relations) {
        out << "relation ";
        bool first = true;
        for (const auto& [w, c] : r.terms()) {
            out << detail::coeff_prefix(c, p.field, first) << to_string(w, q);
            first = false;
        }
        out << "\n";
    }
    for (const auto& m : doc.modules) {
        out << "module " << m.name << "\n";
        for (std::size_t g = 0; g < m.gens.size(); ++g)
            out << "  gen " << m.gen_names[g] << " " << m.gens[g].first << " " << m.gens[g].second << "\n";
        for (const auto& row : m.rels) {
            out << "  rel ";
            bool first = true;
            for (const auto& t : row) {
                out << detail::coeff_prefix(p.field.reduce(t.coeff), p.field, first);
                for (std::size_t k = 0; k < t.names.size(); ++k) out << (k ? "*" : "") << t.names[k];
                first = false;
            }
            out << "\n";
        }
        out << "end\n";
    }
    return out.str();
}

/// Evaluates a module block over an algebra whose degree-one basis labels name
/// the arrows (true for Groebner-derived and ingested algebras alike).
inline ModulePresentation module_presentation(const ModuleBlock& block, const GradedAlgebraData& alg) {
    const auto& f = alg.field();
    ModulePresentation mp;
    mp.name = block.name;
    std::map<std::string, int> vertex_of;
    for (int v = 0; v < alg.vertex_count(); ++v) vertex_of[alg.vertex_label(v)] = v;
    std::map<std::string, int> arrow_of;
    for (int i = 0; i < alg.dim(1); ++i) arrow_of[alg.element(1, i).label] = i;
    for (const auto& [vl, deg] : block.gens) {
        auto it = vertex_of.find(vl);
        if (it == vertex_of.end()) throw parse_error(block.line, 1, "module '" + block.name + "': unknown vertex '" + vl + "'");
        mp.generators.gens.push_back({it->second, deg, -1});
    }
    mp.relations.target = mp.generators;
    for (std::size_t r = 0; r < block.rels.size(); ++r) {
        const int line = block.rel_lines[r];
        std::optional<int> degree, vertex;
        std::map<std::pair<int, int>, Residue> acc;
        for (const auto& t : block.rels[r]) {
            std::size_t off = t.columns.size() - t.names.size();
            int g = static_cast<int>(std::find(block.gen_names.begin(), block.gen_names.end(), t.names[0]) - block.gen_names.begin());
            const auto& gen = mp.generators[static_cast<std::size_t>(g)];
            int len = static_cast<int>(t.names.size()) - 1;
            if (len > alg.max_degree()) throw parse_error(line, t.columns[off], "word longer than the algebra truncation");
            // word value as a sparse vector in degree len
            SparseVector val{{alg.idempotent(gen.vertex), 1}};
            int at = 0;
            for (std::size_t k = 1; k < t.names.size(); ++k) {
                auto a = arrow_of.find(t.names[k]);
                if (a == arrow_of.end()) throw parse_error(line, t.columns[off + k], "unknown arrow '" + t.names[k] + "'");
                if (k == 1 && alg.element(1, a->second).source != gen.vertex)
                    throw parse_error(line, t.columns[off + k], "arrow '" + t.names[k] + "' does not start at the generator's vertex");
                val = alg.times_right(val, at, 1, a->second);
                ++at;
            }
            int end_vertex = gen.vertex;
            if (len > 0) {
                auto a = arrow_of.at(t.names.back());
                end_vertex = alg.element(1, a).target;
            }
            int deg = gen.degree + len;
            if (degree && *degree != deg) throw parse_error(line, t.columns.front(), "relation row is not homogeneous");
            if (vertex && *vertex != end_vertex) throw parse_error(line, t.columns.front(), "relation row mixes end vertices");
            degree = deg;
            vertex = end_vertex;
            Residue c = detail::coefficient(t.coeff, f, line, t.columns.front());
            for (auto [w, x] : val) {
                auto& slot = acc[{g, w}];
                slot = f.fma(slot, c, x);
            }
        }
        ModuleElement e{*degree, {}};
        for (auto [k, c] : acc)
            if (c) e.terms.push_back({k.first, k.second, c});
        mp.relations.source.gens.push_back({*vertex, *degree, -1});
        mp.relations.images.push_back(std::move(e));
    }
    return mp;
}

// ------------------------------------------------- structure-constant JSON

namespace detail {

/// Basis positions of degree k in pair-major order (source, then target, then basis order).
inline std::vector<int> pair_major(const GradedAlgebraData& alg, int k) {
    std::vector<int> ord;
    for (int s = 0; s < alg.vertex_count(); ++s)
        for (int t = 0; t < alg.vertex_count(); ++t)
            for (int i : alg.between(k, s, t)) ord.push_back(i);
    return ord;
}

}  // namespace detail

/// {"char", "vertices", "dims": {"k": n x n}, "labels": {"k": [...]}, "products": [[ka, ia, kb, ib, [[ic, c], ...]], ...]}
/// Indices are pair-major within each degree; products with idempotents are implied.
inline ordered_json structure_constants_json(const GradedAlgebraData& alg) {
    ordered_json j;
    j["char"] = alg.field().characteristic();
    j["vertices"] = alg.vertex_labels();
    const int n = alg.vertex_count();
    ordered_json dims = ordered_json::object(), labels = ordered_json::object();
    std::vector<std::vector<int>> pos(static_cast<std::size_t>(alg.max_degree()) + 1);
    std::vector<std::vector<int>> ord(pos.size());
    for (int k = 0; k <= alg.max_degree(); ++k) {
        ordered_json m = ordered_json::array();
        for (int s = 0; s < n; ++s) {
            ordered_json row = ordered_json::array();
            for (int t = 0; t < n; ++t) row.push_back(alg.between(k, s, t).size());
            m.push_back(row);
        }
        dims[std::to_string(k)] = m;
        ord[static_cast<std::size_t>(k)] = detail::pair_major(alg, k);
        pos[static_cast<std::size_t>(k)].assign(static_cast<std::size_t>(alg.dim(k)), 0);
        ordered_json lab = ordered_json::array();
        for (std::size_t p = 0; p < ord[static_cast<std::size_t>(k)].size(); ++p) {
            pos[static_cast<std::size_t>(k)][static_cast<std::size_t>(ord[static_cast<std::size_t>(k)][p])] = static_cast<int>(p);
            lab.push_back(alg.element(k, ord[static_cast<std::size_t>(k)][p]).label);
        }
        labels[std::to_string(k)] = lab;
    }
    j["dims"] = dims;
    j["labels"] = labels;
    ordered_json prods = ordered_json::array();
    for (int ka = 1; ka <= alg.max_degree(); ++ka)
        for (int kb = 1; ka + kb <= alg.max_degree(); ++kb)
            for (int a : ord[static_cast<std::size_t>(ka)])
                for (int b : ord[static_cast<std::size_t>(kb)]) {
                    const auto& sv = alg.multiply(ka, a, kb, b);
                    if (sv.empty()) continue;
                    std::vector<std::pair<int, Residue>> out;
                    for (auto [c, x] : sv) out.emplace_back(pos[static_cast<std::size_t>(ka + kb)][static_cast<std::size_t>(c)], x);
                    std::sort(out.begin(), out.end());
                    ordered_json terms = ordered_json::array();
                    for (auto [c, x] : out) terms.push_back({c, x});
                    prods.push_back({ka, pos[static_cast<std::size_t>(ka)][static_cast<std::size_t>(a)], kb,
                                     pos[static_cast<std::size_t>(kb)][static_cast<std::size_t>(b)], terms});
                }
    j["products"] = prods;
    return j;
}

/// Builds and validates an algebra from structure constants: shape, units,
/// vertex compatibility and associativity.
inline GradedAlgebraData ingest_structure_constants(const nlohmann::json& j) {
    auto fail = [](const std::string& m) -> void { throw input_error("structure constants: " + m); };
    if (!j.is_object()) fail("expected a JSON object");
    for (const char* key : {"char", "vertices", "dims", "products"})
        if (!j.contains(key)) fail(std::string("missing key '") + key + "'");
    if (!j["char"].is_number_integer() || j["char"].get<std::int64_t>() < 2 || j["char"].get<std::int64_t>() > INT32_MAX)
        fail("'char' must be a prime");
    PrimeField f(static_cast<Residue>(j["char"].get<std::int64_t>()));
    std::vector<std::string> vertices;
    if (!j["vertices"].is_array() || j["vertices"].empty()) fail("'vertices' must be a nonempty array");
    for (const auto& v : j["vertices"]) vertices.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    const int n = static_cast<int>(vertices.size());
    const auto& dims = j["dims"];
    if (!dims.is_object()) fail("'dims' must be an object keyed by degree");
    int K = -1;
    while (dims.contains(std::to_string(K + 1))) ++K;
    if (K < 0) fail("'dims' needs degree 0");
    if (static_cast<int>(dims.size()) != K + 1) fail("'dims' degrees must be 0..K without gaps");

    std::vector<std::vector<BasisElement>> basis(static_cast<std::size_t>(K) + 1);
    for (int k = 0; k <= K; ++k) {
        const auto& m = dims[std::to_string(k)];
        if (!m.is_array() || static_cast<int>(m.size()) != n) fail("dims[" + std::to_string(k) + "] must be " + std::to_string(n) + " x " + std::to_string(n));
        std::vector<std::string> labels;
        if (j.contains("labels") && j["labels"].contains(std::to_string(k)))
            for (const auto& l : j["labels"][std::to_string(k)]) labels.push_back(l.get<std::string>());
        for (int s = 0; s < n; ++s) {
            if (!m[static_cast<std::size_t>(s)].is_array() || static_cast<int>(m[static_cast<std::size_t>(s)].size()) != n)
                fail("dims[" + std::to_string(k) + "] must be " + std::to_string(n) + " x " + std::to_string(n));
            for (int t = 0; t < n; ++t) {
                const auto& c = m[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)];
                if (!c.is_number_integer() || c.get<std::int64_t>() < 0 || c.get<std::int64_t>() > 100000) fail("dimensions must be nonnegative integers");
                if (k == 0 && c.get<int>() != (s == t ? 1 : 0)) fail("degree 0 must be one idempotent per vertex");
                for (int r = 0; r < c.get<int>(); ++r) {
                    std::size_t idx = basis[static_cast<std::size_t>(k)].size();
                    std::string label = k == 0 ? "e_" + vertices[static_cast<std::size_t>(s)]
                                               : "b" + std::to_string(k) + "_" + std::to_string(idx);
                    if (idx < labels.size()) label = labels[idx];
                    basis[static_cast<std::size_t>(k)].push_back({s, t, label});
                }
            }
        }
        if (!labels.empty() && labels.size() != basis[static_cast<std::size_t>(k)].size())
            fail("labels[" + std::to_string(k) + "] has the wrong length");
    }
    auto dim = [&](int k) { return basis[static_cast<std::size_t>(k)].size(); };

    std::vector<std::vector<std::vector<SparseVector>>> products(static_cast<std::size_t>(K) + 1);
    std::vector<std::vector<std::vector<bool>>> given(static_cast<std::size_t>(K) + 1);
    for (int a = 0; a <= K; ++a)
        for (int b = 0; a + b <= K; ++b) {
            products[static_cast<std::size_t>(a)].emplace_back(dim(a) * dim(b));
            given[static_cast<std::size_t>(a)].emplace_back(dim(a) * dim(b), false);
        }
    // implied unit products
    for (int k = 0; k <= K; ++k)
        for (std::size_t x = 0; x < dim(k); ++x) {
            const auto& e = basis[static_cast<std::size_t>(k)][x];
            products[0][static_cast<std::size_t>(k)][static_cast<std::size_t>(e.source) * dim(k) + x] = {{static_cast<int>(x), 1}};
            products[static_cast<std::size_t>(k)][0][x * dim(0) + static_cast<std::size_t>(e.target)] = {{static_cast<int>(x), 1}};
        }

    if (!j["products"].is_array()) fail("'products' must be an array");
    std::size_t entry = 0;
    for (const auto& p : j["products"]) {
        ++entry;
        const std::string where = "product entry " + std::to_string(entry);
        if (!p.is_array() || p.size() != 5) fail(where + " must be [deg_a, idx_a, deg_b, idx_b, [[idx_c, coeff], ...]]");
        for (int i = 0; i < 4; ++i)
            if (!p[static_cast<std::size_t>(i)].is_number_integer()) fail(where + ": degrees and indices must be integers");
        int ka = p[0].get<int>(), ia = p[1].get<int>(), kb = p[2].get<int>(), ib = p[3].get<int>();
        if (ka < 1 || kb < 1) fail(where + ": products with idempotents are implied and must not be listed");
        if (ka + kb > K) fail(where + ": degree " + std::to_string(ka + kb) + " is beyond the table");
        if (ia < 0 || static_cast<std::size_t>(ia) >= dim(ka) || ib < 0 || static_cast<std::size_t>(ib) >= dim(kb))
            fail(where + ": index out of range");
        const auto& ea = basis[static_cast<std::size_t>(ka)][static_cast<std::size_t>(ia)];
        const auto& eb = basis[static_cast<std::size_t>(kb)][static_cast<std::size_t>(ib)];
        std::size_t slot = static_cast<std::size_t>(ia) * dim(kb) + static_cast<std::size_t>(ib);
        if (given[static_cast<std::size_t>(ka)][static_cast<std::size_t>(kb)][slot]) fail(where + ": duplicate product");
        given[static_cast<std::size_t>(ka)][static_cast<std::size_t>(kb)][slot] = true;
        std::vector<Residue> acc(dim(ka + kb), 0);
        if (!p[4].is_array()) fail(where + ": result must be a list of [index, coefficient]");
        for (const auto& t : p[4]) {
            if (!t.is_array() || t.size() != 2 || !t[0].is_number_integer() || !t[1].is_number_integer())
                fail(where + ": result terms must be [index, coefficient]");
            int c = t[0].get<int>();
            std::int64_t x = t[1].get<std::int64_t>();
            if (c < 0 || static_cast<std::size_t>(c) >= dim(ka + kb)) fail(where + ": result index out of range");
            if (x <= -static_cast<std::int64_t>(f.characteristic()) || x >= static_cast<std::int64_t>(f.characteristic()))
                fail(where + ": coefficient not below the characteristic");
            Residue r = f.reduce(x);
            if (!r) continue;
            if (ea.target != eb.source) fail(where + ": nonzero product of elements that do not compose");
            const auto& ec = basis[static_cast<std::size_t>(ka + kb)][static_cast<std::size_t>(c)];
            if (ec.source != ea.source || ec.target != eb.target) fail(where + ": result term has the wrong endpoints");
            acc[static_cast<std::size_t>(c)] = f.add(acc[static_cast<std::size_t>(c)], r);
        }
        products[static_cast<std::size_t>(ka)][static_cast<std::size_t>(kb)][slot] = GradedAlgebraData::sparse(acc);
    }
    GradedAlgebraData alg(f, vertices, std::move(basis), std::move(products));
    if (auto v = alg.associativity_violation()) {
        const auto& t = *v;
        auto name = [&](std::pair<int, int> e) { return alg.element(e.first, e.second).label; };
        fail("not associative on (" + name(t[0]) + ", " + name(t[1]) + ", " + name(t[2]) + ")");
    }
    return alg;
}

inline GradedAlgebraData ingest_structure_constants(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw input_error(std::string("structure constants: ") + e.what());
    }
    return ingest_structure_constants(j);
}

// ----------------------------------------------------------- report JSON

inline ordered_json to_json(const BettiTable& b) {
    ordered_json j;
    j["bounds"] = {{"N", b.max_hdeg}, {"D", b.max_ideg}};
    ordered_json rows = ordered_json::array();
    for (const auto& r : b.rows) {
        ordered_json gens = ordered_json::array();
        for (const auto& [k, c] : r.counts)
            gens.push_back({{"vertex", b.vertex_labels[static_cast<std::size_t>(k.second)]}, {"degree", k.first}, {"count", c}});
        rows.push_back({{"n", r.n}, {"certified", r.certified}, {"generators", gens}});
    }
    j["rows"] = rows;
    auto t = b.termination_degree();
    j["termination_degree"] = t ? ordered_json(*t) : ordered_json(nullptr);
    return j;
}

inline ordered_json to_json(const Classification& c) {
    ordered_json j;
    j["verdict"] = to_string(c.verdict);
    j["p"] = c.p ? ordered_json(*c.p) : ordered_json(nullptr);
    j["d"] = c.d ? ordered_json(*c.d) : ordered_json(nullptr);
    j["certified_to"] = c.certified_to;
    ordered_json pairs = ordered_json::array();
    for (auto [p, d] : c.fitting_pairs) pairs.push_back({p, d});
    j["fitting_pairs"] = pairs;
    j["termination_degree"] = c.termination_degree ? ordered_json(*c.termination_degree) : ordered_json(nullptr);
    if (!c.impure_rows.empty()) j["impure_rows"] = c.impure_rows;
    return j;
}

inline ordered_json to_json(const ExtTable& e, const std::vector<std::string>& vertex_labels) {
    ordered_json rows = ordered_json::array();
    for (int i = 0; i <= e.max_hdeg; ++i) {
        ordered_json dims = ordered_json::array();
        for (int s : e.shifts(i)) {
            ordered_json pairs = ordered_json::array();
            for (const auto& [k, c] : e.by_pair) {
                auto [ii, j, u, v] = k;
                if (ii != i || j != s) continue;
                pairs.push_back({{"from", u < 0 ? ordered_json(nullptr) : ordered_json(vertex_labels[static_cast<std::size_t>(u)])},
                                 {"to", vertex_labels[static_cast<std::size_t>(v)]},
                                 {"dim", c}});
            }
            dims.push_back({{"shift", s}, {"dim", e.dim(i, s)}, {"pairs", pairs}});
        }
        rows.push_back({{"i", i}, {"certified", static_cast<bool>(e.certified[static_cast<std::size_t>(i)])}, {"dims", dims}});
    }
    return {{"bounds", {{"N", e.max_hdeg}, {"D", e.max_ideg}}}, {"rows", rows}};
}

inline ordered_json to_json(const ArityReport& a) {
    ordered_json j;
    j["q_max"] = a.q_max;
    j["checked_to"] = a.checked_to;
    j["support"] = a.support;
    j["closed_form"] = a.closed_form ? ordered_json(*a.closed_form) : ordered_json(nullptr);
    j["consistent"] = a.consistent ? ordered_json(*a.consistent) : ordered_json(nullptr);
    return j;
}

inline ordered_json to_json(const GenerationReport& g, const std::vector<std::pair<int, int>>& pairs) {
    ordered_json j;
    j["checked_to"] = g.checked_to;
    j["truncated"] = g.truncated;
    ordered_json gens = ordered_json::array();
    for (const auto& [i, m] : g.new_generators) {
        ordered_json shifts = ordered_json::array();
        for (auto [s, c] : m) shifts.push_back({{"shift", s}, {"count", c}});
        gens.push_back({{"ext_degree", i}, {"shifts", shifts}});
    }
    j["new_generators"] = gens;
    ordered_json fp = ordered_json::array();
    for (auto [p, d] : pairs) fp.push_back({p, d});
    j["fitting_pairs"] = fp;
    return j;
}

inline ordered_json to_json(const ModuleClassification& m) {
    ordered_json j;
    j["piecewise_koszul"] = m.piecewise_koszul;
    j["s"] = m.s ? ordered_json(*m.s) : ordered_json(nullptr);
    j["certified_to"] = m.certified_to;
    j["failing_row"] = m.failing_row ? ordered_json(*m.failing_row) : ordered_json(nullptr);
    j["reason"] = m.reason;
    return j;
}

inline ordered_json to_json(const Reduced2lReport& r) {
    ordered_json j;
    j["l"] = r.l;
    j["checked_to"] = r.checked_to;
    ordered_json c2 = ordered_json::array();
    for (const auto& o : r.cond2_offending) c2.push_back({{o[0], o[1]}, {o[2], o[3]}});
    ordered_json c3 = ordered_json::array();
    for (auto [i, s] : r.cond3_undetermined) c3.push_back({i, s});
    j["conditions"] = ordered_json::array({
        {{"condition", 1}, {"level", "exact"}, {"holds", r.cond1}},
        {{"condition", 2}, {"level", "exact"}, {"holds", r.cond2}, {"offending", c2}},
        {{"condition", 3}, {"level", "bigrading feasibility"}, {"holds", r.cond3_forced}, {"undetermined_targets", c3}},
    });
    ordered_json missing = ordered_json::array();
    for (const auto& [i, m] : r.m2_missing)
        for (auto [s, c] : m) missing.push_back({{"ext_degree", i}, {"shift", s}, {"dim", c}});
    j["m2_missing"] = missing;
    ordered_json unreach = ordered_json::array();
    for (auto [i, s] : r.ml_unreachable) unreach.push_back({i, s});
    j["ml_feasible"] = r.ml_feasible;
    j["ml_unreachable"] = unreach;
    return j;
}

inline std::string schema_text() {
    return R"(Input grammar (one declaration per line, '#' starts a comment):
  field <prime>
  vertices <v1> <v2> ...
  arrow <name> : <source> -> <target>
  order <arrow> <arrow> ...          arrow precedence, largest first (optional)
  bounds <N> <D>                     default bounds (optional; flags override)
  relation <term> (+|- <term>)*      term = [coeff*]name(*name)*
  module <name>
    gen <name> <vertex> <degree>
    rel <term> (+|- <term>)*         first name of each term is a generator
  end
A document starting with '{' is read as structure constants:
  {"char": p, "vertices": [...], "dims": {"k": n x n counts}, "labels": {"k": [...]},
   "products": [[deg_a, idx_a, deg_b, idx_b, [[idx_c, coeff], ...]], ...]}
  Indices are pair-major within a degree; products with idempotents are implied.

Betti table:      {"bounds": {"N", "D"}, "rows": [{"n", "certified", "generators": [{"vertex", "degree", "count"}]}],
                   "termination_degree": n|null}
Classification:   {"verdict": "Koszul"|"dKoszul"|"PK"|"NotPure"|"NoFit", "p", "d", "certified_to",
                   "fitting_pairs": [[p, d], ...], "termination_degree": n|null, "impure_rows": [n, ...] (if any)}
Ext table:        {"bounds", "rows": [{"i", "certified", "dims": [{"shift", "dim", "pairs": [{"from", "to", "dim"}]}]}]}
Yoneda:           {"i", "j", "products": [{"left", "right", "shift", "result": [[gen, coeff], ...]}], "span_rank", "dim",
                   "surjectivity": {"delta": [p, d]|null, "hypothesis": bool|null, "surjective": bool|null}}
Generation:       {"checked_to", "truncated", "new_generators": [{"ext_degree", "shifts": [{"shift", "count"}]}],
                   "fitting_pairs": [[p, d], ...]}
Module:           {"module", "delta": [p, d], "betti", "classification": {"piecewise_koszul", "s", "certified_to",
                   "failing_row", "reason"}, "generated_in_degree_zero"}
Arities:          {"q_max", "checked_to", "support": [...], "closed_form": [...]|null, "consistent": bool|null}
Reduced (2,l):    {"l", "checked_to", "conditions": [{"condition", "level", "holds", ...}], "m2_missing", "ml_feasible",
                   "ml_unreachable"}

Exit codes: 0 success, 1 refusal (outside the certified range or hypothesis unmet), 2 input error.
)";
}

}  // namespace pkoszul
