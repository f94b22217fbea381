#pragma once

// Subcommand dispatch shared by the command-line tool and the tests.

#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "delta.hpp"
#include "errors.hpp"
#include "ext.hpp"
#include "groebner.hpp"
#include "io.hpp"
#include "resolution.hpp"

namespace pkoszul {

enum class OutputFormat { table, json };

struct RunConfig {
    std::string command;
    std::optional<int> max_hdeg;
    std::optional<int> max_ideg;
    std::optional<Residue> characteristic;
    OutputFormat format = OutputFormat::table;
    std::optional<DeltaFunction> pd;
    int arg1 = 0;  // yoneda i, ek k, arities q_max, reduced2l l
    int arg2 = 0;  // yoneda j
    std::optional<int> n_max;
    std::string module;
};

inline std::optional<DeltaFunction> parse_pd(const std::string& s) {
    auto comma = s.find(',');
    if (comma == std::string::npos) throw input_error("--pd expects p,d");
    try {
        std::size_t a = 0, b = 0;
        int p = std::stoi(s.substr(0, comma), &a);
        int d = std::stoi(s.substr(comma + 1), &b);
        if (a != comma || b != s.size() - comma - 1) throw input_error("--pd expects p,d");
        return DeltaFunction(p, d);
    } catch (const std::logic_error&) {
        throw input_error("--pd expects two integers p,d");
    }
}

namespace detail {

struct Session {
    RunConfig cfg;
    std::optional<InputDocument> doc;
    std::shared_ptr<const GradedAlgebraData> table;  // ingested structure constants
    int N = 8;
    int D = 16;
    bool D_fixed = false;
    AlgebraPtr alg;
    std::unique_ptr<Resolution> trivial;

    void load(const std::string& text) {
        auto first = text.find_first_not_of(" \t\r\n");
        if (first != std::string::npos && text[first] == '{') {
            auto a = ingest_structure_constants(text);
            if (cfg.characteristic && *cfg.characteristic != a.field().characteristic())
                throw input_error("--char " + std::to_string(*cfg.characteristic) + " disagrees with the table's char " +
                                  std::to_string(a.field().characteristic()));
            table = std::make_shared<const GradedAlgebraData>(std::move(a));
        } else {
            Residue ch = cfg.characteristic.value_or(default_characteristic);
            if (!is_prime(ch)) throw input_error("--char must be prime");
            doc = parse_input(text, ch);
            if (doc->field_declared && cfg.characteristic && *cfg.characteristic != doc->presentation.field.characteristic())
                throw input_error("--char " + std::to_string(*cfg.characteristic) + " disagrees with the declared field " +
                                  std::to_string(doc->presentation.field.characteristic()));
        }
        if (cfg.max_hdeg) N = *cfg.max_hdeg;
        else if (doc && doc->bounds) N = doc->bounds->first;
        if (N < 0) throw input_error("--max-hdeg must be nonnegative");
        if (cfg.max_ideg) {
            D = *cfg.max_ideg;
            D_fixed = true;
        } else if (doc && doc->bounds) {
            D = doc->bounds->second;
            D_fixed = true;
        } else if (cfg.pd) {
            D = (*cfg.pd)(N) + 1;
            D_fixed = true;
        } else {
            D = 2 * N;
        }
        D = std::max(D, 2);
        if (cfg.max_ideg && *cfg.max_ideg < 2) throw input_error("--max-ideg must be at least 2");
        build();
    }

    void build() {
        if (table) {
            alg = std::make_shared<const GradedAlgebraData>(table->truncated(std::min(D, table->max_degree())));
            D = alg->max_degree();
        } else {
            std::optional<MonomialOrder> order;
            if (doc->order) order = doc->monomial_order();
            alg = std::make_shared<const GradedAlgebraData>(build_algebra(doc->presentation, D, order));
        }
        trivial = std::make_unique<Resolution>(resolve_trivial(alg, N, D));
    }

    /// Classification, widening D once to delta(N) + 1 when the default bound is too small for the fitted pair.
    Classification classification() {
        auto c = classify(betti_table(*trivial));
        if (!D_fixed && c.p && !table) {
            int want = DeltaFunction(*c.p, *c.d)(N) + 1;
            if (want > D) {
                D = want;
                D_fixed = true;
                build();
                c = classify(betti_table(*trivial));
            }
        }
        return c;
    }

    std::optional<DeltaFunction> delta() {
        if (cfg.pd) return cfg.pd;
        auto c = classification();
        if (c.p) return DeltaFunction(*c.p, *c.d);
        return std::nullopt;
    }
};

inline std::string pairs_text(const std::vector<std::pair<int, int>>& pairs) {
    std::string s;
    for (auto [p, d] : pairs) s += (s.empty() ? "" : " ") + std::string("(") + std::to_string(p) + "," + std::to_string(d) + ")";
    return s.empty() ? "none" : s;
}

inline void print_betti(std::ostream& out, const BettiTable& b) {
    out << "n  cert  generators (degree x count @ vertex)\n";
    for (const auto& r : b.rows) {
        out << std::left << std::setw(3) << r.n << std::setw(6) << (r.certified ? "yes" : "no");
        if (r.counts.empty()) out << "-";
        bool first = true;
        for (const auto& [k, c] : r.counts) {
            out << (first ? "" : "  ") << k.first << "x" << c << "@" << b.vertex_labels[static_cast<std::size_t>(k.second)];
            first = false;
        }
        out << "\n";
    }
    if (auto t = b.termination_degree()) out << "P_" << *t << " = 0\n";
}

inline void print_classification(std::ostream& out, const Classification& c) {
    out << "verdict: " << to_string(c.verdict);
    if (c.p) out << " (p=" << *c.p << ", d=" << *c.d << ")";
    out << "\ncertified to: " << c.certified_to << "\nfitting pairs: " << pairs_text(c.fitting_pairs) << "\n";
    if (c.termination_degree) out << "termination degree: " << *c.termination_degree << "\n";
    if (!c.impure_rows.empty()) {
        out << "impure rows:";
        for (int n : c.impure_rows) out << " " << n;
        out << "\n";
    }
}

inline ModulePresentation select_module(Session& s, std::string& name) {
    const auto& A = *s.alg;
    if (name.empty()) name = s.doc && !s.doc->modules.empty() ? s.doc->modules.front().name : "trivial";
    if (s.doc)
        for (const auto& m : s.doc->modules)
            if (m.name == name) return module_presentation(m, A);
    if (name == "trivial") return trivial_presentation(A);
    if (name == "regular" || name == "radical") {
        FreeModule regular;
        for (int v = 0; v < A.vertex_count(); ++v) regular.gens.push_back({v, 0, -1});
        auto reg = free_presentation(regular, "A");
        return name == "regular" ? reg : radical_submodule(A, reg, s.D);
    }
    if (name.rfind("syzygy:", 0) == 0) {
        int n = 0;
        try {
            n = std::stoi(name.substr(7));
        } catch (const std::logic_error&) {
            throw input_error("module 'syzygy:<n>' needs an integer n");
        }
        if (n < 0) throw input_error("syzygy index must be nonnegative");
        return syzygy(*s.trivial, n);
    }
    throw input_error("unknown module '" + name + "' (document modules, trivial, regular, radical, or syzygy:<n>)");
}

}  // namespace detail

/// Runs one subcommand on input text. Returns the process exit code:
/// 0 on success, 1 on refusal, 2 on input error.
inline int run(const RunConfig& cfg, const std::string& input, std::ostream& out, std::ostream& err) {
    detail::Session s;
    s.cfg = cfg;
    const bool json = cfg.format == OutputFormat::json;
    auto emit = [&](const ordered_json& j) { out << j.dump(2) << "\n"; };
    try {
        s.load(input);
        const auto& cmd = cfg.command;
        if (cmd == "resolve") {
            auto b = betti_table(*s.trivial);
            if (json) emit(to_json(b));
            else detail::print_betti(out, b);
        } else if (cmd == "classify") {
            auto c = s.classification();
            if (json) emit(to_json(c));
            else detail::print_classification(out, c);
        } else if (cmd == "ext") {
            auto e = ext_table(betti_table(*s.trivial));
            if (json) {
                emit(to_json(e, s.alg->vertex_labels()));
            } else {
                out << "i  cert  shift:dim\n";
                for (int i = 0; i <= e.max_hdeg; ++i) {
                    out << std::left << std::setw(3) << i << std::setw(6) << (e.certified[static_cast<std::size_t>(i)] ? "yes" : "no");
                    auto sh = e.shifts(i);
                    if (sh.empty()) out << "-";
                    for (std::size_t k = 0; k < sh.size(); ++k) out << (k ? "  " : "") << sh[k] << ":" << e.dim(i, sh[k]);
                    out << "\n";
                }
            }
        } else if (cmd == "yoneda") {
            const int i = cfg.arg1, j = cfg.arg2;
            if (i < 0 || j < 0) throw input_error("ext-degrees must be nonnegative");
            auto f = s.delta();
            YonedaEngine eng(*s.trivial);
            eng.require_certified(i + j);
            const auto& r = *s.trivial;
            ordered_json prods = ordered_json::array();
            SpanBuilder span(r.P(i + j).rank(), s.alg->field());
            std::ostringstream tab;
            for (std::size_t g = 0; g < r.P(j).rank(); ++g) {
                auto lefts = eng.left_products(j, static_cast<int>(g), i);
                for (std::size_t h = 0; h < lefts.size(); ++h) {
                    const auto& c = lefts[h];
                    if (c.is_zero()) continue;
                    ordered_json res = ordered_json::array();
                    for (std::size_t t = 0; t < c.coeffs.size(); ++t)
                        if (c.coeffs[t]) res.push_back({t, c.coeffs[t]});
                    prods.push_back({{"left", h}, {"right", g}, {"shift", c.shift}, {"result", res}});
                    tab << "E" << i << "_" << h << " * E" << j << "_" << g << " = " << res.dump() << "\n";
                    span.add(c.coeffs);
                }
            }
            ordered_json surj = {{"delta", nullptr}, {"hypothesis", nullptr}, {"surjective", nullptr}};
            if (f) {
                surj["delta"] = {f->p, f->d};
                surj["hypothesis"] = (*f)(i + j) == (*f)(i) + (*f)(j);
                surj["surjective"] = yoneda_surjectivity_check(eng, *f, i, j);
            }
            if (json) {
                emit({{"i", i}, {"j", j}, {"products", prods}, {"span_rank", span.rank()}, {"dim", r.P(i + j).rank()},
                      {"surjectivity", surj}});
            } else {
                out << tab.str() << "span " << span.rank() << " of dim Ext^" << i + j << " = " << r.P(i + j).rank() << "\n";
                if (f) out << "surjective: " << (surj["surjective"].get<bool>() ? "yes" : "no") << "\n";
            }
        } else if (cmd == "generation") {
            s.classification();
            YonedaEngine eng(*s.trivial);
            auto g = ext_generation_degrees(eng, s.N);
            auto pairs = generation_fitting_pairs(g, s.D);
            if (json) {
                emit(to_json(g, pairs));
            } else {
                out << "checked to: " << g.checked_to << (g.truncated ? " (truncated)" : "") << "\n";
                for (const auto& [i, m] : g.new_generators) {
                    out << "new generators in Ext^" << i << ":";
                    for (auto [sh, c] : m) out << " " << c << " in shift " << sh;
                    out << "\n";
                }
                out << "fitting pairs: " << detail::pairs_text(pairs) << "\n";
            }
        } else if (cmd == "module-classify") {
            auto f = s.delta();
            if (!f) throw refusal("the algebra is not piecewise-Koszul within the certified range; pass --pd p,d");
            std::string name = cfg.module;
            auto m = detail::select_module(s, name);
            auto rm = minimal_resolution(s.alg, m, s.N, std::min(s.D, m.valid_to));
            auto bm = betti_table(rm);
            auto mc = classify_module(bm, *f);
            YonedaEngine eng(*s.trivial);
            auto mg = module_generation(eng, rm, s.N);
            if (json) {
                emit({{"module", name}, {"delta", {f->p, f->d}}, {"betti", to_json(bm)}, {"classification", to_json(mc)},
                      {"generated_in_degree_zero", mg.generated_in_degree_zero}});
            } else {
                out << "module " << name << " with delta(" << f->p << "," << f->d << ")\n";
                detail::print_betti(out, bm);
                out << "piecewise-Koszul: " << (mc.piecewise_koszul ? "yes" : "no");
                if (mc.s) out << " (s=" << *mc.s << ")";
                if (!mc.reason.empty()) out << " " << mc.reason;
                out << "\ngenerated in ext-degree 0: " << (mg.generated_in_degree_zero ? "yes" : "no") << "\n";
            }
        } else if (cmd == "ek") {
            auto f = s.delta();
            if (!f) throw refusal("the algebra is not piecewise-Koszul within the certified range; pass --pd p,d");
            const int k = cfg.arg1;
            if (k < 1) throw input_error("k must be at least 1");
            YonedaEngine eng(*s.trivial);
            int n_max = cfg.n_max.value_or(std::max(0, eng.certified_to()) / (f->p * k));
            auto E = ek_subalgebra(eng, *f, k, n_max);
            if (json) {
                emit(structure_constants_json(E));
            } else {
                out << "E_" << k << " degrees 0.." << E.max_degree() << ", dims:";
                for (int n = 0; n <= E.max_degree(); ++n) out << " " << E.dim(n);
                out << "\n";
            }
        } else if (cmd == "arities") {
            auto f = s.delta();
            auto e = ext_table(betti_table(*s.trivial));
            auto a = ainfty_feasible_arities(e, f, cfg.arg1);
            if (json) {
                emit(to_json(a));
            } else {
                out << "support-based:";
                for (int q : a.support) out << " " << q;
                out << "\nclosed form:";
                if (a.closed_form)
                    for (int q : *a.closed_form) out << " " << q;
                else
                    out << " n/a";
                out << "\n";
            }
        } else if (cmd == "reduced2l") {
            YonedaEngine eng(*s.trivial);
            auto e = ext_table(betti_table(*s.trivial));
            auto r = reduced_2l_check(eng, e, cfg.arg1);
            if (json) {
                emit(to_json(r));
            } else {
                out << "condition 1 (exact): " << (r.cond1 ? "holds" : "fails") << "\n"
                    << "condition 2 (exact): " << (r.cond2 ? "holds" : "fails") << "\n"
                    << "condition 3 (bigrading feasibility): " << (r.cond3_forced ? "holds" : "fails") << "\n"
                    << "m_" << r.l << " feasible: " << (r.ml_feasible ? "yes" : "no") << "\n";
            }
        } else {
            throw input_error("unknown subcommand '" + cmd + "'");
        }
    } catch (const refusal& e) {
        err << "refused: " << e.what() << "\n";
        return 1;
    } catch (const input_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace pkoszul
