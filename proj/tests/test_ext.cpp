#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"

using namespace pkoszul;

namespace {

ExtClass unit(const Resolution& r) { return {0, 0, Vector(r.P(0).rank(), 1)}; }

std::vector<ExtClass> basis(const Resolution& r, int i) {
    std::vector<ExtClass> out;
    for (std::size_t g = 0; g < r.P(i).rank(); ++g) out.push_back(basis_class(r, i, static_cast<int>(g)));
    return out;
}

}  // namespace

TEST(Delta, TabulatedValues) {
    std::vector<int> v;
    DeltaFunction f34(3, 4), f25(2, 5), f55(5, 5);
    for (int n = 0; n <= 8; ++n) v.push_back(f34(n));
    EXPECT_EQ(v, (std::vector<int>{0, 1, 2, 4, 5, 6, 8, 9, 10}));
    v.clear();
    for (int n = 0; n <= 5; ++n) v.push_back(f25(n));
    EXPECT_EQ(v, (std::vector<int>{0, 1, 5, 6, 10, 11}));
    for (int n = 0; n <= 30; ++n) EXPECT_EQ(f55(n), n);
    EXPECT_THROW(DeltaFunction(1, 3), input_error);
    EXPECT_THROW(DeltaFunction(3, 2), input_error);
    EXPECT_THROW(f34(-1), input_error);
}

TEST(ExtTable, CommutingLoopsDiagonal) {
    auto r = pktest::resolved("commuting_loops.pk", 4, 8);
    auto e = ext_table(r.betti());
    EXPECT_EQ(e.dim(0, 0), 1);
    EXPECT_EQ(e.dim(1, 1), 2);
    EXPECT_EQ(e.dim(2, 2), 1);
    EXPECT_EQ(e.total(3), 0);
}

TEST(ExtTable, WorkedExampleConcentratedOnDelta) {
    auto r = pktest::resolved("worked_example.pk", 6, 9);
    auto e = ext_table(r.betti());
    DeltaFunction f(3, 4);
    for (int i = 0; i <= 6; ++i)
        for (int j : e.shifts(i)) EXPECT_EQ(j, f(i));
    EXPECT_EQ(e.dim(0, 0), 5);
}

TEST(ExtTable, SemisimpleHasOnlyDegreeZero) {
    auto r = pktest::resolved(parse_input("vertices 1 2 3\n").presentation, 3, 2);
    auto e = ext_table(r.betti());
    EXPECT_EQ(e.dim(0, 0), 3);
    for (int i = 1; i <= 3; ++i) EXPECT_EQ(e.total(i), 0);
}

TEST(Yoneda, UnitLaw) {
    for (auto name : {"worked_example.pk", "commuting_loops.pk", "x3.pk"}) {
        auto r = pktest::resolved(name, 4, 9);
        YonedaEngine eng(*r.res);
        for (int i = 0; i <= 4; ++i)
            for (const auto& xi : basis(*r.res, i)) {
                EXPECT_EQ(eng.product(unit(*r.res), xi).coeffs, xi.coeffs) << name;
                EXPECT_EQ(eng.product(xi, unit(*r.res)).coeffs, xi.coeffs) << name;
            }
    }
}

TEST(Yoneda, SquareOfDegreeOneClass) {
    {
        auto r = pktest::resolved("x2.pk", 6, 8);
        YonedaEngine eng(*r.res);
        auto x1 = basis_class(*r.res, 1, 0);
        auto sq = eng.product(x1, x1);
        EXPECT_FALSE(sq.is_zero());
        EXPECT_EQ(sq.shift, 2);
    }
    {
        auto r = pktest::resolved("x3.pk", 6, 8);
        YonedaEngine eng(*r.res);
        auto x1 = basis_class(*r.res, 1, 0);
        EXPECT_TRUE(eng.product(x1, x1).is_zero());
    }
}

TEST(Yoneda, ShiftsAddAndProductsAreAssociative) {
    for (auto name : {"worked_example.pk", "commuting_loops.pk", "x2.pk", "x3.pk"}) {
        auto r = pktest::resolved(name, 5, 10);
        YonedaEngine eng(*r.res);
        for (int a = 1; a <= 2; ++a)
            for (int b = 1; b <= 2; ++b)
                for (int c = 1; a + b + c <= 5; ++c)
                    for (const auto& x : basis(*r.res, a))
                        for (const auto& y : basis(*r.res, b))
                            for (const auto& z : basis(*r.res, c)) {
                                auto xy = eng.product(x, y);
                                auto yz = eng.product(y, z);
                                if (!xy.is_zero()) {
                                    EXPECT_EQ(xy.shift, x.shift + y.shift);
                                }
                                EXPECT_EQ(eng.product(xy, z).coeffs, eng.product(x, yz).coeffs) << name;
                            }
    }
}

TEST(Yoneda, ProductsIgnoreTheLiftChoice) {
    std::mt19937 rng(5);
    for (auto name : {"worked_example.pk", "commuting_loops.pk", "x3.pk"}) {
        auto r = pktest::resolved(name, 5, 10);
        YonedaEngine eng(*r.res);
        for (int i = 1; i <= 3; ++i)
            for (int j = 1; i + j <= 5; ++j)
                for (const auto& x : basis(*r.res, i))
                    for (const auto& y : basis(*r.res, j))
                        EXPECT_EQ(eng.product(x, y, &rng).coeffs, eng.product(x, y).coeffs) << name;
    }
}

TEST(Yoneda, RefusesUncertifiedDegrees) {
    auto r = pktest::resolved("x3.pk", 6, 5);
    YonedaEngine eng(*r.res);
    auto x = basis_class(*r.res, 2, 0);
    EXPECT_THROW(eng.product(x, x), refusal);
}

TEST(Surjectivity, KoszulDegreeOne) {
    auto r = pktest::resolved("commuting_loops.pk", 4, 8);
    YonedaEngine eng(*r.res);
    EXPECT_TRUE(yoneda_surjectivity_check(eng, DeltaFunction(2, 2), 1, 1));
}

TEST(Surjectivity, WorkedExample) {
    auto r = pktest::resolved("worked_example.pk", 6, 9);
    YonedaEngine eng(*r.res);
    EXPECT_THROW(yoneda_surjectivity_check(eng, DeltaFunction(3, 4), 1, 2), refusal);
    EXPECT_TRUE(yoneda_surjectivity_check(eng, DeltaFunction(3, 4), 3, 3));
    EXPECT_THROW(yoneda_surjectivity_check(eng, DeltaFunction(3, 4), 2, 1), refusal);
}

TEST(Surjectivity, TruncatedPolynomialX2) {
    auto r = pktest::resolved("x2.pk", 6, 8);
    YonedaEngine eng(*r.res);
    for (int i = 1; i <= 3; ++i) EXPECT_TRUE(yoneda_surjectivity_check(eng, DeltaFunction(2, 2), i, 4 - i));
}

TEST(Classify, Corpus) {
    auto c = classify(pktest::resolved("commuting_loops.pk", 6, 8).betti());
    EXPECT_EQ(c.verdict, Verdict::koszul);
    c = classify(pktest::resolved("x3.pk", 6, 14).betti());
    EXPECT_EQ(c.verdict, Verdict::d_koszul);
    EXPECT_EQ(c.d, 3);
    c = classify(pktest::resolved("worked_example.pk", 6, 9).betti());
    EXPECT_EQ(c.verdict, Verdict::piecewise_koszul);
    EXPECT_EQ(c.p, 3);
    EXPECT_EQ(c.d, 4);
    EXPECT_EQ(c.fitting_pairs, (std::vector<std::pair<int, int>>{{3, 4}}));
}

TEST(Classify, ImpureRowsAndNoFit) {
    // relations of degrees 2 and 3 put P_2 generators in both degrees
    auto doc = parse_input("vertices 1\narrow x : 1 -> 1\narrow y : 1 -> 1\nrelation x*x\nrelation y*y*y\n");
    auto c = classify(pktest::resolved(doc.presentation, 4, 10).betti());
    EXPECT_EQ(c.verdict, Verdict::not_pure);
    EXPECT_FALSE(c.impure_rows.empty());
}

TEST(Classify, SyntheticTables) {
    BettiTable b;
    b.vertex_labels = {"1"};
    b.max_hdeg = 4;
    b.max_ideg = 12;
    for (int n = 0; n <= 4; ++n) {
        BettiRow row;
        row.n = n;
        row.certified = true;
        row.counts[{std::vector<int>{0, 1, 3, 3, 5}[static_cast<std::size_t>(n)], 0}] = 1;
        b.rows.push_back(row);
    }
    auto c = classify(b);
    EXPECT_EQ(c.verdict, Verdict::no_fit);
    for (int n = 0; n <= 4; ++n)
        b.rows[static_cast<std::size_t>(n)].counts = {{{std::vector<int>{0, 1, 2, 3, 4}[static_cast<std::size_t>(n)], 0}, 1}};
    EXPECT_EQ(classify(b).verdict, Verdict::koszul);
}

TEST(Generation, Corpus) {
    {
        auto r = pktest::resolved("commuting_loops.pk", 5, 8);
        YonedaEngine eng(*r.res);
        EXPECT_EQ(ext_generation_degrees(eng, 5).degrees(), (std::vector<int>{0, 1}));
    }
    {
        auto r = pktest::resolved("x3.pk", 6, 14);
        YonedaEngine eng(*r.res);
        auto g = ext_generation_degrees(eng, 6);
        EXPECT_EQ(g.degrees(), (std::vector<int>{0, 1, 2}));
        EXPECT_EQ(g.new_generators.at(2), (std::map<int, int>{{3, 1}}));
    }
    {
        auto r = pktest::resolved("worked_example.pk", 6, 9);
        YonedaEngine eng(*r.res);
        auto g = ext_generation_degrees(eng, 6);
        EXPECT_EQ(g.degrees(), (std::vector<int>{0, 1, 3}));
        EXPECT_EQ(g.new_generators.at(3), (std::map<int, int>{{4, 1}}));
        EXPECT_FALSE(g.truncated);
    }
}

TEST(Generation, TruncatedReportIsFlagged) {
    auto r = pktest::resolved("x3.pk", 6, 5);
    YonedaEngine eng(*r.res);
    auto g = ext_generation_degrees(eng, 6);
    EXPECT_TRUE(g.truncated);
    EXPECT_EQ(g.checked_to, 3);
}

TEST(ModuleClassify, Examples) {
    {
        auto r = pktest::resolved("worked_example.pk", 6, 9);
        auto mc = classify_module(r.betti(), DeltaFunction(3, 4));
        EXPECT_TRUE(mc.piecewise_koszul);
        EXPECT_EQ(mc.s, 0);
        auto om = minimal_resolution(r.alg, syzygy(*r.res, 3), 3, 9);
        auto mo = classify_module(betti_table(om), DeltaFunction(3, 4));
        EXPECT_TRUE(mo.piecewise_koszul);
        EXPECT_EQ(mo.s, 4);
    }
    {
        auto A = pktest::algebra("x2.pk", 8);
        auto J = radical_submodule(*A, free_presentation(FreeModule{{{0, 0, -1}}}, "A"), 8);
        auto mc = classify_module(betti_table(minimal_resolution(A, J, 5, 8)), DeltaFunction(2, 2));
        EXPECT_TRUE(mc.piecewise_koszul);
        EXPECT_EQ(mc.s, 1);
    }
}

// PK module <=> Ext(M, A_0) generated in ext-degree 0 under the E(A) action.
TEST(ModuleGeneration, AgreesWithClassification) {
    auto doc = pktest::algebra_doc("x2_module.pk");
    auto A = pktest::build(doc.presentation, 8);
    auto r = resolve_trivial(A, 4, 8);
    YonedaEngine eng(r);
    auto check = [&](const ModulePresentation& m, bool expect) {
        auto rm = minimal_resolution(A, m, 4, 8);
        auto mc = classify_module(betti_table(rm), DeltaFunction(2, 2));
        auto mg = module_generation(eng, rm, 4);
        EXPECT_EQ(mc.piecewise_koszul, expect) << m.name;
        EXPECT_EQ(mg.generated_in_degree_zero, expect) << m.name;
    };
    check(module_presentation(doc.modules[0], *A), false);
    check(trivial_presentation(*A), true);
    check(radical_submodule(*A, free_presentation(FreeModule{{{0, 0, -1}}}, "A"), 8), true);
}

TEST(Ek, KoszulAlgebra) {
    auto r = pktest::resolved("commuting_loops.pk", 6, 8);
    YonedaEngine eng(*r.res);
    auto E = ek_subalgebra(eng, DeltaFunction(2, 2), 1, 2);
    EXPECT_EQ(E.dim(0), 1);
    EXPECT_EQ(E.dim(1), 1);
    EXPECT_EQ(E.dim(2), 0);
}

TEST(Ek, WorkedExamplePassesIngestValidation) {
    auto r = pktest::resolved("worked_example.pk", 6, 9);
    YonedaEngine eng(*r.res);
    auto E = ek_subalgebra(eng, DeltaFunction(3, 4), 1, 2);
    EXPECT_EQ(E.dim(0), 5);
    EXPECT_EQ(E.dim(1), 1);
    EXPECT_EQ(E.dim(2), 0);
    auto again = ingest_structure_constants(nlohmann::json::parse(structure_constants_json(E).dump()));
    EXPECT_EQ(again.dim(1), 1);
    EXPECT_THROW(ek_subalgebra(eng, DeltaFunction(3, 4), 1, 3), refusal);
}

TEST(Ek, SemisimpleAlgebra) {
    auto r = pktest::resolved(parse_input("vertices 1 2\n").presentation, 4, 2);
    YonedaEngine eng(*r.res);
    auto E = ek_subalgebra(eng, DeltaFunction(2, 2), 1, 2);
    EXPECT_EQ(E.dim(0), 2);
    EXPECT_EQ(E.dim(1) + E.dim(2), 0);
}

TEST(Arities, ClosedFormForPK36) {
    auto e = concentrated_table(DeltaFunction(3, 6), 9);
    auto a = ainfty_feasible_arities(e, DeltaFunction(3, 6), 9);
    ASSERT_TRUE(a.closed_form);
    EXPECT_EQ(*a.closed_form, (std::vector<int>{2, 5, 8}));
    EXPECT_EQ(a.consistent, true);
}

TEST(Arities, SupportInsideClosedFormForPK3d) {
    for (int d = 3; d <= 9; ++d) {
        auto e = concentrated_table(DeltaFunction(3, d), 9);
        auto a = ainfty_feasible_arities(e, DeltaFunction(3, d), 9);
        ASSERT_TRUE(a.closed_form);
        EXPECT_TRUE(std::includes(a.closed_form->begin(), a.closed_form->end(), a.support.begin(), a.support.end())) << d;
    }
}

TEST(Arities, WorkedExampleAndKoszul) {
    auto r = pktest::resolved("worked_example.pk", 6, 9);
    auto a = ainfty_feasible_arities(ext_table(r.betti()), DeltaFunction(3, 4), 5);
    EXPECT_EQ(*a.closed_form, (std::vector<int>{2, 3, 4, 5}));
    auto k = pktest::resolved("commuting_loops.pk", 6, 8);
    auto b = ainfty_feasible_arities(ext_table(k.betti()), DeltaFunction(2, 2), 6);
    EXPECT_EQ(b.support, (std::vector<int>{2}));
    EXPECT_FALSE(b.closed_form);
}

TEST(Reduced2l, WorkedExample) {
    auto r = pktest::resolved("worked_example.pk", 6, 9);
    YonedaEngine eng(*r.res);
    auto rep = reduced_2l_check(eng, ext_table(r.betti()), 3);
    EXPECT_TRUE(rep.cond1);
    EXPECT_TRUE(rep.cond2);
    EXPECT_TRUE(rep.cond3_forced);
    EXPECT_TRUE(rep.ml_feasible);
}

TEST(Reduced2l, KoszulPassesVacuously) {
    auto r = pktest::resolved("commuting_loops.pk", 6, 8);
    YonedaEngine eng(*r.res);
    EXPECT_TRUE(reduced_2l_check(eng, ext_table(r.betti()), 3).cond2);
}

TEST(Reduced2l, ViolationNamesTheBidegrees) {
    // E(A) = k[xi] for x^2 = 0, so xi * xi^2 != 0 lands in residues (1, 2)
    auto r = pktest::resolved("x2.pk", 6, 8);
    YonedaEngine eng(*r.res);
    auto rep = reduced_2l_check(eng, ext_table(r.betti()), 3);
    EXPECT_FALSE(rep.cond2);
    ASSERT_FALSE(rep.cond2_offending.empty());
    auto o = rep.cond2_offending.front();
    EXPECT_NE(o[0] % 3, 0);
    EXPECT_NE(o[2] % 3, 0);
    EXPECT_GE(o[0] % 3 + o[2] % 3, 3);
    EXPECT_THROW(reduced_2l_check(eng, ext_table(r.betti()), 2), input_error);
}

TEST(RadicalSequence, TrivialModuleOfWorkedExample) {
    auto A = pktest::algebra("worked_example.pk", 9);
    auto rep = radical_sequence_check(A, trivial_presentation(*A), DeltaFunction(3, 4), 6, 9);
    EXPECT_TRUE(rep.betti_additive);
    EXPECT_TRUE(rep.module.piecewise_koszul);
    EXPECT_TRUE(rep.top.piecewise_koszul);
}
