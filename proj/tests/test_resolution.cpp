#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace pkoszul;

namespace {

using Row = std::map<std::pair<int, int>, int>;  // (degree, vertex) -> count

void expect_golden(const std::string& algebra, const std::string& golden, int N, int D) {
    auto j = nlohmann::json::parse(pktest::read_file(std::string(PK_GOLDEN_DIR) + "/" + golden));
    auto r = pktest::resolved(algebra, N, D);
    auto b = r.betti();
    ASSERT_GE(b.certified_to(), N) << algebra;
    for (const auto& row : j["rows"]) {
        const int n = row["n"].get<int>();
        if (n > N) break;
        auto degs = b.row(n).degrees();
        EXPECT_EQ(degs, row["degrees"].get<std::vector<int>>()) << algebra << " row " << n;
        std::vector<int> counts;
        for (int d : degs) counts.push_back(b.row(n).at_degree(d));
        EXPECT_EQ(counts, row["counts"].get<std::vector<int>>()) << algebra << " row " << n;
    }
    EXPECT_TRUE(differentials_square_to_zero(*r.res));
    EXPECT_TRUE(is_minimal(*r.res));
    EXPECT_TRUE(is_exact(*r.res));
}

}  // namespace

TEST(Golden, TruncatedPolynomialX2) { expect_golden("x2.pk", "x2.json", 8, 10); }
TEST(Golden, TruncatedPolynomialX3) { expect_golden("x3.pk", "x3.json", 8, 14); }
TEST(Golden, TruncatedPolynomialX4) { expect_golden("x4.pk", "x4.json", 8, 18); }
TEST(Golden, CommutingLoops) { expect_golden("commuting_loops.pk", "commuting_loops.json", 6, 8); }

TEST(Resolution, WorkedExampleBettiRows) {
    auto r = pktest::resolved("worked_example.pk", 6, 9);
    auto b = r.betti();
    EXPECT_EQ(b.row(0).counts, (Row{{{0, 0}, 1}, {{0, 1}, 1}, {{0, 2}, 1}, {{0, 3}, 1}, {{0, 4}, 1}}));
    EXPECT_EQ(b.row(1).counts, (Row{{{1, 1}, 1}, {{1, 2}, 2}, {{1, 3}, 3}, {{1, 4}, 1}}));
    EXPECT_EQ(b.row(2).counts, (Row{{{2, 2}, 1}, {{2, 3}, 2}, {{2, 4}, 2}}));
    EXPECT_EQ(b.row(3).counts, (Row{{{4, 4}, 1}}));
    for (int n = 4; n <= 6; ++n) EXPECT_TRUE(b.row(n).empty());
    EXPECT_EQ(b.certified_to(), 6);
    for (int n = 0; n <= 6; ++n) EXPECT_TRUE(r.res->rigorous[static_cast<std::size_t>(n)]) << n;
    EXPECT_EQ(b.termination_degree(), 4);
    EXPECT_TRUE(differentials_square_to_zero(*r.res));
    EXPECT_TRUE(is_minimal(*r.res));
    EXPECT_TRUE(is_exact(*r.res));
}

TEST(Resolution, HereditaryPathQuiver) {
    auto r = pktest::resolved("path_a3.pk", 4, 6);
    auto b = r.betti();
    EXPECT_EQ(b.row(0).total(), 3);
    EXPECT_EQ(b.row(1).counts, (Row{{{1, 1}, 1}, {{1, 2}, 1}}));
    EXPECT_TRUE(b.row(2).empty());
    EXPECT_EQ(b.termination_degree(), 2);
}

TEST(Resolution, SemisimpleAlgebraStopsAtOnce) {
    auto doc = parse_input("vertices 1 2\n");
    auto r = pktest::resolved(doc.presentation, 3, 2);
    auto b = r.betti();
    EXPECT_EQ(b.row(0).total(), 2);
    EXPECT_TRUE(b.row(1).empty());
    EXPECT_EQ(b.termination_degree(), 1);
}

TEST(Resolution, HeuristicCertificationStopsAtTheBound) {
    // x^3 = 0 has top degree 2, so row n is certified once deg P_{n-1} + 2 <= D;
    // with D = 5 that holds for rows 0..3 (degrees 0,1,3,4) and fails for row 4
    auto r = pktest::resolved("x3.pk", 6, 5);
    EXPECT_EQ(r.betti().certified_to(), 3);
}

TEST(Resolution, RejectsBoundsOutsideTheAlgebra) {
    auto A = pktest::algebra("x2.pk", 4);
    EXPECT_THROW(resolve_trivial(A, 3, 5), input_error);
    EXPECT_THROW(resolve_trivial(A, -1, 4), input_error);
}

TEST(Syzygy, WorkedExampleThirdSyzygy) {
    auto r = pktest::resolved("worked_example.pk", 6, 9);
    auto om = syzygy(*r.res, 3);
    ASSERT_EQ(om.generators.rank(), 1u);
    EXPECT_EQ(om.generators[0].degree, 4);
    EXPECT_EQ(om.generators[0].vertex, 4);
    auto rs = minimal_resolution(r.alg, om, 3, 9);
    auto b = betti_table(rs);
    EXPECT_EQ(b.row(0).degrees(), (std::vector<int>{4}));
    EXPECT_TRUE(b.row(1).empty());
}

TEST(Syzygy, ZerothSyzygyIsTheModule) {
    auto r = pktest::resolved("x3.pk", 6, 14);
    auto om = syzygy(*r.res, 0);
    auto a = betti_table(minimal_resolution(r.alg, om, 4, 14));
    auto b = r.betti();
    for (int n = 0; n <= 4; ++n) EXPECT_EQ(a.row(n).counts, b.row(n).counts) << n;
}

TEST(Syzygy, ShiftsTheResolution) {
    auto r = pktest::resolved("x3.pk", 7, 14);
    auto om = syzygy(*r.res, 2);
    auto b = betti_table(minimal_resolution(r.alg, om, 4, 14));
    for (int n = 0; n <= 4; ++n) EXPECT_EQ(b.row(n).degrees(), r.betti().row(n + 2).degrees()) << n;
}

TEST(Syzygy, RefusedBeyondTheComputedRange) {
    auto r = pktest::resolved("x3.pk", 3, 8);
    EXPECT_THROW(syzygy(*r.res, 3), refusal);
    auto small = pktest::resolved("x3.pk", 6, 4);
    EXPECT_THROW(syzygy(*small.res, 5), refusal);
}

TEST(Radical, RadicalOfTrivialModuleIsZero) {
    auto A = pktest::algebra("x2.pk", 6);
    auto j = radical_submodule(*A, trivial_presentation(*A), 6);
    EXPECT_TRUE(betti_table(minimal_resolution(A, j, 2, 6)).row(0).empty());
}

TEST(Radical, RadicalOfFreeModuleOverX2IsShiftedSimple) {
    auto A = pktest::algebra("x2.pk", 8);
    auto F = free_presentation(FreeModule{{{0, 0, -1}}}, "A");
    auto j = radical_submodule(*A, F, 8);
    auto b = betti_table(minimal_resolution(A, j, 5, 8));
    for (int n = 0; n <= 5; ++n) EXPECT_EQ(b.row(n).degrees(), (std::vector<int>{n + 1})) << n;
}

TEST(Checks, DetectBrokenDifferentials) {
    auto r = pktest::resolved("x2.pk", 4, 8);
    Resolution zeroed = *r.res;
    zeroed.differentials[2].images[0].terms.clear();
    EXPECT_TRUE(differentials_square_to_zero(zeroed));
    EXPECT_FALSE(is_exact(zeroed));

    Resolution unit = *r.res;
    unit.differentials[1].images[0].terms[0].word = 0;  // gen -> gen * e_1
    unit.differentials[1].images[0].degree = 0;
    EXPECT_FALSE(is_minimal(unit));
}
