#include "polyform/solvers.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace pf;

namespace {

constexpr double pi = std::numbers::pi;
const auto H = SpaceForm::Hyperbolic;
const auto S = SpaceForm::Spherical;
const auto E = SpaceForm::Euclidean;

double octa_an(int n)
{
    return std::sqrt(6.0) * std::cos(pi / n) / std::sqrt(3 * std::cos(2 * pi / n) + 1);
}

}

TEST(Bisect, FindsRootAndReportsBracket)
{
    auto r = bisect([](double x) { return x * x - 2; }, 0, 2);
    EXPECT_NEAR(r.x, std::sqrt(2.0), 1e-12);
    EXPECT_LE(r.iterations, 200);
    EXPECT_THROW(bisect([](double x) { return x * x + 1; }, 0, 2), BracketError);
}

TEST(SolvePlatonic, CubeFive)
{
    auto r = solve_platonic_angle(4, 3, 5);
    EXPECT_EQ(r.space, H);
    EXPECT_NEAR(r.value, std::sqrt(2 + std::sqrt(5.0)), 1e-9);
    EXPECT_NEAR(*r.witness->edges[0].dihedral, 2 * pi / 5, 1e-9);
    EXPECT_LE(r.hi - r.lo, 1e-12 * std::max(1.0, r.inradius));
}

TEST(SolvePlatonic, OctahedronFormula)
{
    EXPECT_NEAR(solve_platonic_angle(3, 4, 5).value, 1.4275347, 1e-7);
    for (int n = 5; n <= 12; ++n)
        EXPECT_NEAR(solve_platonic_angle(3, 4, n).value, octa_an(n), 1e-9) << n;
}

TEST(SolvePlatonic, SphericalCube)
{
    auto r = solve_platonic_angle(4, 3, 3);
    EXPECT_EQ(r.space, S);
    EXPECT_NEAR(r.value, 1 / std::sqrt(3.0), 1e-12);
    EXPECT_NEAR(*r.witness->edges[0].dihedral, 2 * pi / 3, 1e-9);
}

TEST(SolvePlatonic, EuclideanIsScaleFree)
{
    auto r = solve_platonic_angle(4, 3, 4);
    EXPECT_EQ(r.space, E);
    EXPECT_TRUE(r.scale_free);
}

TEST(SolvePlatonic, BelowTable)
{
    EXPECT_THROW(solve_platonic_angle(4, 3, 2), NonexistenceError);
    EXPECT_THROW(solve_platonic_angle(4, 3, 5, S), NonexistenceError);
}

TEST(SolvePrismatic, CubeClosedForm)
{
    for (int n = 5; n <= 10; ++n) {
        auto r = solve_prismatic_inner(4, 3, n, Base::Platonic);
        const double a = *r.secondary;
        EXPECT_NEAR(r.value, a + std::sqrt(a * a - 1), 1e-9) << n;
    }
    auto r = solve_prismatic_inner(4, 3, 5, Base::Platonic);
    EXPECT_NEAR(r.value, 3.85707846721936, 1e-9);
    auto m = measure_prism(*r.witness, platonic_at(4, 3, *r.secondary_inradius, H));
    EXPECT_LE(std::abs(m.base_edge - m.lateral_edge), 1e-10);
}

TEST(SolvePrismatic, SphericalInnerCube)
{
    auto r = solve_prismatic_inner(4, 3, 3, Base::Platonic);
    EXPECT_EQ(r.space, S);
    const double b = (-1 - std::sqrt(2.0) + std::sqrt(2 * (3 + std::sqrt(2.0)))) / std::sqrt(3.0);
    EXPECT_NEAR(r.value, b, 1e-6);
    EXPECT_NEAR(r.value, 0.321615, 1e-6);
}

TEST(SolvePrismatic, EuclideanUnitEdge)
{
    auto r = solve_prismatic_inner(4, 3, 4, Base::Platonic);
    EXPECT_EQ(r.space, E);
    EXPECT_DOUBLE_EQ(r.value, 1.0);
    auto m = measure_prism(*r.witness, platonic_at(4, 3, *r.secondary_inradius, E));
    EXPECT_NEAR(m.base_edge, 1, 1e-12);
    EXPECT_NEAR(m.lateral_edge, 1, 1e-12);
}

TEST(SolvePrismatic, ArchimedeanBases)
{
    for (Base b : {Base::Truncated, Base::Rectified}) {
        auto r = solve_prismatic_inner(3, 4, 5, b);
        auto m = measure_prism(*r.witness, platonic_at(3, 4, *r.secondary_inradius, H));
        EXPECT_LE(std::abs(m.base_edge - m.lateral_edge), 1e-9) << to_string(b);
    }
}

TEST(SolveKis, EuclideanTetrahedron)
{
    auto r = solve_kis_angle_condition(3, 3, 3);
    EXPECT_EQ(r.space, E);
    auto k = *r.witness->kis;
    EXPECT_NEAR(k.alpha, std::acos(1.0 / 3), 1e-12);
    EXPECT_NEAR(k.beta, pi - std::acos(1.0 / 3), 1e-12);
    EXPECT_NEAR(2 * k.gamma, std::acos(1.0 / 3), 1e-12);
    EXPECT_LE(r.residual, 1e-12);
}

TEST(SolveKis, HyperbolicBracket)
{
    auto b = kis_bracket(3, 4, 3, H);
    EXPECT_NEAR(b.sum_hi, 4 * pi / 3, 1e-6);
    EXPECT_GT(b.sum_lo, 2 * pi);
    auto r = solve_kis_angle_condition(3, 4, 3);
    EXPECT_EQ(r.space, H);
    EXPECT_LE(r.residual, 1e-10);
    EXPECT_NEAR(r.witness->kis->sum, 2 * pi, 1e-9);
}

TEST(SolveKis, SphericalBracket)
{
    auto b = kis_bracket(3, 3, 2, S);
    EXPECT_NEAR(b.sum_lo * 180 / pi, 289.47, 0.01);
    EXPECT_NEAR(b.sum_hi, 3 * pi, 1e-5);
    auto r = solve_kis_angle_condition(3, 3, 2);
    EXPECT_EQ(r.space, S);
    EXPECT_NEAR(r.witness->kis->sum, 2 * pi, 1e-9);
}

TEST(SolveAntiprismatic, RegularAntiprisms)
{
    struct Case {
        int p, q, n;
        Base base;
        SpaceForm space;
    };
    for (auto c : {Case{3, 3, 3, Base::Platonic, E}, Case{3, 4, 2, Base::Platonic, E},
                   Case{4, 3, 2, Base::Platonic, S}, Case{5, 3, 2, Base::Platonic, H},
                   Case{5, 3, 2, Base::Rectified, H}}) {
        auto r = solve_antiprismatic_inner(c.p, c.q, c.n, c.base);
        EXPECT_EQ(r.space, c.space);
        auto m = measure_antiprism(*r.witness, kis_at(c.p, c.q, c.n, *r.secondary_inradius, c.space));
        EXPECT_LE(std::abs(m.base_edge - m.lateral_edge), 1e-10) << c.p << c.q << c.n;
    }
    EXPECT_THROW(solve_antiprismatic_inner(3, 4, 2, Base::Truncated), std::exception);
}

TEST(AngleTable, TenSums)
{
    const double want[5][2] = {{289.47, 360}, {340.53, 411.06}, {360, 450},
                               {401.81, 472.34}, {423.44, 540}};
    auto t = euclidean_angle_table();
    ASSERT_EQ(t.size(), 5u);
    for (int i = 0; i < 5; ++i) {
        EXPECT_NEAR(t[i].sum2, want[i][0], 0.01) << t[i].name;
        EXPECT_NEAR(t[i].sum3, want[i][1], 0.01) << t[i].name;
    }
}

TEST(Geography, Platonic)
{
    auto g = [](int p, int q, int n) { return platonic_geography(p, q, n); };
    EXPECT_EQ(g(4, 3, 3).space, S);
    EXPECT_EQ(g(4, 3, 4).space, E);
    EXPECT_EQ(g(4, 3, 5).kind, Classification::Finite);
    EXPECT_EQ(g(4, 3, 6).kind, Classification::Ideal);
    EXPECT_EQ(g(4, 3, 7).kind, Classification::Hyperideal);
    EXPECT_EQ(g(3, 5, 3).space, H);
    EXPECT_EQ(g(3, 5, 3).kind, Classification::Finite);
    EXPECT_EQ(solve_platonic_angle(3, 5, 3).space, H);
}

TEST(Geography, Antiprismatic)
{
    EXPECT_EQ(kis_geography(3, 3, 2), S);
    EXPECT_EQ(kis_geography(3, 3, 3), E);
    EXPECT_EQ(kis_geography(3, 3, 4), H);
    EXPECT_EQ(kis_geography(3, 4, 2), E);
    EXPECT_EQ(kis_geography(4, 3, 2), S);
    EXPECT_EQ(kis_geography(5, 3, 2), H);
}

TEST(Names, BaseParsing)
{
    EXPECT_EQ(parse_base("rectified"), Base::Rectified);
    EXPECT_FALSE(parse_base("snub").has_value());
    EXPECT_EQ(solid_name(5, 3), "dodecahedron");
}
