#include "polyform/tiler.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace pf;

namespace {

constexpr double pi = std::numbers::pi;
const auto H = SpaceForm::Hyperbolic;
const auto S = SpaceForm::Spherical;
const auto E = SpaceForm::Euclidean;

struct Pipeline {
    SolveResult solve;
    Solid fundamental;
    GroupSpec group;
    OrbitSet orbit;
    FundamentalPatch patch;
};

Pipeline pipeline(PatchKind kind, int p, int q, int n, int depth = 2, Base base = Base::Platonic)
{
    Pipeline P;
    const bool anti = kind == PatchKind::Antiprismatic;
    P.solve = anti ? solve_antiprismatic_inner(p, q, n, base) : solve_prismatic_inner(p, q, n, base);
    const SpaceForm s = P.solve.space;
    P.fundamental = anti ? kis_at(p, q, n, *P.solve.secondary_inradius, s)
                         : platonic_at(p, q, *P.solve.secondary_inradius, s);
    P.group = anti ? antiprismatic_generators(P.fundamental) : prismatic_generators(P.fundamental);
    P.orbit = enumerate(P.group, {s == S ? -1 : depth});
    P.patch = fundamental_patch(kind, *P.solve.witness, P.fundamental, P.solve);
    return P;
}

std::size_t cells(const Solid& fundamental, bool anti)
{
    auto g = anti ? antiprismatic_generators(fundamental) : prismatic_generators(fundamental);
    return distinct_images(enumerate(g, {}), origin(S)).size();
}

bool is_identity(const Isometry& g, double tol)
{
    return (g.m - Mat4::Identity()).cwiseAbs().maxCoeff() < tol;
}

}

TEST(Generators, HyperbolicCube)
{
    auto g = prismatic_generators(*solve_platonic_angle(4, 3, 5).witness);
    ASSERT_EQ(g.generators.size(), 6u);
    EXPECT_EQ(g.kind, GroupKind::Reflection);
    for (const auto& r : g.generators)
        EXPECT_TRUE(is_identity(compose(r, r), 1e-10));
}

TEST(Generators, RejectsNonIntegralAngle)
{
    EXPECT_THROW(prismatic_generators(platonic(4, 3, 2.0, H)), TilerError);
}

TEST(Generators, Antiprismatic)
{
    auto a = antiprismatic_generators(*solve_kis_angle_condition(3, 3, 3).witness);
    EXPECT_EQ(a.generators.size(), 4u);
    EXPECT_EQ(a.kind, GroupKind::ReflectionRotation);
    auto b = antiprismatic_generators(*solve_kis_angle_condition(3, 4, 2).witness);
    EXPECT_EQ(b.generators.size(), 8u);
    EXPECT_THROW(antiprismatic_generators(kis_at(3, 3, 3, 0.5, H)), TilerError);
}

TEST(Orbit, SphericalCellCounts)
{
    EXPECT_EQ(cells(*solve_platonic_angle(4, 3, 3).witness, false), 8u);
    EXPECT_EQ(cells(*solve_platonic_angle(3, 3, 3).witness, false), 5u);
    EXPECT_EQ(cells(*solve_platonic_angle(3, 3, 4).witness, false), 16u);
    EXPECT_EQ(cells(*solve_platonic_angle(3, 4, 3).witness, false), 24u);
    EXPECT_EQ(cells(*solve_platonic_angle(5, 3, 3).witness, false), 120u);
    EXPECT_EQ(cells(*solve_kis_angle_condition(3, 3, 2).witness, true), 10u);
    EXPECT_EQ(cells(*solve_kis_angle_condition(4, 3, 2).witness, true), 48u);
}

TEST(Orbit, SixHundredCell)
{
    auto o = enumerate(prismatic_generators(*solve_platonic_angle(3, 3, 5).witness), {});
    EXPECT_FALSE(o.truncated);
    EXPECT_EQ(distinct_images(o, origin(S)).size(), 600u);
    EXPECT_EQ(o.elements.size(), 600u * 24u);
}

TEST(Orbit, DepthZero)
{
    auto o = enumerate(prismatic_generators(*solve_platonic_angle(4, 3, 5).witness), {0});
    ASSERT_EQ(o.elements.size(), 1u);
    EXPECT_TRUE(o.elements[0].m == Mat4::Identity());
}

TEST(Orbit, DepthLimitedGrowth)
{
    auto g = prismatic_generators(*solve_platonic_angle(4, 3, 5).witness);
    auto one = enumerate(g, {1});
    EXPECT_EQ(one.elements.size(), 7u);
    auto two = enumerate(g, {2});
    EXPECT_GT(two.elements.size(), one.elements.size());
    EXPECT_TRUE(two.truncated);
    auto capped = enumerate(g, {-1, 50});
    EXPECT_LE(capped.elements.size(), 50u);
    EXPECT_TRUE(capped.truncated);
}

TEST(Orbit, InfiniteGroupsDefaultToDepthFive)
{
    auto o = enumerate(prismatic_generators(*solve_platonic_angle(4, 3, 4).witness), {});
    EXPECT_EQ(o.depth, kDefaultDepth);
    EXPECT_TRUE(o.truncated);
}

TEST(Orbit, DeterministicAcrossThreads)
{
    auto g = prismatic_generators(*solve_platonic_angle(5, 3, 4).witness);
    auto a = enumerate(g, {3}, 1);
    auto b = enumerate(g, {3}, 8);
    ASSERT_EQ(a.elements.size(), b.elements.size());
    for (std::size_t i = 0; i < a.elements.size(); ++i)
        ASSERT_TRUE(a.elements[i].m == b.elements[i].m) << i;
}

TEST(Patch, MucubeSquares)
{
    auto P = pipeline(PatchKind::Prismatic, 4, 3, 4);
    EXPECT_EQ(P.patch.polygons.size(), 24u);
    for (const auto& poly : P.patch.polygons) {
        EXPECT_EQ(poly.vertices.size(), 4u);
        EXPECT_EQ(poly.role, 0);
    }
}

TEST(Patch, AntiprismTriangles)
{
    auto P = pipeline(PatchKind::Antiprismatic, 4, 3, 2);
    EXPECT_EQ(P.patch.polygons.size(), 6u * 8u);
    for (const auto& poly : P.patch.polygons)
        EXPECT_EQ(poly.vertices.size(), 3u);
}

TEST(Patch, KeepsArchimedeanFaces)
{
    auto P = pipeline(PatchKind::Prismatic, 3, 4, 5, 2, Base::Rectified);
    int kept = 0;
    for (const auto& poly : P.patch.polygons)
        kept += poly.role;
    EXPECT_EQ(kept, 6);
}

TEST(Surface, SphericalCube)
{
    auto P = pipeline(PatchKind::Prismatic, 4, 3, 3);
    auto s = build_surface(P.patch, P.orbit);
    EXPECT_EQ(s.faces.size(), 96u);
    EXPECT_EQ(s.vertices.size(), 64u);
    EXPECT_EQ(s.edges.size(), 192u);
    EXPECT_TRUE(s.closed());
    for (const auto& star : s.vertex_faces())
        EXPECT_EQ(star.size(), 6u);
}

TEST(Surface, SphericalTetrahedra)
{
    EXPECT_EQ(build_surface(pipeline(PatchKind::Prismatic, 3, 3, 3).patch,
                            pipeline(PatchKind::Prismatic, 3, 3, 3).orbit)
                  .faces.size(),
              30u);
    auto P4 = pipeline(PatchKind::Prismatic, 3, 3, 4);
    EXPECT_EQ(build_surface(P4.patch, P4.orbit).faces.size(), 96u);
    auto P5 = pipeline(PatchKind::Prismatic, 3, 3, 5);
    auto s5 = build_surface(P5.patch, P5.orbit);
    EXPECT_EQ(s5.faces.size(), 3600u);
    EXPECT_TRUE(s5.closed());
}

TEST(Surface, MucubeInteriorValency)
{
    auto P = pipeline(PatchKind::Prismatic, 4, 3, 4);
    auto s = build_surface(P.patch, P.orbit);
    const auto stars = s.vertex_faces();
    int interior = 0;
    for (int v = 0; v < static_cast<int>(s.vertices.size()); ++v)
        if (s.interior(v)) {
            ++interior;
            EXPECT_EQ(stars[v].size(), 6u);
        }
    EXPECT_GT(interior, 0);
    EXPECT_FALSE(s.closed());
}

TEST(Surface, AntiprismaticTetraValency)
{
    auto P = pipeline(PatchKind::Antiprismatic, 3, 3, 3);
    auto s = build_surface(P.patch, P.orbit);
    const auto stars = s.vertex_faces();
    int interior = 0;
    for (int v = 0; v < static_cast<int>(s.vertices.size()); ++v)
        if (s.interior(v)) {
            ++interior;
            EXPECT_EQ(stars[v].size(), 9u);
        }
    EXPECT_GT(interior, 0);
}

TEST(Surface, SphericalAntiprismsClose)
{
    for (auto [p, q] : {std::pair{4, 3}, {3, 3}}) {
        auto P = pipeline(PatchKind::Antiprismatic, p, q, 2);
        auto s = build_surface(P.patch, P.orbit);
        EXPECT_TRUE(s.closed()) << p << q;
        EXPECT_TRUE(s.orientable);
    }
}

TEST(Surface, WeldAmbiguity)
{
    FundamentalPatch P;
    P.space = E;
    const Vec4 a(0, 0, 0, 1), b(1, 0, 0, 1), c(0, 1, 0, 1), d(1.5e-7, 0, 0, 1), e(1, 0, 1, 1);
    P.polygons.push_back({{a, b, c}, 0});
    P.polygons.push_back({{d, b, e}, 0});
    OrbitSet o;
    o.space = E;
    o.elements.push_back(identity(E));
    o.prints.push_back(fingerprint(identity(E)));
    EXPECT_THROW(build_surface(P, o, 1e-7), TilerError);
    EXPECT_NO_THROW(build_surface(P, o, 1e-6));
}

TEST(Surface, Lookup)
{
    auto P = pipeline(PatchKind::Prismatic, 4, 3, 3);
    auto s = build_surface(P.patch, P.orbit);
    for (int f = 0; f < 5; ++f) {
        EXPECT_EQ(s.find_face(s.faces[f]), f);
        const auto& L = s.faces[f];
        EXPECT_EQ(s.faces_of_edge(L[0], L[1]).size(), 2u);
        EXPECT_EQ(s.find_vertex(s.vertices[L[0]]), L[0]);
    }
}
