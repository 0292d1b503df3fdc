#include "app.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace pf;
using pf::app::BuildConfig;
using pf::app::Built;

namespace {

BuildConfig config(PatchKind family, int p, int q, int n, Base base = Base::Platonic, int depth = 2)
{
    BuildConfig c;
    c.family = family;
    c.base = base;
    c.p = p;
    c.q = q;
    c.n = n;
    c.depth = depth;
    return c;
}

const Built& cached(PatchKind family, int p, int q, int n, Base base = Base::Platonic,
                    int depth = 2)
{
    static std::map<std::tuple<int, int, int, int, int, int>, Built> cache;
    const auto key = std::tuple{static_cast<int>(family), p, q, n, static_cast<int>(base), depth};
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, app::build(config(family, p, q, n, base, depth))).first;
    return it->second;
}

const auto P = PatchKind::Prismatic;
const auto A = PatchKind::Antiprismatic;

bool contains(const std::vector<int>& v, int x)
{
    return std::find(v.begin(), v.end(), x) != v.end();
}

void perturb(Surface& s, double by)
{
    int v = 0;
    while (!s.interior(v))
        ++v;
    Vec4 x = s.vertices[v];
    x[0] += by;
    s.vertices[v] = normalize_point(s.space, x);
}

Surface cube_boundary()
{
    Surface s;
    s.space = SpaceForm::Euclidean;
    for (int i = 0; i < 8; ++i)
        s.vertices.push_back(Vec4(i & 1, (i >> 1) & 1, (i >> 2) & 1, 1));
    s.faces = {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4}, {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}};
    s.face_element.assign(6, 0);
    s.face_role.assign(6, 0);
    s.finalize();
    return s;
}

}

TEST(Regularity, HyperbolicCubePrisms)
{
    const auto& b = cached(P, 4, 3, 5);
    auto r = verify_regular_faces(b.surface, 1e-8);
    EXPECT_TRUE(r.faces_regular);
    EXPECT_LT(r.edge_spread, 1e-8);
    EXPECT_TRUE(b.regularity.regular());
    EXPECT_EQ(b.regularity.valency, 6);
}

TEST(Regularity, PerturbedVertexFails)
{
    Surface s = cached(P, 4, 3, 5).surface;
    perturb(s, 1e-3);
    EXPECT_FALSE(verify_regular_faces(s, 1e-6).faces_regular);
}

TEST(Regularity, Mucube)
{
    const auto& b = cached(P, 4, 3, 4);
    EXPECT_TRUE(b.regularity.faces_regular);
    EXPECT_NEAR(b.regularity.edge_length, 1, 1e-12);
    EXPECT_LT(b.regularity.edge_spread, 1e-12);
    EXPECT_EQ(b.regularity.valency, 6);
    EXPECT_TRUE(b.regularity.figures_match);
}

TEST(Regularity, VertexFigureNegativeControl)
{
    Surface s = cached(P, 4, 3, 4).surface;
    perturb(s, 1e-3);
    RegularityReport r;
    verify_vertex_figures(s, r, 1e-6);
    EXPECT_FALSE(r.signatures_match && r.figures_match);
}

TEST(Regularity, AllSurfacesRegular)
{
    for (const auto* b : {&cached(P, 4, 3, 3), &cached(P, 3, 4, 5), &cached(P, 5, 3, 4),
                          &cached(A, 3, 3, 3), &cached(A, 4, 3, 2), &cached(A, 5, 3, 2),
                          &cached(P, 3, 4, 5, Base::Truncated)})
        EXPECT_TRUE(b->regularity.regular());
}

TEST(Quotient, Mucube)
{
    const auto& q = cached(P, 4, 3, 4).quotient;
    EXPECT_EQ(q.V, 8);
    EXPECT_EQ(q.E, 24);
    EXPECT_EQ(q.F, 12);
    EXPECT_EQ(q.genus, 3);
    EXPECT_TRUE(q.orientable);
}

TEST(Quotient, PrismaticOctahedron)
{
    const auto& q = cached(P, 3, 4, 5).quotient;
    EXPECT_EQ(std::tuple(q.V, q.E, q.F, q.genus), std::tuple(6, 24, 12, 4));
    EXPECT_EQ(q.valencies, (std::map<int, int>{{8, 6}}));
}

TEST(Quotient, AntiprismaticCube)
{
    const auto& q = cached(A, 4, 3, 2).quotient;
    EXPECT_EQ(std::tuple(q.V, q.E, q.F, q.genus), std::tuple(8, 36, 24, 3));
    EXPECT_EQ(q.valencies, (std::map<int, int>{{9, 8}}));
}

TEST(Quotient, NeedsDepth)
{
    EXPECT_THROW(app::build(config(P, 3, 4, 5, Base::Platonic, 0)), std::exception);
}

TEST(Cycles, OctahedronParity)
{
    const auto& sa = cached(P, 3, 4, 5).straight_ahead;
    EXPECT_TRUE(contains(sa, 3));
    EXPECT_TRUE(std::any_of(sa.begin(), sa.end(), [](int x) { return x % 2 == 0; }));
}

TEST(Cycles, AntiprismaticTetraPetrie)
{
    const auto& pc = cached(A, 3, 3, 3).petrie;
    EXPECT_TRUE(contains(pc, 6));
    EXPECT_TRUE(contains(pc, 8));
}

TEST(Cycles, CubeEquators)
{
    const Surface s = cube_boundary();
    ASSERT_TRUE(s.closed());
    auto sa = straight_ahead_cycles(flag_map(s));
    EXPECT_EQ(sa, std::vector<int>(6, 4));
    auto q = complex_of(flag_map(s));
    EXPECT_EQ(std::tuple(q.V, q.E, q.F, q.genus), std::tuple(8, 12, 6, 0));
}

TEST(Cycles, OddGonalityIsAnError)
{
    EXPECT_THROW(straight_ahead_cycles(cached(A, 4, 3, 2).quotient.map), AnalysisError);
}

TEST(Consistency, Examples)
{
    Expectation ico{.faces = 30, .genus = 10, .valency = 10, .gonality = 4};
    EXPECT_TRUE(genus_consistency(ico).pass);
    EXPECT_TRUE(genus_consistency(cached(P, 3, 5, 3).quotient, ico).pass);

    Expectation dod{.faces = 30, .genus = 6, .valency = 6, .gonality = 4};
    EXPECT_TRUE(genus_consistency(dod).pass);
    EXPECT_TRUE(genus_consistency(cached(P, 5, 3, 4).quotient, dod).pass);

    Expectation arp{.faces = 80, .genus = 6, .valency = 8, .gonality = 3};
    EXPECT_TRUE(genus_consistency(arp).pass);
    EXPECT_TRUE(genus_consistency(cached(A, 5, 3, 2, Base::Rectified).quotient, arp).pass);

    Expectation bad{.faces = 30, .genus = 9, .valency = 10, .gonality = 4};
    auto c = genus_consistency(bad);
    EXPECT_FALSE(c.pass);
    EXPECT_EQ(c.violated, "V - E + F = 2 - 2g");

    Expectation frac{.faces = 30, .valency = 7, .gonality = 4};
    EXPECT_EQ(genus_consistency(frac).violated, "q V = 2 E has no integer solution");

    Expectation wrong{.genus = 5};
    EXPECT_EQ(genus_consistency(cached(A, 5, 3, 2).quotient, wrong).violated, "genus");
}

TEST(ContentSymmetries, OctahedralPatch)
{
    const auto& b = cached(P, 3, 4, 5);
    EXPECT_EQ(content_symmetries(*b.surface.patch).size(), 48u);
}
