#include "app.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

using namespace pf;
using pf::app::BuildConfig;

namespace {

constexpr double pi = std::numbers::pi;
const auto H = SpaceForm::Hyperbolic;
const auto S = SpaceForm::Spherical;
const auto E = SpaceForm::Euclidean;

ModelPoint random_point(std::mt19937& rng, SpaceForm s)
{
    std::uniform_real_distribution<double> u(-1, 1);
    Vec3 x;
    do
        x = Vec3(u(rng), u(rng), u(rng));
    while (x.norm() > 0.95);
    if (s != H)
        x *= 2;
    return ModelPoint::ordinary(x);
}

std::vector<GroupSpec> sample_groups()
{
    return {prismatic_generators(*solve_platonic_angle(4, 3, 5).witness),
            prismatic_generators(*solve_platonic_angle(5, 3, 4).witness),
            prismatic_generators(*solve_platonic_angle(3, 3, 5).witness),
            prismatic_generators(*solve_platonic_angle(4, 3, 4).witness),
            antiprismatic_generators(*solve_kis_angle_condition(3, 3, 3).witness),
            antiprismatic_generators(*solve_kis_angle_condition(4, 3, 2).witness),
            antiprismatic_generators(*solve_kis_angle_condition(5, 3, 2).witness)};
}

BuildConfig config(PatchKind f, int p, int q, int n, Base b = Base::Platonic, int depth = 2)
{
    BuildConfig c;
    c.family = f;
    c.base = b;
    c.p = p;
    c.q = q;
    c.n = n;
    c.depth = depth;
    return c;
}

std::vector<BuildConfig> examples()
{
    const auto P = PatchKind::Prismatic, A = PatchKind::Antiprismatic;
    return {config(P, 4, 3, 4, Base::Platonic, 3), config(P, 4, 3, 3), config(P, 3, 3, 4),
            config(P, 4, 3, 5),  config(P, 3, 4, 5),
            config(P, 3, 4, 5, Base::Rectified), config(P, 3, 4, 5, Base::Truncated),
            config(P, 5, 3, 4),  config(P, 3, 5, 3),
            config(A, 3, 3, 3, Base::Platonic, 3), config(A, 4, 3, 2), config(A, 3, 4, 2, Base::Platonic, 3),
            config(A, 5, 3, 2),  config(A, 5, 3, 2, Base::Rectified)};
}

}

TEST(Property, IsometriesPreserveDistance)
{
    std::mt19937 rng(2024);
    for (const auto& g : sample_groups()) {
        auto o = enumerate(g, {3, 400});
        std::uniform_int_distribution<std::size_t> pick(0, o.elements.size() - 1);
        for (int i = 0; i < 1000; ++i) {
            const auto& h = o.elements[pick(rng)];
            const auto x = random_point(rng, g.space), y = random_point(rng, g.space);
            const auto hx = apply(h, x), hy = apply(h, y);
            if (hx.kind != ModelPoint::Kind::Ordinary || hy.kind != ModelPoint::Kind::Ordinary)
                continue;
            const double d = distance(g.space, x, y);
            ASSERT_NEAR(distance(g.space, hx, hy), d, 1e-9 * std::max(1.0, d));
        }
    }
}

TEST(Property, ReflectionsAreInvolutions)
{
    for (const auto& g : sample_groups()) {
        if (g.kind != GroupKind::Reflection)
            continue;
        for (const auto& r : g.generators)
            EXPECT_LT((compose(r, r).m - Mat4::Identity()).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(Property, PrismaticEdgeRelations)
{
    for (auto [p, q, n] : {std::tuple{4, 3, 5}, {5, 3, 4}, {3, 5, 3}, {3, 3, 5}, {4, 3, 4},
                           {3, 4, 7}}) {
        const Solid f = *solve_platonic_angle(p, q, n).witness;
        auto g = prismatic_generators(f);
        for (const auto& e : f.edges) {
            const Isometry rr = compose(g.generators[e.f0], g.generators[e.f1]);
            Isometry x = identity(f.spec.space);
            for (int k = 0; k < n; ++k)
                x = compose(x, rr);
            EXPECT_LT((x.m - Mat4::Identity()).cwiseAbs().maxCoeff(), 1e-8) << p << q << n;
        }
    }
}

TEST(Property, HyperbolicPlanesOrthogonalToBoundary)
{
    for (auto [p, q, a] : {std::tuple{4, 3, 2.2}, {3, 4, 1.4}, {5, 3, 1.3}, {3, 5, 2.0}}) {
        for (const auto& f : platonic(p, q, a, H).faces) {
            const auto& sp = f.plane.sphere();
            EXPECT_NEAR(sp.radius * sp.radius, sp.center.squaredNorm() - 1, 1e-10);
        }
    }
}

TEST(Property, ReflectionFixesItsPlane)
{
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-1, 1);
    const GeodesicPlane pl = plane_from_center(H, Vec3(1.3, 0.4, -0.2));
    const auto r = reflect(pl);
    const auto& sp = pl.sphere();
    int tested = 0;
    while (tested < 100) {
        Vec3 d(u(rng), u(rng), u(rng));
        const Vec3 x = sp.center + sp.radius * d.normalized();
        if (x.norm() >= 0.999)
            continue;
        ++tested;
        EXPECT_LT((apply(r, ModelPoint::ordinary(x)).coords - x).norm(), 1e-10);
    }
    const GeodesicPlane sph = plane_from_center(S, Vec3(0.5, 0.1, 0.2));
    const auto rs = reflect(sph);
    const Vec4 c = plane_covector(sph);
    for (int i = 0; i < 100; ++i) {
        Vec4 y(u(rng), u(rng), u(rng), u(rng));
        y -= c * c.dot(y) / c.squaredNorm();
        const auto x = project(S, y);
        EXPECT_LT((apply(rs, x).coords - x.coords).norm(), 1e-10 * std::max(1.0, x.coords.norm()));
    }
}

TEST(Property, SphericalChartRoundTrip)
{
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(-10, 10);
    for (int i = 0; i < 1000; ++i) {
        Vec3 x(u(rng), u(rng), u(rng));
        if (x.norm() > 10)
            continue;
        const auto y = project(S, lift(S, ModelPoint::ordinary(x)));
        EXPECT_LT((y.coords - x).norm(), 1e-12 * std::max(1.0, x.squaredNorm()));
    }
}

TEST(Property, IntersectionAngleSymmetric)
{
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-3, 3);
    int n = 0;
    while (n < 200) {
        const Vec3 a(u(rng), u(rng), u(rng)), b(u(rng), u(rng), u(rng));
        if (a.norm() <= 1.01 || b.norm() <= 1.01)
            continue;
        const auto x = plane_from_center(H, a), y = plane_from_center(H, b);
        const auto xy = intersection_angle(x, y), yx = intersection_angle(y, x);
        ASSERT_EQ(xy.has_value(), yx.has_value());
        if (xy)
            EXPECT_NEAR(*xy, *yx, 1e-14);
        ++n;
    }
}

TEST(Property, ReportsIdenticalAcrossThreadCounts)
{
    for (const auto& c : {config(PatchKind::Prismatic, 5, 3, 4, Base::Platonic, 3),
                          config(PatchKind::Antiprismatic, 5, 3, 2),
                          config(PatchKind::Prismatic, 3, 3, 5)}) {
        const auto one = app::report_json(app::build(c, 1)).dump();
        const auto many = app::report_json(app::build(c, 8)).dump();
        EXPECT_EQ(one, many);
        EXPECT_EQ(app::obj_text(app::build(c, 1)), app::obj_text(app::build(c, 5)));
    }
}

TEST(Property, EulerAndDoubleCounting)
{
    for (const auto& c : examples()) {
        const auto b = app::build(c);
        const auto& q = b.quotient;
        EXPECT_EQ(q.V - q.E + q.F, q.euler);
        EXPECT_EQ(q.euler, q.orientable ? 2 - 2 * q.genus : 2 - q.genus);
        int vs = 0, fs = 0;
        for (auto [k, m] : q.valencies)
            vs += k * m;
        for (auto [k, m] : q.gonalities)
            fs += k * m;
        EXPECT_EQ(vs, 2 * q.E);
        EXPECT_EQ(fs, 2 * q.E);
        if (!b.straight_ahead.empty()) {
            int sum = 0;
            for (int x : b.straight_ahead)
                sum += x;
            EXPECT_EQ(sum, 2 * q.E);
        }
        for (const auto& ch : app::checks(b))
            EXPECT_TRUE(ch.pass) << ch.name << " " << c.p << c.q << c.n;
        if (b.surface.closed()) {
            const auto& s = b.surface;
            int vsum = 0, fsum = 0;
            for (const auto& star : s.vertex_faces())
                vsum += static_cast<int>(star.size());
            for (const auto& f : s.faces)
                fsum += static_cast<int>(f.size());
            EXPECT_EQ(vsum, fsum);
            EXPECT_EQ(fsum, 2 * static_cast<int>(s.edges.size()));
        }
    }
}

TEST(Property, QuotientIndependentOfDepth)
{
    const auto P = PatchKind::Prismatic, A = PatchKind::Antiprismatic;
    for (const auto& c : {config(P, 4, 3, 5), config(P, 3, 4, 5), config(P, 5, 3, 4),
                          config(A, 5, 3, 2), config(P, 4, 3, 4)}) {
        auto d3 = c;
        d3.depth = 3;
        const auto a = app::build(c).quotient, b = app::build(d3).quotient;
        EXPECT_EQ(std::tuple(a.V, a.E, a.F, a.genus, a.valencies),
                  std::tuple(b.V, b.E, b.F, b.genus, b.valencies));
    }
}

TEST(Property, OctahedralQuotientsAreNotPlatonic)
{
    for (Base base : {Base::Platonic, Base::Rectified, Base::Truncated}) {
        const auto b = app::build(config(PatchKind::Prismatic, 3, 4, 5, base));
        const std::set<int> lengths(b.straight_ahead.begin(), b.straight_ahead.end());
        EXPECT_GE(lengths.size(), 2u) << to_string(base);
    }
}

TEST(Property, SolverWitnessesIndependentlyChecked)
{
    for (int n = 5; n <= 9; ++n) {
        const auto r = solve_platonic_angle(4, 3, n);
        const Solid s = platonic(4, 3, r.value, H);
        const auto& e = s.edges[0];
        const auto ang = intersection_angle(s.faces[e.f0].plane, s.faces[e.f1].plane);
        ASSERT_TRUE(ang.has_value());
        EXPECT_NEAR(*ang, 2 * pi / n, 1e-9);
    }
    const auto k = solve_kis_angle_condition(3, 4, 3);
    const auto again = kis_angles_at(3, 4, 3, k.inradius, H);
    EXPECT_NEAR(again.alpha + 2 * again.beta + 2 * again.gamma, 2 * pi, 1e-9);
}
