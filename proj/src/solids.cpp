#include "polyform/solids.hpp"

#include "polyform/bisect.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <map>
#include <mutex>

namespace pf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kPhi = (1 + std::sqrt(5.0)) / 2;

std::vector<Vec3> cube_faces()
{
    std::vector<Vec3> v;
    for (int i = 0; i < 3; ++i)
        for (int sg : {1, -1}) {
            Vec3 x = Vec3::Zero();
            x[i] = sg;
            v.push_back(x);
        }
    return v;
}

std::vector<Vec3> corners()
{
    std::vector<Vec3> v;
    for (int a : {1, -1})
        for (int b : {1, -1})
            for (int c : {1, -1})
                v.push_back(Vec3(a, b, c).normalized());
    return v;
}

std::vector<Vec3> tetra_dirs()
{
    return {Vec3(1, 1, 1).normalized(), Vec3(1, -1, -1).normalized(),
            Vec3(-1, 1, -1).normalized(), Vec3(-1, -1, 1).normalized()};
}

std::vector<Vec3> cyclic(const std::vector<Vec3>& seeds)
{
    std::vector<Vec3> v;
    for (const Vec3& s : seeds)
        for (int k = 0; k < 3; ++k)
            v.push_back(Vec3(s[k % 3], s[(k + 1) % 3], s[(k + 2) % 3]).normalized());
    return v;
}

std::vector<Vec3> icosa_vertices()
{
    std::vector<Vec3> seeds;
    for (int a : {1, -1})
        for (int b : {1, -1})
            seeds.push_back(Vec3(0, a, b * kPhi));
    return cyclic(seeds);
}

// centers of the icosahedron's triangles
std::vector<Vec3> dodeca_vertices()
{
    const std::vector<Vec3> ico = icosa_vertices();
    double near = -2;
    for (std::size_t i = 1; i < ico.size(); ++i)
        near = std::max(near, ico[0].dot(ico[i]));
    auto adjacent = [&](std::size_t i, std::size_t j) { return ico[i].dot(ico[j]) > near - 1e-9; };
    std::vector<Vec3> v;
    for (std::size_t i = 0; i < ico.size(); ++i)
        for (std::size_t j = i + 1; j < ico.size(); ++j)
            for (std::size_t k = j + 1; k < ico.size(); ++k)
                if (adjacent(i, j) && adjacent(j, k) && adjacent(i, k))
                    v.push_back((ico[i] + ico[j] + ico[k]).normalized());
    return v;
}

std::vector<int> sort_around(const Vec3& axis, const std::vector<Vec3>& dirs,
                             std::vector<int> ids)
{
    const Vec3 ref = dirs[ids.front()];
    const Vec3 e1 = (ref - ref.dot(axis) * axis).normalized();
    const Vec3 e2 = axis.cross(e1);
    std::vector<std::pair<double, int>> keyed;
    for (int i : ids) {
        double ang = std::atan2(dirs[i].dot(e2), dirs[i].dot(e1));
        if (ang < -1e-9)
            ang += 2 * M_PI;
        keyed.push_back({ang, i});
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<int> out;
    for (auto& k : keyed)
        out.push_back(k.second);
    return out;
}

PlatonicType make_type(int p, int q)
{
    PlatonicType T;
    T.p = p;
    T.q = q;
    if (p == 4 && q == 3) {
        T.face_dirs = cube_faces();
        T.vertex_dirs = corners();
    } else if (p == 3 && q == 4) {
        T.face_dirs = corners();
        T.vertex_dirs = cube_faces();
    } else if (p == 3 && q == 3) {
        T.face_dirs = tetra_dirs();
        for (const Vec3& x : tetra_dirs())
            T.vertex_dirs.push_back(-x);
    } else if (p == 5 && q == 3) {
        T.face_dirs = icosa_vertices();
        T.vertex_dirs = dodeca_vertices();
    } else if (p == 3 && q == 5) {
        T.face_dirs = dodeca_vertices();
        T.vertex_dirs = icosa_vertices();
    } else {
        throw NonexistenceError("no Platonic solid {" + std::to_string(p) + "," +
                                std::to_string(q) + "}");
    }
    const int F = static_cast<int>(T.face_dirs.size());
    const int V = static_cast<int>(T.vertex_dirs.size());
    double best = -2;
    for (const Vec3& u : T.face_dirs)
        for (const Vec3& w : T.vertex_dirs)
            best = std::max(best, u.dot(w));
    T.theta = std::acos(std::min(1.0, best));
    std::vector<std::vector<int>> fv(F), vf(V);
    for (int f = 0; f < F; ++f)
        for (int v = 0; v < V; ++v)
            if (T.face_dirs[f].dot(T.vertex_dirs[v]) > best - 1e-9) {
                fv[f].push_back(v);
                vf[v].push_back(f);
            }
    for (int f = 0; f < F; ++f)
        T.face_loop.push_back(sort_around(T.face_dirs[f], T.vertex_dirs, fv[f]));
    for (int v = 0; v < V; ++v)
        T.vertex_cycle.push_back(sort_around(T.vertex_dirs[v], T.face_dirs, vf[v]));
    for (int f = 0; f < F; ++f)
        for (int g = f + 1; g < F; ++g) {
            std::vector<int> common;
            std::set_intersection(fv[f].begin(), fv[f].end(), fv[g].begin(), fv[g].end(),
                                  std::back_inserter(common));
            if (common.size() == 2)
                T.edges.push_back({f, g, common[0], common[1]});
        }
    T.chi = std::acos(std::min(1.0, T.face_dirs[T.edges[0].f0].dot(T.edge_mid(0))));
    return T;
}

// inradius t of the face planes <-> distance along a direction making angle
// phi with the face normal, to where it meets the face plane
double radial(SpaceForm s, double t, double phi)
{
    const double c = std::cos(phi);
    switch (s) {
    case SpaceForm::Spherical: return std::atan(std::tan(t) / c);
    case SpaceForm::Hyperbolic: {
        const double x = std::tanh(t) / c;
        return x < 1 ? std::atanh(x) : kInf;
    }
    case SpaceForm::Euclidean: return t / c;
    }
    return t;
}

double lorentz(const Vec4& x, const Vec4& y)
{
    return x.head<3>().dot(y.head<3>()) - x[3] * y[3];
}

Face make_face(SpaceForm s, const Vec4& c, const Vec3& dir, int gon, int orbit,
               std::vector<int> loop)
{
    Face f;
    f.covector = normalize_plane(s, c);
    f.plane = plane_shape(s, f.covector);
    f.direction = dir;
    f.gonality = gon;
    f.orbit = orbit;
    f.loop = std::move(loop);
    return f;
}

Edge make_edge(SpaceForm s, const std::vector<Face>& faces, int f0, int f1, int v0, int v1,
               int orbit)
{
    Edge e{f0, f1, v0, v1, orbit, std::nullopt};
    e.dihedral = interior_angle(s, faces[f0].covector, faces[f1].covector);
    return e;
}

// frames along the parent edges: midpoint, unit tangent toward the edge's v1
// endpoint, and distance from midpoint to vertex (infinite when the vertex
// is not an ordinary point)
struct EdgeFrame {
    Vec4 mid, dir;
    double half;
};

std::vector<EdgeFrame> edge_frames(const PlatonicType& T, double t, SpaceForm s)
{
    const double te = radial(s, t, T.chi);
    if (!std::isfinite(te))
        throw DomainError("adjacent faces do not meet");
    const double R = radial(s, t, T.theta);
    std::vector<EdgeFrame> out;
    for (int e = 0; e < static_cast<int>(T.edges.size()); ++e) {
        const Vec3 m = T.edge_mid(e);
        const Vec3 w1 = T.vertex_dirs[T.edges[e].v1];
        Vec4 d;
        d << (w1 - w1.dot(m) * m).normalized(), 0;
        EdgeFrame fr{point_at(s, m, te), d, kInf};
        if (std::isfinite(R))
            fr.half = point_distance(s, fr.mid, point_at(s, w1, R));
        out.push_back(fr);
    }
    return out;
}

Vec4 cut(SpaceForm s, const PlatonicType& T, const std::vector<EdgeFrame>& fr, int e, int v,
         double sigma)
{
    const double sg = T.edges[e].v1 == v ? 1.0 : -1.0;
    return along(s, fr[e].mid, sg * fr[e].dir, sigma);
}

Vec4 ideal_end(const PlatonicType& T, const std::vector<EdgeFrame>& fr, int e, int v)
{
    const double sg = T.edges[e].v1 == v ? 1.0 : -1.0;
    return fr[e].mid + sg * fr[e].dir;
}

// the two parent edges of face f at vertex v
std::pair<int, int> edges_at(const PlatonicType& T, int f, int v)
{
    const auto& loop = T.face_loop[f];
    const int k = static_cast<int>(std::find(loop.begin(), loop.end(), v) - loop.begin());
    const int n = static_cast<int>(loop.size());
    const int prev = loop[(k + n - 1) % n];
    const int next = loop[(k + 1) % n];
    int ep = -1, en = -1;
    for (int e = 0; e < static_cast<int>(T.edges.size()); ++e) {
        const auto& E = T.edges[e];
        if (E.f0 != f && E.f1 != f)
            continue;
        if ((E.v0 == v && E.v1 == prev) || (E.v1 == v && E.v0 == prev))
            ep = e;
        if ((E.v0 == v && E.v1 == next) || (E.v1 == v && E.v0 == next))
            en = e;
    }
    return {ep, en};
}

// parent edges around vertex v in the ccw order of its face cycle
std::vector<int> edges_around(const PlatonicType& T, int v)
{
    const auto& cyc = T.vertex_cycle[v];
    std::vector<int> out;
    for (std::size_t k = 0; k < cyc.size(); ++k)
        out.push_back(T.edge_between(cyc[k], cyc[(k + 1) % cyc.size()]));
    return out;
}

double hyperideal_gap(const PlatonicType& T, const std::vector<EdgeFrame>& fr)
{
    const int v = 0;
    const auto around = edges_around(T, v);
    const Vec4 a = ideal_end(T, fr, around[0], v);
    const Vec4 b = ideal_end(T, fr, around[1], v);
    const double x = -lorentz(a, b) / 2;
    return x > 0 ? -std::log(x) : std::numeric_limits<double>::infinity();
}

double truncation_depth(const PlatonicType& T, const std::vector<EdgeFrame>& fr, SpaceForm s)
{
    const int v = 0;
    const auto around = edges_around(T, v);
    auto h = [&](double sigma) {
        return 2 * sigma - point_distance(s, cut(s, T, fr, around[0], v, sigma),
                                          cut(s, T, fr, around[1], v, sigma));
    };
    double hi = fr[around[0]].half;
    if (!std::isfinite(hi)) {
        if (s != SpaceForm::Hyperbolic)
            throw DomainError("parent vertex is not finite");
        const double limit = hyperideal_gap(T, fr);
        if (!(limit > 1e-12))
            throw DomainError("regular truncation does not exist for this parent");
        hi = 1;
        while (h(hi) <= 0) {
            hi *= 2;
            if (hi > 40)
                throw DomainError("regular truncation depth out of range");
        }
    }
    return bisect(h, 0.0, hi, 1e-15, 200, "truncation depth").x;
}

Vec3 chart_witness(SpaceForm s)
{
    (void)s;
    return Vec3::Zero();
}

Classification classify_platonic(int p, int q, double t, SpaceForm s)
{
    if (s != SpaceForm::Hyperbolic)
        return Classification::Finite;
    const PlatonicType& T = platonic_type(p, q);
    const double k = std::tanh(t) / std::cos(T.theta);
    if (std::abs(1 - k * k) <= 1e-10)
        return Classification::Ideal;
    if (k < 1)
        return Classification::Finite;
    const Vec4 c0 = plane_at(s, T.face_dirs[T.edges[0].f0], t);
    const Vec4 c1 = plane_at(s, T.face_dirs[T.edges[0].f1], t);
    return interior_angle(s, c0, c1) ? Classification::Hyperideal : Classification::Edgeless;
}

Pyramid finish_pyramid(Pyramid py)
{
    const SpaceForm s = py.space;
    if (!py.sides.empty())
        py.gamma = *interior_angle(s, py.base, py.sides[0]);
    if (py.ideal_base || py.base_vertices.size() < 2) {
        if (py.ideal_base)
            py.base_edge_length = kInf;
    } else {
        py.base_edge_length = point_distance(s, py.base_vertices[0], py.base_vertices[1]);
    }
    return py;
}

Pyramid subdivision_pyramid(int q, int n, double tp, SpaceForm s)
{
    const Solid P = platonic_at(q, n, tp, s);
    if (P.classification != Classification::Finite || !P.vertices)
        throw DomainError("subdivided solid is not finite");
    const Face& f0 = P.faces[0];
    const Mat3 R =
        Eigen::Quaterniond::FromTwoVectors(f0.direction, -Vec3::UnitZ()).toRotationMatrix();
    Mat4 M = Mat4::Identity();
    M.topLeftCorner<3, 3>() = R;
    Pyramid py;
    py.space = s;
    py.kind = Pyramid::Kind::Subdivision;
    py.q = q;
    py.n = n;
    py.base = M * f0.covector;
    const Vec4 inside = point_at(s, -Vec3::UnitZ(), tp / 2);
    const Vec4 o = origin(s);
    for (int v : f0.loop)
        py.base_vertices.push_back(M * (*P.vertices)[v].point);
    for (int k = 0; k < q; ++k)
        py.sides.push_back(plane_through(s, o, py.base_vertices[k],
                                         py.base_vertices[(k + 1) % q], inside));
    return finish_pyramid(py);
}

double circumradius_unit(int q)
{
    return 1 / (2 * std::sin(M_PI / q));
}

Pyramid ideal_apex_pyramid(int q, int n, double rho, SpaceForm s)
{
    Pyramid py;
    py.space = s;
    py.kind = Pyramid::Kind::IdealApex;
    py.q = q;
    py.n = n;
    const double Rc = circumradius_unit(q);
    std::vector<Vec3> poly;
    for (int k = 0; k < q; ++k)
        poly.push_back(Rc * Vec3(std::cos(2 * M_PI * k / q), std::sin(2 * M_PI * k / q), 0));
    if (s == SpaceForm::Euclidean) {
        // right prism over the polygon scaled to edge length rho
        py.s = rho;
        py.base << 0, 0, -1, 0;
        for (int k = 0; k < q; ++k) {
            const Vec3 a = rho * poly[k], b = rho * poly[(k + 1) % q];
            const Vec3 nrm = ((a + b) / 2).normalized();
            Vec4 c;
            c << nrm, -nrm.dot(a);
            py.sides.push_back(c);
            Vec4 x;
            x << a, 1;
            py.base_vertices.push_back(x);
        }
        return finish_pyramid(py);
    }
    if (s != SpaceForm::Hyperbolic)
        throw NonexistenceError("pyramid with ideal apex needs Euclidean or hyperbolic space");
    if (!(rho > Rc))
        throw DomainError("hemisphere radius must exceed the polygon circumradius");
    py.r = rho;
    py.s = rho;
    // half-space chart, then to the ball; a half turn about x puts the apex at +z
    Mat4 flip = Mat4::Identity();
    flip(1, 1) = flip(2, 2) = -1;
    auto ball = [&](const Vec3& x) {
        return Vec4(flip * lift(s, halfspace_ball_conversion(ModelPoint::ordinary(x),
                                                             Chart::ToBall)));
    };
    const Vec4 inside = ball(Vec3(0, 0, 2 * rho));
    for (int k = 0; k < q; ++k) {
        const Vec3 a = poly[k], b = poly[(k + 1) % q];
        py.sides.push_back(plane_through(s, ball(a + Vec3(0, 0, 1)), ball(b + Vec3(0, 0, 1)),
                                         ball(a + Vec3(0, 0, 2)), inside));
    }
    std::vector<Vec4> on;
    for (int k = 0; k < 3; ++k) {
        const double ph = 2 * M_PI * k / 3;
        on.push_back(ball(rho * Vec3(std::cos(ph) * std::sqrt(0.5), std::sin(ph) * std::sqrt(0.5),
                                     std::sqrt(0.5))));
    }
    py.base = plane_through(s, on[0], on[1], on[2], inside);
    const double h = std::sqrt(rho * rho - Rc * Rc);
    for (int k = 0; k < q; ++k)
        py.base_vertices.push_back(normalize_point(s, ball(poly[k] + Vec3(0, 0, h))));
    return finish_pyramid(py);
}

Pyramid column_at_distance(int q, int n, double d)
{
    const SpaceForm s = SpaceForm::Hyperbolic;
    Pyramid py;
    py.space = s;
    py.kind = Pyramid::Kind::Column;
    py.q = q;
    py.n = n;
    py.r = column_radius(q, n);
    py.s = d > 0 ? 1 / std::tanh(d) : kInf;
    py.base = plane_at(s, -Vec3::UnitZ(), d);
    for (int k = 0; k < q; ++k) {
        const double ph = 2 * M_PI * k / q;
        py.sides.push_back(plane_covector(
            plane_from_center(s, py.r * Vec3(std::cos(ph), std::sin(ph), 0))));
    }
    const Vec4 o = origin(s);
    for (int k = 0; k < q; ++k) {
        const Vec4 x = cross4(py.sides[k], py.sides[(k + 1) % q], py.base);
        const Vec4 y = x[3] < 0 ? Vec4(-x) : x;
        const double klein = y.head<3>().norm() / y[3];
        if (std::abs(1 - klein * klein) <= 1e-10) {
            py.ideal_base = true;
            py.base_vertices.push_back(y / y[3]);
        } else if (klein > 1) {
            throw DomainError("base plane below the ideal-base threshold");
        } else {
            py.base_vertices.push_back(meet(s, py.sides[k], py.sides[(k + 1) % q], py.base, o));
        }
    }
    return finish_pyramid(py);
}

double column_vertex_klein(int q, int n, double d)
{
    const SpaceForm s = SpaceForm::Hyperbolic;
    const double r = column_radius(q, n);
    const Vec4 a = plane_covector(plane_from_center(s, r * Vec3(1, 0, 0)));
    const double ph = 2 * M_PI / q;
    const Vec4 b =
        plane_covector(plane_from_center(s, r * Vec3(std::cos(ph), std::sin(ph), 0)));
    Vec4 x = cross4(a, b, plane_at(s, -Vec3::UnitZ(), d));
    if (x[3] < 0)
        x = -x;
    return x.head<3>().norm() / x[3];
}

double column_ideal_distance(int q, int n)
{
    double hi = 1;
    while (column_vertex_klein(q, n, hi) < 1)
        hi *= 2;
    return bisect([&](double d) { return column_vertex_klein(q, n, d) - 1; }, 0.0, hi, 1e-15)
        .x;
}

double platonic_edge_at(int p, int q, double t, SpaceForm s)
{
    const PlatonicType& T = platonic_type(p, q);
    const double R = radial(s, t, T.theta);
    if (!std::isfinite(R))
        return kInf;
    const auto& E = T.edges[0];
    return point_distance(s, point_at(s, T.vertex_dirs[E.v0], R),
                          point_at(s, T.vertex_dirs[E.v1], R));
}

}

std::string to_string(Family f)
{
    switch (f) {
    case Family::Platonic: return "platonic";
    case Family::Truncated: return "truncated";
    case Family::Rectified: return "rectified";
    case Family::Pyramid: return "pyramid";
    case Family::Kis: return "kis";
    }
    return "?";
}

std::string to_string(Classification c)
{
    switch (c) {
    case Classification::Finite: return "finite";
    case Classification::Ideal: return "ideal";
    case Classification::Hyperideal: return "hyperideal";
    case Classification::Edgeless: return "edgeless";
    case Classification::NotApplicable: return "not_applicable";
    }
    return "?";
}

Vec3 PlatonicType::edge_mid(int e) const
{
    return (vertex_dirs[edges[e].v0] + vertex_dirs[edges[e].v1]).normalized();
}

int PlatonicType::edge_between(int a, int b) const
{
    for (int e = 0; e < static_cast<int>(edges.size()); ++e)
        if ((edges[e].f0 == a && edges[e].f1 == b) || (edges[e].f0 == b && edges[e].f1 == a))
            return e;
    return -1;
}

bool is_platonic(int p, int q)
{
    return (p == 3 && q == 3) || (p == 4 && q == 3) || (p == 3 && q == 4) ||
           (p == 5 && q == 3) || (p == 3 && q == 5);
}

const PlatonicType& platonic_type(int p, int q)
{
    static std::mutex mu;
    static std::map<std::pair<int, int>, PlatonicType> cache;
    if (!is_platonic(p, q))
        throw NonexistenceError("no Platonic solid {" + std::to_string(p) + "," +
                                std::to_string(q) + "}");
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({p, q});
    if (it == cache.end())
        it = cache.emplace(std::make_pair(p, q), make_type(p, q)).first;
    return it->second;
}

std::vector<int> Solid::faces_in_orbit(int orbit) const
{
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(faces.size()); ++i)
        if (faces[i].orbit == orbit)
            out.push_back(i);
    return out;
}

double Solid::edge_length(const Edge& e) const
{
    if (!vertices || e.v0 < 0 || e.v1 < 0)
        return kInf;
    const Vec4& a = (*vertices)[e.v0].point;
    const Vec4& b = (*vertices)[e.v1].point;
    if (spec.space == SpaceForm::Hyperbolic &&
        (std::abs(lorentz(a, a)) < 1e-9 || std::abs(lorentz(b, b)) < 1e-9))
        return kInf;
    return point_distance(spec.space, a, b);
}

std::vector<GeodesicPlane> Pyramid::side_planes() const
{
    std::vector<GeodesicPlane> out;
    for (const Vec4& c : sides)
        out.push_back(plane_shape(space, c));
    return out;
}

double platonic_inradius(int p, int q, double a, SpaceForm s)
{
    const PlatonicType& T = platonic_type(p, q);
    switch (s) {
    case SpaceForm::Hyperbolic:
        if (!(a > 1))
            throw DomainError("hyperbolic parameter must exceed 1");
        return std::atanh(1 / a);
    case SpaceForm::Spherical: {
        if (!(a > 0 && a < 1))
            throw DomainError("spherical parameter must lie in (0,1)");
        const double R = 2 * std::atan(a);
        return std::atan(std::tan(R) * std::cos(T.theta));
    }
    case SpaceForm::Euclidean:
        if (!(a > 0))
            throw DomainError("edge length must be positive");
        return a / (2 * std::tan(T.theta) * std::sin(M_PI / p));
    }
    return 0;
}

double platonic_parameter(int p, int q, double t, SpaceForm s)
{
    const PlatonicType& T = platonic_type(p, q);
    switch (s) {
    case SpaceForm::Hyperbolic: return 1 / std::tanh(t);
    case SpaceForm::Spherical: return std::tan(radial(s, t, T.theta) / 2);
    case SpaceForm::Euclidean: return 2 * t * std::tan(T.theta) * std::sin(M_PI / p);
    }
    return 0;
}

double platonic_edge(int p, int q, double t, SpaceForm s)
{
    return platonic_edge_at(p, q, t, s);
}

Solid platonic_at(int p, int q, double t, SpaceForm s)
{
    const PlatonicType& T = platonic_type(p, q);
    Solid S;
    S.spec = {p, q, Family::Platonic, platonic_parameter(p, q, t, s), s, 0};
    S.inradius = t;
    S.witness = chart_witness(s);
    S.classification = classify_platonic(p, q, t, s);
    const bool with_vertices = S.classification == Classification::Finite ||
                               S.classification == Classification::Ideal;
    for (int f = 0; f < static_cast<int>(T.face_dirs.size()); ++f)
        S.faces.push_back(make_face(s, plane_at(s, T.face_dirs[f], t), T.face_dirs[f], p, 0,
                                    with_vertices ? T.face_loop[f] : std::vector<int>{}));
    if (S.classification != Classification::Edgeless)
        for (const auto& e : T.edges)
            S.edges.push_back(make_edge(s, S.faces, e.f0, e.f1, with_vertices ? e.v0 : -1,
                                        with_vertices ? e.v1 : -1, 0));
    if (with_vertices) {
        std::vector<Vertex> vs;
        for (int v = 0; v < static_cast<int>(T.vertex_dirs.size()); ++v) {
            Vec4 x;
            if (S.classification == Classification::Ideal)
                x << T.vertex_dirs[v], 1;
            else
                x = point_at(s, T.vertex_dirs[v], radial(s, t, T.theta));
            vs.push_back({x, T.vertex_cycle[v]});
        }
        S.vertices = std::move(vs);
    }
    return S;
}

Solid platonic(int p, int q, double a, SpaceForm s)
{
    return platonic_at(p, q, platonic_inradius(p, q, a, s), s);
}

Classification classify(const Solid& s)
{
    if (s.spec.space != SpaceForm::Hyperbolic || s.spec.family != Family::Platonic)
        return Classification::NotApplicable;
    return classify_platonic(s.spec.p, s.spec.q, s.inradius, s.spec.space);
}

Solid truncated_at(int p, int q, double t, SpaceForm s)
{
    const PlatonicType& T = platonic_type(p, q);
    const auto fr = edge_frames(T, t, s);
    const double sigma = truncation_depth(T, fr, s);
    const int F = static_cast<int>(T.face_dirs.size());
    const int V = static_cast<int>(T.vertex_dirs.size());
    const int E = static_cast<int>(T.edges.size());

    Solid S;
    S.spec = {p, q, Family::Truncated, platonic_parameter(p, q, t, s), s, 0};
    S.inradius = t;
    std::vector<Vertex> verts(2 * E);
    for (int e = 0; e < E; ++e) {
        verts[2 * e].point = cut(s, T, fr, e, T.edges[e].v0, sigma);
        verts[2 * e + 1].point = cut(s, T, fr, e, T.edges[e].v1, sigma);
    }
    auto vid = [&](int e, int v) { return 2 * e + (T.edges[e].v1 == v ? 1 : 0); };
    const Vec4 o = origin(s);
    for (int f = 0; f < F; ++f) {
        std::vector<int> loop;
        const auto& fl = T.face_loop[f];
        for (int k = 0; k < p; ++k) {
            const int a = fl[k], b = fl[(k + 1) % p];
            const int e = edges_at(T, f, a).second;
            loop.push_back(vid(e, a));
            loop.push_back(vid(e, b));
        }
        S.faces.push_back(make_face(s, plane_at(s, T.face_dirs[f], t), T.face_dirs[f], 2 * p, 0,
                                    loop));
    }
    for (int v = 0; v < V; ++v) {
        std::vector<int> loop;
        for (int e : edges_around(T, v))
            loop.push_back(vid(e, v));
        const Vec4 c = plane_through(s, verts[loop[0]].point, verts[loop[1]].point,
                                     verts[loop[2]].point, o);
        S.faces.push_back(make_face(s, c, T.vertex_dirs[v], q, 1, loop));
    }
    for (int e = 0; e < E; ++e)
        S.edges.push_back(make_edge(s, S.faces, T.edges[e].f0, T.edges[e].f1, 2 * e, 2 * e + 1, 0));
    for (int f = 0; f < F; ++f)
        for (int v : T.face_loop[f]) {
            const auto [ep, en] = edges_at(T, f, v);
            S.edges.push_back(make_edge(s, S.faces, f, F + v, vid(ep, v), vid(en, v), 1));
        }
    for (int f = 0; f < static_cast<int>(S.faces.size()); ++f)
        for (int v : S.faces[f].loop)
            verts[v].faces.push_back(f);
    S.vertices = std::move(verts);
    S.classification = Classification::Finite;
    return S;
}

Solid rectified_at(int p, int q, double t, SpaceForm s)
{
    const PlatonicType& T = platonic_type(p, q);
    const auto fr = edge_frames(T, t, s);
    const int F = static_cast<int>(T.face_dirs.size());
    const int V = static_cast<int>(T.vertex_dirs.size());
    const int E = static_cast<int>(T.edges.size());

    Solid S;
    S.spec = {p, q, Family::Rectified, platonic_parameter(p, q, t, s), s, 0};
    S.inradius = t;
    std::vector<Vertex> verts(E);
    for (int e = 0; e < E; ++e)
        verts[e].point = fr[e].mid;
    const Vec4 o = origin(s);
    for (int f = 0; f < F; ++f) {
        std::vector<int> loop;
        for (int v : T.face_loop[f])
            loop.push_back(edges_at(T, f, v).second);
        S.faces.push_back(make_face(s, plane_at(s, T.face_dirs[f], t), T.face_dirs[f], p, 0,
                                    loop));
    }
    for (int v = 0; v < V; ++v) {
        const auto loop = edges_around(T, v);
        const Vec4 c = plane_through(s, verts[loop[0]].point, verts[loop[1]].point,
                                     verts[loop[2]].point, o);
        S.faces.push_back(make_face(s, c, T.vertex_dirs[v], q, 1, loop));
    }
    for (int f = 0; f < F; ++f)
        for (int v : T.face_loop[f]) {
            const auto [ep, en] = edges_at(T, f, v);
            S.edges.push_back(make_edge(s, S.faces, f, F + v, ep, en, 1));
        }
    for (int f = 0; f < static_cast<int>(S.faces.size()); ++f)
        for (int v : S.faces[f].loop)
            verts[v].faces.push_back(f);
    S.vertices = std::move(verts);
    S.classification = Classification::Finite;
    return S;
}

Solid truncate(const Solid& parent)
{
    if (parent.spec.family != Family::Platonic)
        throw DomainError("truncation needs a Platonic solid");
    if (parent.classification != Classification::Finite)
        throw DomainError("truncation needs a finite solid with vertices");
    return truncated_at(parent.spec.p, parent.spec.q, parent.inradius, parent.spec.space);
}

Solid rectify(const Solid& parent)
{
    if (parent.spec.family != Family::Platonic)
        throw DomainError("rectification needs a Platonic solid");
    if (parent.classification != Classification::Finite)
        throw DomainError("rectification needs a finite solid with vertices");
    return rectified_at(parent.spec.p, parent.spec.q, parent.inradius, parent.spec.space);
}

double ideal_truncation_inradius(int p, int q)
{
    const SpaceForm s = SpaceForm::Hyperbolic;
    const PlatonicType& T = platonic_type(p, q);
    const double lo = std::atanh(std::cos(T.theta));
    const double hi = std::atanh(std::cos(T.chi));
    auto g = [&](double t) { return hyperideal_gap(T, edge_frames(T, t, s)); };
    return bisect(g, lo + 1e-9, hi - 1e-9, 1e-15, 200, "ideal truncation").x;
}

Solid ideal_truncation(int p, int q)
{
    const SpaceForm s = SpaceForm::Hyperbolic;
    const PlatonicType& T = platonic_type(p, q);
    const double t = ideal_truncation_inradius(p, q);
    const auto fr = edge_frames(T, t, s);
    const int F = static_cast<int>(T.face_dirs.size());
    const int V = static_cast<int>(T.vertex_dirs.size());
    const int E = static_cast<int>(T.edges.size());

    Solid S;
    S.spec = {p, q, Family::Truncated, platonic_parameter(p, q, t, s), s, 0};
    S.inradius = t;
    std::vector<Vertex> verts(2 * E);
    for (int e = 0; e < E; ++e) {
        const Vec4 a = ideal_end(T, fr, e, T.edges[e].v0);
        const Vec4 b = ideal_end(T, fr, e, T.edges[e].v1);
        verts[2 * e].point = a / a[3];
        verts[2 * e + 1].point = b / b[3];
    }
    auto vid = [&](int e, int v) { return 2 * e + (T.edges[e].v1 == v ? 1 : 0); };
    const Vec4 o = origin(s);
    for (int f = 0; f < F; ++f) {
        std::vector<int> loop;
        const auto& fl = T.face_loop[f];
        for (int k = 0; k < p; ++k) {
            const int a = fl[k], b = fl[(k + 1) % p];
            const int e = edges_at(T, f, a).second;
            loop.push_back(vid(e, a));
            loop.push_back(vid(e, b));
        }
        S.faces.push_back(make_face(s, plane_at(s, T.face_dirs[f], t), T.face_dirs[f], 2 * p, 0,
                                    loop));
    }
    for (int v = 0; v < V; ++v) {
        std::vector<int> loop;
        for (int e : edges_around(T, v))
            loop.push_back(vid(e, v));
        const Vec4 c = plane_through(s, verts[loop[0]].point, verts[loop[1]].point,
                                     verts[loop[2]].point, o);
        S.faces.push_back(make_face(s, c, T.vertex_dirs[v], q, 1, loop));
    }
    for (int e = 0; e < E; ++e)
        S.edges.push_back(make_edge(s, S.faces, T.edges[e].f0, T.edges[e].f1, 2 * e, 2 * e + 1, 0));
    for (int f = 0; f < F; ++f)
        for (int v : T.face_loop[f]) {
            const auto [ep, en] = edges_at(T, f, v);
            S.edges.push_back(make_edge(s, S.faces, f, F + v, vid(ep, v), vid(en, v), 1));
        }
    for (int f = 0; f < static_cast<int>(S.faces.size()); ++f)
        for (int v : S.faces[f].loop)
            verts[v].faces.push_back(f);
    S.vertices = std::move(verts);
    S.classification = Classification::Ideal;
    return S;
}

double column_radius(int q, int n)
{
    const double cq = std::cos(2 * M_PI / q), cn = std::cos(2 * M_PI / n);
    if (!(cq + cn > 0))
        throw NonexistenceError("no column pyramid: cos(2pi/q) + cos(2pi/n) <= 0");
    return std::sqrt((1 + cn) / (cq + cn));
}

double column_ideal_threshold(int q, int n)
{
    return 1 / std::tanh(column_ideal_distance(q, n));
}

Pyramid::Kind pyramid_kind(int q, int n, SpaceForm s)
{
    if (q < 3 || n < 2)
        throw DomainError("pyramid needs q >= 3 and n >= 2");
    if (n == 2)
        return Pyramid::Kind::Flat;
    if (is_platonic(q, n))
        return Pyramid::Kind::Subdivision;
    if (2 * (q + n) == q * n) {
        if (s == SpaceForm::Spherical)
            throw NonexistenceError("pyramid PY_" + std::to_string(q) + "^" +
                                    std::to_string(n) + " exists in R^3 and H^3 only");
        return Pyramid::Kind::IdealApex;
    }
    if (s != SpaceForm::Hyperbolic)
        throw NonexistenceError("pyramid PY_" + std::to_string(q) + "^" + std::to_string(n) +
                                " exists in H^3 only");
    column_radius(q, n);
    return Pyramid::Kind::Column;
}

namespace {

Pyramid flat_pyramid(int q, double edge, SpaceForm s)
{
    Pyramid py;
    py.space = s;
    py.kind = Pyramid::Kind::Flat;
    py.q = q;
    py.n = 2;
    py.s = edge;
    py.base = plane_at(s, -Vec3::UnitZ(), 0);
    py.base_edge_length = edge;
    py.gamma = 0;
    return py;
}

}

Pyramid pyramid(int q, int n, double s_param, SpaceForm s)
{
    switch (pyramid_kind(q, n, s)) {
    case Pyramid::Kind::Flat: return flat_pyramid(q, s_param, s);
    case Pyramid::Kind::Subdivision: {
        Pyramid py = subdivision_pyramid(q, n, platonic_inradius(q, n, s_param, s), s);
        py.s = s_param;
        return py;
    }
    case Pyramid::Kind::IdealApex: return ideal_apex_pyramid(q, n, s_param, s);
    case Pyramid::Kind::Column: {
        if (!(s_param > 1))
            throw DomainError("base plane parameter must exceed 1");
        Pyramid py = column_at_distance(q, n, std::atanh(1 / s_param));
        py.s = s_param;
        return py;
    }
    }
    throw DomainError("unknown pyramid kind");
}

double pyramid_min_edge(int q, int n, SpaceForm s)
{
    if (pyramid_kind(q, n, s) == Pyramid::Kind::Column)
        return column_at_distance(q, n, 0).base_edge_length;
    return 0;
}

double ideal_pyramid_gamma(int q, int n)
{
    (void)q;
    return M_PI / 2 - M_PI / n;
}

Pyramid pyramid_with_edge(int q, int n, double edge, SpaceForm s)
{
    if (!(edge > 0))
        throw DomainError("base edge must be positive");
    switch (pyramid_kind(q, n, s)) {
    case Pyramid::Kind::Flat: return flat_pyramid(q, edge, s);
    case Pyramid::Kind::Subdivision: {
        if (s == SpaceForm::Euclidean)
            return pyramid(q, n, edge, s);
        const PlatonicType& T = platonic_type(q, n);
        double hi = s == SpaceForm::Hyperbolic ? std::atanh(std::cos(T.theta)) : M_PI / 2;
        hi *= 1 - 1e-12;
        if (platonic_edge_at(q, n, hi, s) <= edge)
            throw NonexistenceError("no pyramid matches the base edge");
        const double t = bisect([&](double x) { return platonic_edge_at(q, n, x, s) - edge; },
                                1e-300, hi, 1e-15, 300, "pyramid edge")
                             .x;
        Pyramid py = subdivision_pyramid(q, n, t, s);
        py.s = platonic_parameter(q, n, t, s);
        return py;
    }
    case Pyramid::Kind::IdealApex: {
        if (s == SpaceForm::Euclidean)
            return ideal_apex_pyramid(q, n, edge, s);
        const double h = 1 / std::sqrt(2 * (std::cosh(edge) - 1));
        const double Rc = circumradius_unit(q);
        return ideal_apex_pyramid(q, n, std::sqrt(Rc * Rc + h * h), s);
    }
    case Pyramid::Kind::Column: {
        const double emin = column_at_distance(q, n, 0).base_edge_length;
        if (edge < emin - 1e-12)
            throw NonexistenceError("no pyramid matches the base edge: edge below the minimum " +
                                    std::to_string(emin));
        if (edge <= emin)
            return column_at_distance(q, n, 0);
        const double dmax = column_ideal_distance(q, n) * (1 - 1e-12);
        const double d = bisect(
                             [&](double x) {
                                 return column_at_distance(q, n, x).base_edge_length - edge;
                             },
                             0.0, dmax, 1e-15, 300, "pyramid edge")
                             .x;
        return column_at_distance(q, n, d);
    }
    }
    throw DomainError("unknown pyramid kind");
}

KisData kis_angles_at(int p, int q, int n, double t, SpaceForm s)
{
    const Solid tp = truncated_at(p, q, t, s);
    KisData k;
    k.alpha = *tp.edges.front().dihedral;
    k.beta = *tp.edges.back().dihedral;
    const double e = tp.edge_length(tp.edges.back());
    k.pyramid = pyramid_with_edge(q, n, e, s);
    k.gamma = k.pyramid.gamma;
    k.sum = k.alpha + 2 * k.beta + 2 * k.gamma;
    return k;
}

Solid kis_at(int p, int q, int n, double t, SpaceForm s)
{
    const Solid tp = truncated_at(p, q, t, s);
    const KisData kd = kis_angles_at(p, q, n, t, s);
    Solid S = tp;
    S.spec.family = Family::Kis;
    S.spec.n = n;
    S.kis = kd;
    if (n == 2)
        return S;
    const PlatonicType& T = platonic_type(p, q);
    const int F = static_cast<int>(T.face_dirs.size());
    const int V = static_cast<int>(T.vertex_dirs.size());
    const double theta = M_PI - kd.beta - kd.gamma;
    std::vector<Face> faces(tp.faces.begin(), tp.faces.begin() + F);
    std::vector<Edge> edges;
    for (const Edge& e : tp.edges)
        if (e.orbit == 0)
            edges.push_back(e);
    std::vector<Vertex> verts = *tp.vertices;
    for (auto& v : verts)
        v.faces.clear();
    const bool apex_finite = kd.pyramid.kind == Pyramid::Kind::Subdivision;
    for (int v = 0; v < V; ++v) {
        const Face& small = tp.faces[F + v];
        const int n_small = static_cast<int>(small.loop.size());
        const int first = static_cast<int>(faces.size());
        int apex = -1;
        if (apex_finite) {
            apex = static_cast<int>(verts.size());
            verts.push_back({Vec4::Zero(), {}});
        }
        for (int k = 0; k < n_small; ++k) {
            const int a = small.loop[k], b = small.loop[(k + 1) % n_small];
            int big = -1;
            for (const Edge& e : tp.edges)
                if (e.orbit == 1 && e.f1 == F + v &&
                    ((e.v0 == a && e.v1 == b) || (e.v0 == b && e.v1 == a)))
                    big = e.f0;
            const Vec4 cF = tp.faces[big].covector;
            Vec4 e2 = small.covector - dual_dot(s, cF, small.covector) * cF;
            e2 = normalize_plane(s, e2);
            const Vec4 c = std::cos(theta) * cF + std::sin(theta) * e2;
            std::vector<int> loop = {a, b};
            if (apex >= 0)
                loop.push_back(apex);
            faces.push_back(make_face(s, c, small.direction, 3, 2, loop));
            edges.push_back(make_edge(s, faces, big, first + k, a, b, 1));
        }
        for (int k = 0; k < n_small; ++k) {
            const int b = small.loop[(k + 1) % n_small];
            edges.push_back(
                make_edge(s, faces, first + k, first + (k + 1) % n_small, b, apex, 2));
        }
        if (apex >= 0)
            verts[apex].point = meet(s, faces[first].covector, faces[first + 1].covector,
                                     faces[first + 2].covector, origin(s));
    }
    for (int f = 0; f < static_cast<int>(faces.size()); ++f)
        for (int v : faces[f].loop)
            verts[v].faces.push_back(f);
    S.faces = std::move(faces);
    S.edges = std::move(edges);
    if (apex_finite)
        S.vertices = std::move(verts);
    else
        S.vertices.reset();
    return S;
}

Solid kis(int p, int q, int n, double a, SpaceForm s)
{
    return kis_at(p, q, n, platonic_inradius(p, q, a, s), s);
}

}
