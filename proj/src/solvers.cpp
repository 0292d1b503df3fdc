#include "polyform/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace pf {

namespace {

constexpr double kTwoPi = 2 * M_PI;

double dihedral_at(int p, int q, double t, SpaceForm s)
{
    const PlatonicType& T = platonic_type(p, q);
    const auto& e = T.edges[0];
    const auto a = interior_angle(s, plane_at(s, T.face_dirs[e.f0], t),
                                  plane_at(s, T.face_dirs[e.f1], t));
    if (!a)
        throw DomainError("adjacent faces are disjoint");
    return *a;
}

double tangency_parameter(int p, int q)
{
    const PlatonicType& T = platonic_type(p, q);
    const auto& e = T.edges[0];
    const double c = T.face_dirs[e.f0].dot(T.face_dirs[e.f1]);
    return std::sqrt(2 / (1 + c));
}

// 32-point scan: the function must be strictly monotone on the bracket
template <class F>
void prescan(F&& f, double lo, double hi, const std::string& what)
{
    const int N = 32;
    std::vector<double> v;
    for (int i = 0; i < N; ++i)
        v.push_back(f(lo + (hi - lo) * i / (N - 1)));
    const bool up = v.back() > v.front();
    for (int i = 1; i < N; ++i) {
        const double d = v[i] - v[i - 1];
        const double slack = 1e-12 * std::max(1.0, std::abs(v[i]));
        if (up ? d < -slack : d > slack) {
            std::ostringstream os;
            os << what << ": not monotone on [" << lo << ", " << hi << "] near sample " << i;
            throw BracketError(os.str(), lo, hi, v.front(), v.back());
        }
    }
}

Solid inner_solid(int p, int q, double t, SpaceForm s, Base base)
{
    switch (base) {
    case Base::Platonic: return platonic_at(p, q, t, s);
    case Base::Truncated: return truncated_at(p, q, t, s);
    case Base::Rectified: return rectified_at(p, q, t, s);
    }
    throw DomainError("unknown base");
}

double inner_limit(int p, int q, SpaceForm s, Base base)
{
    if (s == SpaceForm::Spherical)
        return M_PI / 2;
    if (s == SpaceForm::Euclidean)
        return std::numeric_limits<double>::infinity();
    const PlatonicType& T = platonic_type(p, q);
    switch (base) {
    case Base::Platonic: return std::atanh(std::cos(T.theta));
    case Base::Truncated: return ideal_truncation_inradius(p, q);
    case Base::Rectified: return std::atanh(std::cos(T.chi));
    }
    return 0;
}

int matching_face(const Solid& fundamental, const Vec3& dir)
{
    int best = -1;
    double d = -2;
    for (int f = 0; f < static_cast<int>(fundamental.faces.size()); ++f) {
        if (fundamental.faces[f].orbit != 0)
            continue;
        const double x = fundamental.faces[f].direction.dot(dir);
        if (x > d) {
            d = x;
            best = f;
        }
    }
    if (d < 1 - 1e-9)
        throw DomainError("no fundamental face parallel to the inner face");
    return best;
}

template <class Measure>
SolveResult solve_inner(int p, int q, const SolveResult& fund, Base base, Measure measure,
                        const std::function<Solid(double)>& fundamental_at)
{
    const SpaceForm s = fund.space;
    const double T = fund.inradius;
    const Solid F = fundamental_at(T);
    auto f = [&](double t) {
        const PrismMeasure m = measure(inner_solid(p, q, t, s, base), F);
        return m.lateral_edge - m.base_edge;
    };
    const double lo = T * 1e-6;
    const double hi = std::min(T, inner_limit(p, q, s, base)) * (1 - 1e-9);
    prescan(f, lo, hi, "inner size");
    const Root r = bisect(f, lo, hi, 1e-15, 200, "inner size");

    SolveResult out;
    out.space = s;
    out.lo = r.lo;
    out.hi = r.hi;
    out.iterations = r.iterations;
    out.classification = Classification::Finite;
    double t = r.x, Tf = T;
    if (s == SpaceForm::Euclidean) {
        const Solid X = inner_solid(p, q, t, s, base);
        const double k = 1 / measure(X, F).base_edge;
        t *= k;
        Tf *= k;
        out.scale_free = true;
    }
    out.inradius = t;
    out.secondary_inradius = Tf;
    out.value = platonic_parameter(p, q, t, s);
    const Solid Fs = fundamental_at(Tf);
    out.secondary = Fs.spec.a;
    out.witness = inner_solid(p, q, t, s, base);
    const PrismMeasure m = measure(*out.witness, Fs);
    out.residual = std::abs(m.lateral_edge - m.base_edge);
    return out;
}

}

std::string to_string(Base b)
{
    switch (b) {
    case Base::Platonic: return "platonic";
    case Base::Truncated: return "truncated";
    case Base::Rectified: return "rectified";
    }
    return "?";
}

std::optional<Base> parse_base(std::string_view name)
{
    if (name == "platonic")
        return Base::Platonic;
    if (name == "truncated")
        return Base::Truncated;
    if (name == "rectified")
        return Base::Rectified;
    return std::nullopt;
}

std::string solid_name(int p, int q)
{
    if (p == 3 && q == 3)
        return "tetrahedron";
    if (p == 4 && q == 3)
        return "cube";
    if (p == 3 && q == 4)
        return "octahedron";
    if (p == 5 && q == 3)
        return "dodecahedron";
    if (p == 3 && q == 5)
        return "icosahedron";
    return "{" + std::to_string(p) + "," + std::to_string(q) + "}";
}

double euclidean_dihedral(int p, int q)
{
    return dihedral_at(p, q, 1, SpaceForm::Euclidean);
}

double ideal_dihedral(int p, int q)
{
    (void)p;
    return M_PI - kTwoPi / q;
}

PlatonicPlace platonic_geography(int p, int q, int n)
{
    if (n < 3)
        throw NonexistenceError("dihedral angle 2pi/n needs n >= 3");
    const double a = kTwoPi / n;
    const double e = euclidean_dihedral(p, q);
    if (std::abs(a - e) < 1e-12)
        return {SpaceForm::Euclidean, Classification::Finite};
    if (a > e)
        return {SpaceForm::Spherical, Classification::Finite};
    const double i = ideal_dihedral(p, q);
    if (std::abs(a - i) < 1e-12)
        return {SpaceForm::Hyperbolic, Classification::Ideal};
    return {SpaceForm::Hyperbolic, a > i ? Classification::Finite : Classification::Hyperideal};
}

SolveResult solve_platonic_angle(int p, int q, int n, std::optional<SpaceForm> want)
{
    const PlatonicPlace place = platonic_geography(p, q, n);
    if (want && *want != place.space)
        throw NonexistenceError(solid_name(p, q) + " with dihedral 2pi/" + std::to_string(n) +
                                " exists only in " + to_string(place.space) + " space");
    const SpaceForm s = place.space;
    const double target = kTwoPi / n;
    SolveResult out;
    out.space = s;
    out.classification = place.kind;
    if (s == SpaceForm::Euclidean) {
        out.scale_free = true;
        out.value = 1;
        out.inradius = platonic_inradius(p, q, 1, s);
        out.lo = out.hi = out.inradius;
        out.witness = platonic_at(p, q, out.inradius, s);
        out.residual = std::abs(dihedral_at(p, q, out.inradius, s) - target);
        return out;
    }
    if (s == SpaceForm::Spherical) {
        auto f = [&](double t) { return dihedral_at(p, q, t, s) - target; };
        out.lo = 1e-9;
        out.hi = M_PI / 2 - 1e-9;
        prescan(f, out.lo, out.hi, "dihedral angle");
        const Root r = bisect(f, out.lo, out.hi, 1e-16, 200, "dihedral angle");
        out.inradius = r.x;
        out.iterations = r.iterations;
        out.lo = r.lo;
        out.hi = r.hi;
        out.value = platonic_parameter(p, q, r.x, s);
    } else {
        auto f = [&](double a) {
            return dihedral_at(p, q, platonic_inradius(p, q, a, s), s) - target;
        };
        out.lo = tangency_parameter(p, q) + 1e-6;
        out.hi = 1e3;
        prescan(f, out.lo, out.hi, "dihedral angle");
        const Root r = bisect(f, out.lo, out.hi, 1e-16, 200, "dihedral angle");
        out.value = r.x;
        out.iterations = r.iterations;
        out.lo = r.lo;
        out.hi = r.hi;
        out.inradius = platonic_inradius(p, q, r.x, s);
    }
    out.witness = platonic_at(p, q, out.inradius, s);
    out.residual = std::abs(dihedral_at(p, q, out.inradius, s) - target);
    return out;
}

PrismMeasure measure_prism(const Solid& inner, const Solid& fundamental)
{
    const SpaceForm s = inner.spec.space;
    const auto big = inner.faces_in_orbit(0);
    const Face& face = inner.faces[big.front()];
    const Face& fund = fundamental.faces[matching_face(fundamental, face.direction)];
    const Isometry g = reflect_covector(s, fund.covector);
    const Vec4& a = (*inner.vertices)[face.loop[0]].point;
    const Vec4& b = (*inner.vertices)[face.loop[1]].point;
    return {point_distance(s, a, b), point_distance(s, a, g.m * a)};
}

PrismMeasure measure_antiprism(const Solid& inner, const Solid& fundamental)
{
    const SpaceForm s = inner.spec.space;
    const auto big = inner.faces_in_orbit(0);
    const Face& face = inner.faces[big.front()];
    const Face& fund = fundamental.faces[matching_face(fundamental, face.direction)];
    const Isometry g = compose(rotation(fund.direction, M_PI / face.gonality, s),
                               reflect_covector(s, fund.covector));
    const Vec4& a = (*inner.vertices)[face.loop[0]].point;
    const Vec4& b = (*inner.vertices)[face.loop[1]].point;
    double lateral = std::numeric_limits<double>::infinity();
    for (int v : face.loop)
        lateral = std::min(lateral, point_distance(s, a, g.m * (*inner.vertices)[v].point));
    return {point_distance(s, a, b), lateral};
}

SolveResult solve_prismatic_inner(int p, int q, int n, Base base)
{
    const SolveResult fund = solve_platonic_angle(p, q, n);
    const SpaceForm s = fund.space;
    return solve_inner(p, q, fund, base, measure_prism,
                       [&](double t) { return platonic_at(p, q, t, s); });
}

double euclidean_gamma(int q, int n)
{
    if (n == 2)
        return 0;
    Pyramid::Kind kind;
    try {
        kind = pyramid_kind(q, n, SpaceForm::Euclidean);
    } catch (const NonexistenceError&) {
        // steeper than a prism; only used for sign decisions
        return M_PI / 2;
    }
    if (kind == Pyramid::Kind::Subdivision)
        return pyramid(q, n, 1, SpaceForm::Euclidean).gamma;
    return M_PI / 2;
}

double euclidean_kis_sum(int p, int q, int n)
{
    const Solid tp = truncated_at(p, q, 1, SpaceForm::Euclidean);
    return *tp.edges.front().dihedral + 2 * *tp.edges.back().dihedral + 2 * euclidean_gamma(q, n);
}

SpaceForm kis_geography(int p, int q, int n)
{
    if (n < 2)
        throw NonexistenceError("pyramid index n must be at least 2");
    const double d = euclidean_kis_sum(p, q, n) - kTwoPi;
    if (std::abs(d) < 1e-9)
        return SpaceForm::Euclidean;
    return d < 0 ? SpaceForm::Spherical : SpaceForm::Hyperbolic;
}

KisBracket kis_bracket(int p, int q, int n, SpaceForm s)
{
    KisBracket b;
    if (s == SpaceForm::Spherical) {
        b.t_lo = 1e-3;
        b.t_hi = M_PI / 2 - 1e-6;
        b.sum_lo = kis_angles_at(p, q, n, b.t_lo, s).sum;
        b.sum_hi = kis_angles_at(p, q, n, b.t_hi, s).sum;
        return b;
    }
    if (s != SpaceForm::Hyperbolic)
        throw DomainError("kis bracket needs a curved space");
    const Solid ideal = ideal_truncation(p, q);
    b.t_hi = ideal.inradius;
    b.sum_hi = *ideal.edges.front().dihedral + 2 * *ideal.edges.back().dihedral +
               2 * ideal_pyramid_gamma(q, n);
    if (n > 2 && pyramid_kind(q, n, s) == Pyramid::Kind::Column) {
        const double emin = pyramid_min_edge(q, n, s);
        auto edge = [&](double t) {
            const Solid tp = truncated_at(p, q, t, s);
            return tp.edge_length(tp.edges.back()) - emin;
        };
        b.t_lo = bisect(edge, 1e-9, b.t_hi * (1 - 1e-9), 1e-15, 200, "minimal pyramid edge").x;
    } else {
        b.t_lo = 1e-3;
    }
    b.sum_lo = kis_angles_at(p, q, n, b.t_lo, s).sum;
    return b;
}

SolveResult solve_kis_angle_condition(int p, int q, int n, std::optional<SpaceForm> want)
{
    const SpaceForm s = kis_geography(p, q, n);
    if (want && *want != s)
        throw NonexistenceError("KP_{" + std::to_string(p) + "," + std::to_string(q) + "}^" +
                                std::to_string(n) + " exists only in " + to_string(s) +
                                " space");
    SolveResult out;
    out.space = s;
    if (s == SpaceForm::Euclidean) {
        out.scale_free = true;
        out.value = 1;
        out.inradius = platonic_inradius(p, q, 1, s);
        out.lo = out.hi = out.inradius;
    } else {
        const KisBracket br = kis_bracket(p, q, n, s);
        if ((br.sum_lo - kTwoPi) * (br.sum_hi - kTwoPi) > 0)
            throw BracketError("angle sum does not cross 2pi", br.t_lo, br.t_hi, br.sum_lo,
                               br.sum_hi);
        const double hi = s == SpaceForm::Hyperbolic ? br.t_hi * (1 - 1e-9) : br.t_hi;
        auto g = [&](double t) { return kis_angles_at(p, q, n, t, s).sum - kTwoPi; };
        prescan(g, br.t_lo, hi, "angle sum");
        const Root r = bisect(g, br.t_lo, hi, 1e-15, 200, "angle sum");
        out.inradius = r.x;
        out.iterations = r.iterations;
        out.lo = r.lo;
        out.hi = r.hi;
        out.value = platonic_parameter(p, q, r.x, s);
    }
    out.witness = kis_at(p, q, n, out.inradius, s);
    const KisData& kd = *out.witness->kis;
    out.pyramid = kd.pyramid;
    out.secondary = kd.pyramid.s;
    out.residual = std::abs(kd.sum - kTwoPi);
    out.classification = Classification::Finite;
    return out;
}

SolveResult solve_antiprismatic_inner(int p, int q, int n, Base base)
{
    if (base == Base::Truncated)
        throw DomainError("antiprismatic inner solids are Platonic or rectified");
    const SolveResult kis_sol = solve_kis_angle_condition(p, q, n);
    const SpaceForm s = kis_sol.space;
    SolveResult out = solve_inner(p, q, kis_sol, base, measure_antiprism,
                                  [&](double t) { return kis_at(p, q, n, t, s); });
    out.pyramid = kis_sol.pyramid;
    return out;
}

std::vector<AngleRow> euclidean_angle_table()
{
    std::vector<AngleRow> rows;
    for (auto [p, q] : {std::pair{3, 3}, {4, 3}, {3, 4}, {5, 3}, {3, 5}})
        rows.push_back({p, q, solid_name(p, q), euclidean_kis_sum(p, q, 2) * 180 / M_PI,
                        euclidean_kis_sum(p, q, 3) * 180 / M_PI});
    return rows;
}

}
