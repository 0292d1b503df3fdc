#include "polyform/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace pf {

namespace {

const Mat4 kLorentz = Vec4(1, 1, 1, -1).asDiagonal();

Vec4 dual_metric(SpaceForm s, const Vec4& c)
{
    switch (s) {
    case SpaceForm::Spherical: return c;
    case SpaceForm::Hyperbolic: return Vec4(c[0], c[1], c[2], -c[3]);
    case SpaceForm::Euclidean: return Vec4(c[0], c[1], c[2], 0);
    }
    return c;
}

double clamp_cos(double c)
{
    return std::clamp(c, -1.0, 1.0);
}

}

std::string to_string(SpaceForm s)
{
    switch (s) {
    case SpaceForm::Spherical: return "spherical";
    case SpaceForm::Euclidean: return "euclidean";
    case SpaceForm::Hyperbolic: return "hyperbolic";
    }
    return "?";
}

std::optional<SpaceForm> parse_space(std::string_view name)
{
    if (name == "spherical" || name == "S")
        return SpaceForm::Spherical;
    if (name == "euclidean" || name == "E")
        return SpaceForm::Euclidean;
    if (name == "hyperbolic" || name == "H")
        return SpaceForm::Hyperbolic;
    return std::nullopt;
}

Vec4 origin(SpaceForm s)
{
    switch (s) {
    case SpaceForm::Spherical: return Vec4(0, 0, 0, -1);
    default: return Vec4(0, 0, 0, 1);
    }
}

Vec4 lift(SpaceForm s, const ModelPoint& p)
{
    const Vec3& x = p.coords;
    const double r2 = x.squaredNorm();
    switch (s) {
    case SpaceForm::Spherical:
        if (p.kind == ModelPoint::Kind::AtInfinity)
            return Vec4(0, 0, 0, 1);
        if (p.kind == ModelPoint::Kind::Ideal)
            throw DomainError("spherical points have no ideal kind");
        return Vec4(2 * x[0], 2 * x[1], 2 * x[2], r2 - 1) / (r2 + 1);
    case SpaceForm::Hyperbolic:
        if (p.kind == ModelPoint::Kind::AtInfinity)
            throw DomainError("hyperbolic chart has no point at infinity");
        if (p.kind == ModelPoint::Kind::Ideal) {
            const double n = std::sqrt(r2);
            if (n == 0)
                throw DomainError("ideal point at the origin");
            return Vec4(x[0] / n, x[1] / n, x[2] / n, 1);
        }
        if (r2 >= 1)
            throw DomainError("hyperbolic point outside the open ball");
        return Vec4(2 * x[0], 2 * x[1], 2 * x[2], 1 + r2) / (1 - r2);
    case SpaceForm::Euclidean:
        if (p.kind != ModelPoint::Kind::Ordinary)
            throw DomainError("euclidean points are always ordinary");
        return Vec4(x[0], x[1], x[2], 1);
    }
    return Vec4::Zero();
}

Vec4 normalize_point(SpaceForm s, const Vec4& x)
{
    switch (s) {
    case SpaceForm::Spherical: return x / x.norm();
    case SpaceForm::Hyperbolic: {
        const double q = -(x.head<3>().squaredNorm() - x[3] * x[3]);
        Vec4 y = x[3] < 0 ? Vec4(-x) : x;
        if (q <= 0)
            return y;
        return y / std::sqrt(q);
    }
    case SpaceForm::Euclidean: return x / x[3];
    }
    return x;
}

ModelPoint project(SpaceForm s, const Vec4& x)
{
    switch (s) {
    case SpaceForm::Spherical: {
        const Vec4 y = x / x.norm();
        const double den = 1 - y[3];
        if (den < 1e-15)
            return ModelPoint::at_infinity();
        return ModelPoint::ordinary(y.head<3>() / den);
    }
    case SpaceForm::Hyperbolic: {
        Vec4 y = x[3] < 0 ? Vec4(-x) : x;
        const double w2 = y[3] * y[3];
        const double q = w2 - y.head<3>().squaredNorm();
        if (w2 == 0 || q < -1e-12 * w2)
            throw DomainError("hyperideal point has no ball representative");
        if (q <= 1e-12 * w2)
            return ModelPoint::ideal(y.head<3>().normalized());
        y /= std::sqrt(q);
        return ModelPoint::ordinary(y.head<3>() / (1 + y[3]));
    }
    case SpaceForm::Euclidean: return ModelPoint::ordinary(x.head<3>() / x[3]);
    }
    return {};
}

Vec3 chart(SpaceForm s, const Vec4& x)
{
    return project(s, x).coords;
}

double point_dot(SpaceForm s, const Vec4& x, const Vec4& y)
{
    switch (s) {
    case SpaceForm::Spherical: return x.dot(y);
    case SpaceForm::Hyperbolic: return x.head<3>().dot(y.head<3>()) - x[3] * y[3];
    case SpaceForm::Euclidean: return x.head<3>().dot(y.head<3>());
    }
    return 0;
}

double point_distance(SpaceForm s, const Vec4& x, const Vec4& y)
{
    switch (s) {
    case SpaceForm::Spherical: {
        const double c = (x - y).norm() / 2;
        return 2 * std::asin(std::min(1.0, c));
    }
    case SpaceForm::Hyperbolic: {
        const double c = x[3] * y[3] - x.head<3>().dot(y.head<3>());
        if (c > 1.5)
            return std::acosh(c);
        const Vec4 d = x - y;
        const double q = std::max(0.0, d.head<3>().squaredNorm() - d[3] * d[3]);
        return 2 * std::asinh(std::sqrt(q) / 2);
    }
    case SpaceForm::Euclidean: return (x.head<3>() / x[3] - y.head<3>() / y[3]).norm();
    }
    return 0;
}

Vec4 point_at(SpaceForm s, const Vec3& u, double t)
{
    switch (s) {
    case SpaceForm::Spherical: {
        Vec4 x;
        x << std::sin(t) * u, -std::cos(t);
        return x;
    }
    case SpaceForm::Hyperbolic: {
        Vec4 x;
        x << std::sinh(t) * u, std::cosh(t);
        return x;
    }
    case SpaceForm::Euclidean: {
        Vec4 x;
        x << t * u, 1;
        return x;
    }
    }
    return Vec4::Zero();
}

Vec4 plane_at(SpaceForm s, const Vec3& u, double t)
{
    Vec4 c;
    switch (s) {
    case SpaceForm::Spherical: c << std::cos(t) * u, std::sin(t); break;
    case SpaceForm::Hyperbolic: c << std::cosh(t) * u, -std::sinh(t); break;
    case SpaceForm::Euclidean: c << u, -t; break;
    }
    return c;
}

Vec4 along(SpaceForm s, const Vec4& m, const Vec4& d, double tau)
{
    switch (s) {
    case SpaceForm::Spherical: return std::cos(tau) * m + std::sin(tau) * d;
    case SpaceForm::Hyperbolic: return std::cosh(tau) * m + std::sinh(tau) * d;
    case SpaceForm::Euclidean: return m + tau * d;
    }
    return m;
}

double dual_dot(SpaceForm s, const Vec4& a, const Vec4& b)
{
    return a.dot(dual_metric(s, b));
}

Vec4 normalize_plane(SpaceForm s, const Vec4& c)
{
    const double q = dual_dot(s, c, c);
    if (!(q > 0))
        throw DomainError("degenerate plane covector");
    return c / std::sqrt(q);
}

Vec4 cross4(const Vec4& a, const Vec4& b, const Vec4& c)
{
    Vec4 r;
    for (int i = 0; i < 4; ++i) {
        Mat3 m;
        int col = 0;
        for (int j = 0; j < 4; ++j) {
            if (j == i)
                continue;
            m(0, col) = a[j];
            m(1, col) = b[j];
            m(2, col) = c[j];
            ++col;
        }
        r[i] = ((i % 2) ? -1.0 : 1.0) * m.determinant();
    }
    return r;
}

Vec4 plane_through(SpaceForm s, const Vec4& x, const Vec4& y, const Vec4& z,
                   const Vec4& inside)
{
    Vec4 c = cross4(x, y, z);
    c = normalize_plane(s, c);
    if (c.dot(inside) > 0)
        c = -c;
    return c;
}

Vec4 meet(SpaceForm s, const Vec4& a, const Vec4& b, const Vec4& c, const Vec4& near)
{
    Vec4 x = cross4(a, b, c);
    if (s == SpaceForm::Spherical) {
        x.normalize();
        if (x.dot(near) < 0)
            x = -x;
        return x;
    }
    if (s == SpaceForm::Euclidean)
        return x / x[3];
    if (x[3] < 0)
        x = -x;
    const double q = x[3] * x[3] - x.head<3>().squaredNorm();
    if (q > 0)
        x /= std::sqrt(q);
    else
        x /= x.norm();
    return x;
}

std::optional<double> interior_angle(SpaceForm s, const Vec4& a, const Vec4& b)
{
    const double c = -dual_dot(s, a, b);
    if (std::abs(c) > 1 + 1e-12)
        return std::nullopt;
    return std::acos(clamp_cos(c));
}

Vec4 plane_covector(const GeodesicPlane& pl)
{
    Vec4 c;
    if (pl.is_sphere()) {
        const Sphere& sp = pl.sphere();
        switch (pl.space) {
        case SpaceForm::Spherical: c << -sp.center, 1; break;
        case SpaceForm::Hyperbolic: c << sp.center, -1; break;
        case SpaceForm::Euclidean: throw DomainError("euclidean planes are flat");
        }
        return normalize_plane(pl.space, c / sp.radius);
    }
    const Flat& f = pl.flat();
    c << f.normal, -f.offset;
    if (pl.space != SpaceForm::Euclidean)
        c[3] = 0;
    return normalize_plane(pl.space, c);
}

GeodesicPlane plane_shape(SpaceForm s, const Vec4& c0)
{
    const Vec4 c = normalize_plane(s, c0);
    const Vec3 v = c.head<3>();
    if (s == SpaceForm::Euclidean) {
        const double n = v.norm();
        return {s, Flat{v / n, -c[3] / n}};
    }
    if (std::abs(c[3]) < 1e-12)
        return {s, Flat{v.normalized(), 0.0}};
    return {s, Sphere{-v / c[3], 1 / std::abs(c[3])}};
}

double distance(SpaceForm s, const ModelPoint& p, const ModelPoint& q)
{
    if (p.kind != ModelPoint::Kind::Ordinary || q.kind != ModelPoint::Kind::Ordinary)
        throw DomainError("distance needs ordinary points");
    if (s == SpaceForm::Hyperbolic) {
        const double a = 1 - p.coords.squaredNorm();
        const double b = 1 - q.coords.squaredNorm();
        if (a <= 0 || b <= 0)
            throw DomainError("hyperbolic point outside the open ball");
        return 2 * std::asinh((p.coords - q.coords).norm() / std::sqrt(a * b));
    }
    if (s == SpaceForm::Euclidean)
        return (p.coords - q.coords).norm();
    return point_distance(s, lift(s, p), lift(s, q));
}

GeodesicPlane plane_from_center(SpaceForm s, const Vec3& x)
{
    const double r = x.norm();
    switch (s) {
    case SpaceForm::Hyperbolic:
        if (r <= 1)
            throw DomainError("plane center must lie outside the unit ball");
        return {s, Sphere{x, std::sqrt(r * r - 1)}};
    case SpaceForm::Euclidean:
        if (r == 0)
            throw DomainError("plane center at the origin");
        return {s, Flat{x / r, r}};
    case SpaceForm::Spherical:
        if (r == 0)
            throw DomainError("plane center at the origin");
        return plane_shape(s, plane_at(s, x / r, 2 * std::atan(r)));
    }
    return {s, Flat{Vec3::UnitX(), 0}};
}

std::optional<double> intersection_angle(const GeodesicPlane& a, const GeodesicPlane& b,
                                         const Vec3& w)
{
    if (a.space != b.space)
        throw SpaceMismatch();
    // sign +1 when the witness sits on the positive side: outside a sphere,
    // along the normal of a flat
    auto side = [&](const GeodesicPlane& pl) {
        if (pl.is_sphere())
            return (w - pl.sphere().center).norm() >= pl.sphere().radius ? 1.0 : -1.0;
        return pl.flat().normal.dot(w) >= pl.flat().offset ? 1.0 : -1.0;
    };
    double m;
    if (a.is_sphere() && b.is_sphere()) {
        const Sphere& p = a.sphere();
        const Sphere& q = b.sphere();
        const double d2 = (p.center - q.center).squaredNorm();
        m = (p.radius * p.radius + q.radius * q.radius - d2) / (2 * p.radius * q.radius);
    } else if (!a.is_sphere() && !b.is_sphere()) {
        const Flat& p = a.flat();
        const Flat& q = b.flat();
        m = p.normal.dot(q.normal);
        if (std::abs(std::abs(m) - 1) < 1e-14) {
            const double gap = std::abs(p.offset - m * q.offset);
            if (gap > 1e-12)
                return std::nullopt;
            return m > 0 ? M_PI : 0.0;
        }
    } else {
        const Sphere& p = a.is_sphere() ? a.sphere() : b.sphere();
        const Flat& f = a.is_sphere() ? b.flat() : a.flat();
        m = (f.offset - f.normal.dot(p.center)) / p.radius;
    }
    const double c = -side(a) * side(b) * m;
    if (std::abs(c) > 1 + 1e-12)
        return std::nullopt;
    return std::acos(clamp_cos(c));
}

Isometry identity(SpaceForm s)
{
    return {s, Mat4::Identity(), {}};
}

Isometry reflect_covector(SpaceForm s, const Vec4& c0)
{
    const Vec4 c = normalize_plane(s, c0);
    return {s, Mat4::Identity() - 2 * dual_metric(s, c) * c.transpose(), {}};
}

Isometry reflect(const GeodesicPlane& pl)
{
    return reflect_covector(pl.space, plane_covector(pl));
}

Isometry rotation(const Vec3& axis, double phi, SpaceForm s)
{
    const double n = axis.norm();
    if (n == 0)
        throw DomainError("rotation axis is zero");
    const Vec3 v = axis / n;
    Mat3 r90;
    r90 << 0, -v[2], v[1], v[2], 0, -v[0], -v[1], v[0], 0;
    const Mat3 p = v * v.transpose();
    const Mat3 r = std::sin(phi) * r90 + std::cos(phi) * (Mat3::Identity() - p) + p;
    Isometry g = identity(s);
    g.m.topLeftCorner<3, 3>() = r;
    return g;
}

double residual(const Isometry& a)
{
    switch (a.space) {
    case SpaceForm::Spherical:
        return (a.m.transpose() * a.m - Mat4::Identity()).cwiseAbs().maxCoeff();
    case SpaceForm::Hyperbolic:
        return (a.m.transpose() * kLorentz * a.m - kLorentz).cwiseAbs().maxCoeff();
    case SpaceForm::Euclidean: {
        const Mat3 r = a.linear();
        double e = (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
        e = std::max(e, a.m.row(3).head<3>().cwiseAbs().maxCoeff());
        return std::max(e, std::abs(a.m(3, 3) - 1));
    }
    }
    return 0;
}

Isometry renormalized(const Isometry& a)
{
    Isometry g = a;
    switch (a.space) {
    case SpaceForm::Spherical: {
        Eigen::JacobiSVD<Mat4> svd(a.m, Eigen::ComputeFullU | Eigen::ComputeFullV);
        g.m = svd.matrixU() * svd.matrixV().transpose();
        break;
    }
    case SpaceForm::Euclidean: {
        Eigen::JacobiSVD<Mat3> svd(a.linear(), Eigen::ComputeFullU | Eigen::ComputeFullV);
        g.m.topLeftCorner<3, 3>() = svd.matrixU() * svd.matrixV().transpose();
        g.m.row(3) << 0, 0, 0, 1;
        break;
    }
    case SpaceForm::Hyperbolic: {
        auto dot = [](const Vec4& x, const Vec4& y) {
            return x.head<3>().dot(y.head<3>()) - x[3] * y[3];
        };
        Vec4 t = g.m.col(3);
        t /= std::sqrt(-dot(t, t));
        g.m.col(3) = t;
        for (int j = 0; j < 3; ++j) {
            Vec4 c = g.m.col(j);
            c += dot(c, t) * t;
            for (int k = 0; k < j; ++k)
                c -= dot(c, g.m.col(k)) * g.m.col(k);
            c /= std::sqrt(dot(c, c));
            g.m.col(j) = c;
        }
        break;
    }
    }
    return g;
}

Isometry compose(const Isometry& a, const Isometry& b)
{
    if (a.space != b.space)
        throw SpaceMismatch();
    Isometry g{a.space, a.m * b.m, a.word};
    g.word.insert(g.word.end(), b.word.begin(), b.word.end());
    if (residual(g) > 1e-12)
        g = renormalized(g);
    return g;
}

Isometry inverse(const Isometry& a)
{
    Isometry g = a;
    switch (a.space) {
    case SpaceForm::Spherical: g.m = a.m.transpose(); break;
    case SpaceForm::Hyperbolic: g.m = kLorentz * a.m.transpose() * kLorentz; break;
    case SpaceForm::Euclidean: {
        const Mat3 rt = a.linear().transpose();
        g.m.setIdentity();
        g.m.topLeftCorner<3, 3>() = rt;
        g.m.topRightCorner<3, 1>() = -rt * a.translation();
        break;
    }
    }
    std::reverse(g.word.begin(), g.word.end());
    return g;
}

ModelPoint apply(const Isometry& a, const ModelPoint& p)
{
    return project(a.space, a.m * lift(a.space, p));
}

Fingerprint fingerprint(const Isometry& a)
{
    static const Vec3 refs[4] = {Vec3(0, 0, 0), Vec3(0.1, 0, 0), Vec3(0, 0.1, 0),
                                 Vec3(0, 0, 0.1)};
    Fingerprint f;
    for (const Vec3& r : refs) {
        const Vec4 x = a.m * lift(a.space, ModelPoint::ordinary(r));
        if (a.space == SpaceForm::Spherical) {
            const Vec4 y = x.normalized();
            f.raw.insert(f.raw.end(), y.data(), y.data() + 4);
        } else {
            const Vec3 y = chart(a.space, x);
            f.raw.insert(f.raw.end(), y.data(), y.data() + 3);
        }
    }
    for (double v : f.raw)
        f.cells.push_back(std::llround(v / kFingerprintPitch));
    return f;
}

bool same_action(const Fingerprint& a, const Fingerprint& b)
{
    if (a.cells.size() != b.cells.size())
        return false;
    for (std::size_t i = 0; i < a.cells.size(); ++i)
        if (std::abs(a.cells[i] - b.cells[i]) > 1)
            return false;
    return true;
}

bool operator<(const Fingerprint& a, const Fingerprint& b)
{
    return a.cells < b.cells;
}

double frame_gap(const Fingerprint& a, const Fingerprint& b)
{
    double g = 0;
    for (std::size_t i = 0; i < a.raw.size() && i < b.raw.size(); ++i)
        g = std::max(g, std::abs(a.raw[i] - b.raw[i]));
    return g;
}

ModelPoint halfspace_ball_conversion(const ModelPoint& p, Chart direction)
{
    const Vec3 e3 = Vec3::UnitZ();
    if (direction == Chart::ToBall) {
        if (p.kind == ModelPoint::Kind::AtInfinity)
            return ModelPoint::ideal(-e3);
        if (p.coords[2] < 0 || (p.coords[2] == 0 && p.kind == ModelPoint::Kind::Ordinary))
            throw DomainError("half-space point needs positive height");
        const Vec3 y = p.coords + e3;
        const Vec3 b = -e3 + 2 * y / y.squaredNorm();
        if (p.kind == ModelPoint::Kind::Ideal)
            return ModelPoint::ideal(b.normalized());
        return ModelPoint::ordinary(b);
    }
    const Vec3 y = p.coords + e3;
    if (y.squaredNorm() < 1e-24)
        return ModelPoint::at_infinity();
    if (p.kind == ModelPoint::Kind::Ordinary && p.coords.squaredNorm() >= 1)
        throw DomainError("ball point outside the open ball");
    Vec3 h = -e3 + 2 * y / y.squaredNorm();
    if (p.kind == ModelPoint::Kind::Ideal) {
        h[2] = 0;
        return ModelPoint::ideal(h);
    }
    return ModelPoint::ordinary(h);
}

}
