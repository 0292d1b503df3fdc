#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pf {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

enum class SpaceForm { Spherical, Euclidean, Hyperbolic };

std::string to_string(SpaceForm s);
std::optional<SpaceForm> parse_space(std::string_view name);

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct SpaceMismatch : std::invalid_argument {
    SpaceMismatch() : std::invalid_argument("space form mismatch") {}
};

struct ModelPoint {
    enum class Kind { Ordinary, Ideal, AtInfinity };

    Vec3 coords = Vec3::Zero();
    Kind kind = Kind::Ordinary;

    static ModelPoint ordinary(const Vec3& x) { return {x, Kind::Ordinary}; }
    static ModelPoint ideal(const Vec3& x) { return {x, Kind::Ideal}; }
    static ModelPoint at_infinity() { return {Vec3::Zero(), Kind::AtInfinity}; }
};

struct Sphere {
    Vec3 center;
    double radius;
};

struct Flat {
    Vec3 normal;
    double offset;
};

struct GeodesicPlane {
    SpaceForm space;
    std::variant<Sphere, Flat> shape;

    bool is_sphere() const { return std::holds_alternative<Sphere>(shape); }
    const Sphere& sphere() const { return std::get<Sphere>(shape); }
    const Flat& flat() const { return std::get<Flat>(shape); }
};

// Linear model: S^3 in R^4, hyperboloid with time last, homogeneous E^3.
Vec4 origin(SpaceForm s);
Vec4 lift(SpaceForm s, const ModelPoint& p);
ModelPoint project(SpaceForm s, const Vec4& x);
Vec4 normalize_point(SpaceForm s, const Vec4& x);
double point_dot(SpaceForm s, const Vec4& x, const Vec4& y);
double point_distance(SpaceForm s, const Vec4& x, const Vec4& y);

// point at distance t from the origin along unit direction u, and the plane
// through it perpendicular to u (origin on the negative side)
Vec4 point_at(SpaceForm s, const Vec3& u, double t);
Vec4 plane_at(SpaceForm s, const Vec3& u, double t);
Vec4 along(SpaceForm s, const Vec4& m, const Vec4& d, double tau);

double dual_dot(SpaceForm s, const Vec4& a, const Vec4& b);
Vec4 normalize_plane(SpaceForm s, const Vec4& c);
Vec4 cross4(const Vec4& a, const Vec4& b, const Vec4& c);
Vec4 plane_through(SpaceForm s, const Vec4& x, const Vec4& y, const Vec4& z,
                   const Vec4& inside);
Vec4 meet(SpaceForm s, const Vec4& a, const Vec4& b, const Vec4& c, const Vec4& near);
std::optional<double> interior_angle(SpaceForm s, const Vec4& a, const Vec4& b);
Vec3 chart(SpaceForm s, const Vec4& x);

Vec4 plane_covector(const GeodesicPlane& pl);
GeodesicPlane plane_shape(SpaceForm s, const Vec4& c);

double distance(SpaceForm s, const ModelPoint& p, const ModelPoint& q);
GeodesicPlane plane_from_center(SpaceForm s, const Vec3& x);
std::optional<double> intersection_angle(const GeodesicPlane& a, const GeodesicPlane& b,
                                         const Vec3& witness = Vec3::Zero());

struct Isometry {
    SpaceForm space = SpaceForm::Euclidean;
    Mat4 m = Mat4::Identity();
    std::vector<int> word;

    Mat3 linear() const { return m.topLeftCorner<3, 3>(); }
    Vec3 translation() const { return m.topRightCorner<3, 1>(); }
    bool parity() const { return linear().determinant() < 0; }
};

Isometry identity(SpaceForm s);
Isometry reflect(const GeodesicPlane& pl);
Isometry reflect_covector(SpaceForm s, const Vec4& c);
Isometry rotation(const Vec3& axis, double phi, SpaceForm s);
Isometry compose(const Isometry& a, const Isometry& b);
Isometry inverse(const Isometry& a);
ModelPoint apply(const Isometry& a, const ModelPoint& p);
double residual(const Isometry& a);
Isometry renormalized(const Isometry& a);

constexpr double kFingerprintPitch = 1e-7;

struct Fingerprint {
    std::vector<double> raw;
    std::vector<std::int64_t> cells;
};

Fingerprint fingerprint(const Isometry& a);
bool same_action(const Fingerprint& a, const Fingerprint& b);
bool operator<(const Fingerprint& a, const Fingerprint& b);
double frame_gap(const Fingerprint& a, const Fingerprint& b);

enum class Chart { ToBall, ToHalfspace };
ModelPoint halfspace_ball_conversion(const ModelPoint& p, Chart direction);

}
