#pragma once

#include "polyform/geometry.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace pf {

struct NonexistenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Family { Platonic, Truncated, Rectified, Pyramid, Kis };
enum class Classification { Finite, Ideal, Hyperideal, Edgeless, NotApplicable };

std::string to_string(Family f);
std::string to_string(Classification c);

struct SolidSpec {
    int p = 4;
    int q = 3;
    Family family = Family::Platonic;
    double a = 0;
    SpaceForm space = SpaceForm::Euclidean;
    int n = 0;
};

struct PlatonicType {
    int p, q;
    std::vector<Vec3> face_dirs;
    std::vector<Vec3> vertex_dirs;
    std::vector<std::vector<int>> face_loop;    // ccw seen from outside
    std::vector<std::vector<int>> vertex_cycle; // faces around a vertex, ccw
    struct Edge {
        int f0, f1, v0, v1;
    };
    std::vector<Edge> edges;
    double theta; // face direction to incident vertex direction
    double chi;   // face direction to incident edge-midpoint direction
    Vec3 edge_mid(int e) const;
    int edge_between(int f0, int f1) const;
};

const PlatonicType& platonic_type(int p, int q);
bool is_platonic(int p, int q);

struct Face {
    GeodesicPlane plane;
    Vec4 covector;
    Vec3 direction;
    int gonality = 0;
    int orbit = 0;
    std::vector<int> loop;
};

struct Vertex {
    Vec4 point;
    std::vector<int> faces;
};

struct Edge {
    int f0, f1;
    int v0 = -1, v1 = -1;
    int orbit = 0;
    std::optional<double> dihedral;
};

struct Pyramid {
    enum class Kind { Flat, Subdivision, IdealApex, Column };

    SpaceForm space = SpaceForm::Hyperbolic;
    Kind kind = Kind::Flat;
    int q = 4, n = 2;
    double r = 0;
    double s = 0;
    double base_edge_length = 0;
    double gamma = 0;
    Vec4 base;
    std::vector<Vec4> sides;
    std::vector<Vec4> base_vertices;
    bool ideal_base = false;

    GeodesicPlane base_plane() const { return plane_shape(space, base); }
    std::vector<GeodesicPlane> side_planes() const;
};

struct KisData {
    double alpha, beta, gamma, sum;
    Pyramid pyramid;
};

struct Solid {
    SolidSpec spec;
    double inradius = 0;
    std::vector<Face> faces;
    std::vector<Edge> edges;
    std::optional<std::vector<Vertex>> vertices;
    Classification classification = Classification::Finite;
    Vec3 witness = Vec3::Zero();
    std::optional<KisData> kis;

    std::vector<int> faces_in_orbit(int orbit) const;
    double edge_length(const Edge& e) const;
};

// parameter a <-> canonical inradius t of the face planes
double platonic_inradius(int p, int q, double a, SpaceForm s);
double platonic_parameter(int p, int q, double t, SpaceForm s);
double platonic_edge(int p, int q, double t, SpaceForm s);

Solid platonic(int p, int q, double a, SpaceForm s);
Solid platonic_at(int p, int q, double t, SpaceForm s);
Classification classify(const Solid& s);

Solid truncate(const Solid& s);
Solid rectify(const Solid& s);
Solid truncated_at(int p, int q, double t, SpaceForm s);
Solid rectified_at(int p, int q, double t, SpaceForm s);
// parent inradius at which the regular truncation becomes ideal (hyperbolic)
double ideal_truncation_inradius(int p, int q);
Solid ideal_truncation(int p, int q);

Pyramid pyramid(int q, int n, double s_param, SpaceForm s);
Pyramid pyramid_with_edge(int q, int n, double edge, SpaceForm s);
Pyramid::Kind pyramid_kind(int q, int n, SpaceForm s);
double column_radius(int q, int n);
double column_ideal_threshold(int q, int n);
double pyramid_min_edge(int q, int n, SpaceForm s);
double ideal_pyramid_gamma(int q, int n);

Solid kis(int p, int q, int n, double a, SpaceForm s);
Solid kis_at(int p, int q, int n, double t, SpaceForm s);
KisData kis_angles_at(int p, int q, int n, double t, SpaceForm s);

}
