#pragma once

#include "polyform/solvers.hpp"

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace pf {

struct TilerError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class GroupKind { Reflection, ReflectionRotation };

struct GroupSpec {
    SpaceForm space = SpaceForm::Euclidean;
    GroupKind kind = GroupKind::Reflection;
    std::vector<Isometry> generators;
    std::vector<int> faces; // face of the source solid behind each generator
    std::shared_ptr<const Solid> source;
};

GroupSpec prismatic_generators(const Solid& fundamental);
GroupSpec antiprismatic_generators(const Solid& kis);

// word length used when an infinite group is enumerated without a limit
inline constexpr int kDefaultDepth = 5;

struct Limit {
    int depth = -1;               // negative: unbounded (kDefaultDepth for infinite groups)
    std::size_t max_elements = 0; // zero: unbounded
};

struct OrbitSet {
    SpaceForm space = SpaceForm::Euclidean;
    std::vector<Isometry> elements;
    std::vector<Fingerprint> prints;
    int depth = 0;
    bool truncated = false;
};

int thread_count();
OrbitSet enumerate(const GroupSpec& g, Limit limit, int threads = 0);
// indices of the first element (in orbit order) mapping x to each distinct image
std::vector<int> distinct_images(const OrbitSet& orbit, const Vec4& x);

enum class PatchKind { Prismatic, Antiprismatic };

struct PatchPolygon {
    std::vector<Vec4> vertices;
    int role = 0; // 0: prism / antiprism side, 1: face kept from the inner solid
};

struct FundamentalPatch {
    PatchKind kind = PatchKind::Prismatic;
    SpaceForm space = SpaceForm::Euclidean;
    std::vector<PatchPolygon> polygons;
    std::shared_ptr<const Solid> inner;
    std::shared_ptr<const Solid> fundamental;
};

FundamentalPatch fundamental_patch(PatchKind kind, const Solid& inner, const Solid& fundamental,
                                   const SolveResult& solve);

// point lookup by geodesic distance on a coarse grid of chart coordinates
class PointIndex {
public:
    PointIndex(SpaceForm s = SpaceForm::Euclidean, double pitch = 1e-6) : space_(s), pitch_(pitch) {}
    std::optional<int> find(const Vec4& x, double tol, double* nearest = nullptr) const;
    void insert(const Vec4& x, int id);

private:
    using Key = std::array<std::int64_t, 3>;
    struct KeyHash {
        std::size_t operator()(const Key& k) const;
    };
    Key key(const Vec4& x) const;

    SpaceForm space_;
    double pitch_;
    std::unordered_map<Key, std::vector<std::pair<int, Vec4>>, KeyHash> cells_;
};

struct Surface {
    SpaceForm space = SpaceForm::Euclidean;
    std::vector<Vec4> vertices;
    std::vector<std::vector<int>> faces;
    std::vector<int> face_element; // orbit element that produced the face
    std::vector<int> face_role;
    std::vector<std::array<int, 2>> edges;
    bool orientable = true;
    std::shared_ptr<const FundamentalPatch> patch;
    std::shared_ptr<const OrbitSet> orbit;

    void finalize(); // edges, adjacency, lookup tables, orientation
    ModelPoint chart_point(int v) const { return project(space, vertices[v]); }
    std::optional<int> find_vertex(const Vec4& x, double tol = 1e-7) const;
    std::optional<int> find_face(std::vector<int> verts) const;
    const std::vector<int>& faces_of_edge(int a, int b) const;
    std::vector<std::vector<int>> vertex_faces() const;
    bool closed() const;
    bool interior(int v) const;

private:
    PointIndex index_;
    std::map<std::vector<int>, int> face_lookup_;
    std::map<std::pair<int, int>, std::vector<int>> edge_faces_;
    std::vector<std::vector<int>> neighbours_;
};

Surface build_surface(const FundamentalPatch& patch, const OrbitSet& orbit,
                      double weld_tol = 1e-7);

Vec4 apply_point(const Isometry& g, const Vec4& x);

}
