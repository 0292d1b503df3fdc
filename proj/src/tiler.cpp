#include "polyform/tiler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <limits>
#include <sstream>
#include <thread>

namespace pf {

namespace {

constexpr double kGroupTol = 1e-9;

bool involutive(const Isometry& g)
{
    return (g.m * g.m - Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-9;
}

template <class F>
void parallel_for(std::size_t n, int threads, F&& f)
{
    threads = std::max(1, std::min<int>(threads, static_cast<int>(n / 64) + 1));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i)
            f(i);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const std::size_t b = t * chunk, e = std::min(n, b + chunk);
        if (b >= e)
            break;
        pool.emplace_back([&, b, e] {
            for (std::size_t i = b; i < e; ++i)
                f(i);
        });
    }
    for (auto& th : pool)
        th.join();
}

// coarse buckets on the first three fingerprint coordinates
class ElementIndex {
public:
    using Key = std::array<std::int64_t, 3>;

    std::optional<int> find(const Fingerprint& f, const std::vector<Fingerprint>& all) const
    {
        const Key k = key(f);
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dz = -1; dz <= 1; ++dz) {
                    auto it = cells_.find({k[0] + dx, k[1] + dy, k[2] + dz});
                    if (it == cells_.end())
                        continue;
                    for (int id : it->second) {
                        const double gap = frame_gap(f, all[id]);
                        if (gap < 2 * kFingerprintPitch)
                            return id;
                        if (gap < 10 * kFingerprintPitch) {
                            std::ostringstream os;
                            os << "group elements nearly coincide (frame gap " << gap << ")";
                            throw TilerError(os.str());
                        }
                    }
                }
        return std::nullopt;
    }

    void insert(const Fingerprint& f, int id) { cells_[key(f)].push_back(id); }

private:
    struct Hash {
        std::size_t operator()(const Key& k) const
        {
            std::size_t h = 1469598103934665603ull;
            for (auto v : k)
                h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ull;
            return h;
        }
    };

    static Key key(const Fingerprint& f)
    {
        const double pitch = 1e-5;
        return {std::llround(f.raw[0] / pitch), std::llround(f.raw[1] / pitch),
                std::llround(f.raw[2] / pitch)};
    }

    std::unordered_map<Key, std::vector<int>, Hash> cells_;
};

std::vector<double> weld_coords(SpaceForm s, const Vec4& x)
{
    if (s == SpaceForm::Spherical)
        return {x[0], x[1], x[2], x[3]};
    const Vec3 c = chart(s, x);
    return {c[0], c[1], c[2]};
}

}

std::size_t PointIndex::KeyHash::operator()(const Key& k) const
{
    std::size_t h = 1469598103934665603ull;
    for (auto v : k)
        h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ull;
    return h;
}

PointIndex::Key PointIndex::key(const Vec4& x) const
{
    const auto c = weld_coords(space_, x);
    return {std::llround(c[0] / pitch_), std::llround(c[1] / pitch_),
            std::llround(c[2] / pitch_)};
}

std::optional<int> PointIndex::find(const Vec4& x, double tol, double* nearest) const
{
    const Key k = key(x);
    std::optional<int> best;
    double bd = std::numeric_limits<double>::infinity();
    for (int dx = -1; dx <= 1; ++dx)
        for (int dy = -1; dy <= 1; ++dy)
            for (int dz = -1; dz <= 1; ++dz) {
                auto it = cells_.find({k[0] + dx, k[1] + dy, k[2] + dz});
                if (it == cells_.end())
                    continue;
                for (const auto& [id, y] : it->second) {
                    const double d = point_distance(space_, x, y);
                    if (d < bd) {
                        bd = d;
                        best = id;
                    }
                }
            }
    if (nearest)
        *nearest = bd;
    if (bd < tol)
        return best;
    return std::nullopt;
}

void PointIndex::insert(const Vec4& x, int id)
{
    cells_[key(x)].push_back({id, x});
}

GroupSpec prismatic_generators(const Solid& fundamental)
{
    if (fundamental.spec.family != Family::Platonic)
        throw DomainError("prismatic generators need a Platonic fundamental solid");
    const SpaceForm s = fundamental.spec.space;
    for (const Edge& e : fundamental.edges) {
        if (!e.dihedral)
            continue;
        const double k = 2 * M_PI / *e.dihedral;
        if (std::abs(k - std::round(k)) > kGroupTol) {
            std::ostringstream os;
            os.precision(12);
            os << "dihedral angle " << *e.dihedral << " is not 2pi/n (2pi/angle = " << k << ")";
            throw TilerError(os.str());
        }
    }
    GroupSpec g;
    g.space = s;
    g.kind = GroupKind::Reflection;
    g.source = std::make_shared<const Solid>(fundamental);
    for (int f = 0; f < static_cast<int>(fundamental.faces.size()); ++f) {
        Isometry r = reflect_covector(s, fundamental.faces[f].covector);
        r.word = {static_cast<int>(g.generators.size())};
        g.generators.push_back(r);
        g.faces.push_back(f);
    }
    return g;
}

GroupSpec antiprismatic_generators(const Solid& kis)
{
    if (kis.spec.family != Family::Kis || !kis.kis)
        throw DomainError("antiprismatic generators need a kis fundamental solid");
    const double r = std::abs(kis.kis->sum - 2 * M_PI);
    if (r > kGroupTol) {
        std::ostringstream os;
        os.precision(12);
        os << "kis angle sum misses 2pi by " << r;
        throw TilerError(os.str());
    }
    const SpaceForm s = kis.spec.space;
    GroupSpec g;
    g.space = s;
    g.kind = GroupKind::ReflectionRotation;
    g.source = std::make_shared<const Solid>(kis);
    for (int f : kis.faces_in_orbit(0)) {
        const Face& F = kis.faces[f];
        Isometry r = compose(rotation(F.direction, M_PI / kis.spec.p, s),
                             reflect_covector(s, F.covector));
        r.word = {static_cast<int>(g.generators.size())};
        g.generators.push_back(r);
        g.faces.push_back(f);
    }
    return g;
}

int thread_count()
{
    if (const char* env = std::getenv("POLYFORM_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0)
            return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

OrbitSet enumerate(const GroupSpec& g, Limit limit, int threads)
{
    if (threads <= 0)
        threads = thread_count();
    if (g.space != SpaceForm::Spherical && limit.depth < 0 && limit.max_elements == 0)
        limit.depth = kDefaultDepth;
    std::vector<Isometry> gens;
    for (std::size_t i = 0; i < g.generators.size(); ++i) {
        gens.push_back(g.generators[i]);
        if (!involutive(g.generators[i])) {
            Isometry inv = inverse(g.generators[i]);
            inv.word = {-static_cast<int>(i) - 1};
            gens.push_back(inv);
        }
    }

    OrbitSet out;
    out.space = g.space;
    std::vector<int> level;
    ElementIndex index;
    Isometry id = identity(g.space);
    out.elements.push_back(id);
    out.prints.push_back(fingerprint(id));
    level.push_back(0);
    index.insert(out.prints[0], 0);

    std::vector<int> frontier = {0};
    int depth = 0;
    bool full = false;
    while (!frontier.empty() && (limit.depth < 0 || depth < limit.depth) && !full) {
        const std::size_t G = gens.size();
        std::vector<Isometry> prod(frontier.size() * G);
        std::vector<Fingerprint> prints(prod.size());
        parallel_for(prod.size(), threads, [&](std::size_t k) {
            prod[k] = compose(out.elements[frontier[k / G]], gens[k % G]);
            prints[k] = fingerprint(prod[k]);
        });
        std::vector<int> next;
        for (std::size_t k = 0; k < prod.size(); ++k) {
            if (index.find(prints[k], out.prints))
                continue;
            if (limit.max_elements && out.elements.size() >= limit.max_elements) {
                full = true;
                break;
            }
            const int idn = static_cast<int>(out.elements.size());
            out.elements.push_back(std::move(prod[k]));
            out.prints.push_back(std::move(prints[k]));
            level.push_back(depth + 1);
            index.insert(out.prints.back(), idn);
            next.push_back(idn);
        }
        frontier = std::move(next);
        ++depth;
    }
    out.depth = depth;
    out.truncated = full;
    if (!full && !frontier.empty()) {
        // one more level decides whether the orbit was already complete
        for (int f : frontier) {
            for (const Isometry& s : gens) {
                if (!index.find(fingerprint(compose(out.elements[f], s)), out.prints)) {
                    out.truncated = true;
                    break;
                }
            }
            if (out.truncated)
                break;
        }
    }

    std::vector<int> order(out.elements.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (level[a] != level[b])
            return level[a] < level[b];
        return out.prints[a] < out.prints[b];
    });
    OrbitSet sorted;
    sorted.space = out.space;
    sorted.depth = out.depth;
    sorted.truncated = out.truncated;
    for (int i : order) {
        sorted.elements.push_back(std::move(out.elements[i]));
        sorted.prints.push_back(std::move(out.prints[i]));
    }
    return sorted;
}

Vec4 apply_point(const Isometry& g, const Vec4& x)
{
    return normalize_point(g.space, g.m * x);
}

std::vector<int> distinct_images(const OrbitSet& orbit, const Vec4& x)
{
    PointIndex idx(orbit.space);
    std::vector<int> out;
    for (std::size_t i = 0; i < orbit.elements.size(); ++i) {
        const Vec4 y = apply_point(orbit.elements[i], x);
        if (idx.find(y, 1e-7))
            continue;
        idx.insert(y, static_cast<int>(out.size()));
        out.push_back(static_cast<int>(i));
    }
    return out;
}

FundamentalPatch fundamental_patch(PatchKind kind, const Solid& inner, const Solid& fundamental,
                                   const SolveResult& solve)
{
    if (!inner.vertices)
        throw DomainError("inner solid has no vertices");
    if (solve.residual > 1e-9) {
        std::ostringstream os;
        os << "solve residual " << solve.residual << " too large for a patch";
        throw TilerError(os.str());
    }
    const SpaceForm s = inner.spec.space;
    if (fundamental.spec.space != s)
        throw SpaceMismatch();
    FundamentalPatch P;
    P.kind = kind;
    P.space = s;
    P.inner = std::make_shared<const Solid>(inner);
    P.fundamental = std::make_shared<const Solid>(fundamental);
    const auto& V = *inner.vertices;

    for (const Face& face : inner.faces) {
        if (face.orbit != 0) {
            PatchPolygon poly;
            poly.role = 1;
            for (int v : face.loop)
                poly.vertices.push_back(V[v].point);
            P.polygons.push_back(std::move(poly));
            continue;
        }
        const Face* fund = nullptr;
        for (const Face& f : fundamental.faces)
            if (f.orbit == 0 && f.direction.dot(face.direction) > 1 - 1e-9)
                fund = &f;
        if (!fund)
            throw DomainError("no fundamental face parallel to an inner face");
        Isometry g = reflect_covector(s, fund->covector);
        if (kind == PatchKind::Antiprismatic)
            g = compose(rotation(fund->direction, M_PI / face.gonality, s), g);

        std::vector<Vec4> bot, top;
        for (int v : face.loop) {
            bot.push_back(V[v].point);
            top.push_back(apply_point(g, V[v].point));
        }
        const int k = static_cast<int>(bot.size());
        const double base = point_distance(s, bot[0], bot[1]);
        auto check = [&](const Vec4& a, const Vec4& b) {
            const double d = point_distance(s, a, b);
            if (std::abs(d - base) > 1e-8 * std::max(1.0, base)) {
                std::ostringstream os;
                os.precision(12);
                os << "attached polygon is not regular: edge " << d << " against " << base;
                throw TilerError(os.str());
            }
        };
        if (kind == PatchKind::Prismatic) {
            for (int i = 0; i < k; ++i) {
                const int j = (i + 1) % k;
                check(bot[i], top[i]);
                P.polygons.push_back({{bot[i], bot[j], top[j], top[i]}, 0});
            }
        } else {
            auto nearest = [&](const Vec4& a, const Vec4& b, const std::vector<Vec4>& pool) {
                int best = 0;
                double bd = std::numeric_limits<double>::infinity();
                for (int m = 0; m < k; ++m) {
                    const double d =
                        point_distance(s, a, pool[m]) + point_distance(s, b, pool[m]);
                    if (d < bd) {
                        bd = d;
                        best = m;
                    }
                }
                return best;
            };
            for (int i = 0; i < k; ++i) {
                const int j = (i + 1) % k;
                const int t = nearest(bot[i], bot[j], top);
                check(bot[i], top[t]);
                check(bot[j], top[t]);
                P.polygons.push_back({{bot[i], bot[j], top[t]}, 0});
                const int b = nearest(top[i], top[j], bot);
                P.polygons.push_back({{top[j], top[i], bot[b]}, 0});
            }
        }
    }
    return P;
}

void Surface::finalize()
{
    index_ = PointIndex(space);
    for (int v = 0; v < static_cast<int>(vertices.size()); ++v)
        index_.insert(vertices[v], v);
    face_lookup_.clear();
    edge_faces_.clear();
    edges.clear();
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
        auto key = faces[f];
        std::sort(key.begin(), key.end());
        face_lookup_[key] = f;
        const auto& L = faces[f];
        for (std::size_t i = 0; i < L.size(); ++i) {
            int a = L[i], b = L[(i + 1) % L.size()];
            if (a > b)
                std::swap(a, b);
            auto& fs = edge_faces_[{a, b}];
            if (fs.empty())
                edges.push_back({a, b});
            fs.push_back(f);
        }
    }

    neighbours_.assign(vertices.size(), {});
    for (const auto& [a, b] : edges) {
        neighbours_[a].push_back(b);
        neighbours_[b].push_back(a);
    }

    // consistent orientation by breadth-first flipping
    orientable = true;
    std::vector<int> state(faces.size(), 0); // 0 unseen, 1 kept, 2 flipped
    auto directed = [&](int f, int a, int b) {
        const auto& L = faces[f];
        for (std::size_t i = 0; i < L.size(); ++i)
            if (L[i] == a && L[(i + 1) % L.size()] == b)
                return true;
        return false;
    };
    for (int seed = 0; seed < static_cast<int>(faces.size()); ++seed) {
        if (state[seed])
            continue;
        state[seed] = 1;
        std::deque<int> queue = {seed};
        while (!queue.empty()) {
            const int f = queue.front();
            queue.pop_front();
            const auto L = faces[f];
            for (std::size_t i = 0; i < L.size(); ++i) {
                const int a = L[i], b = L[(i + 1) % L.size()];
                for (int g : faces_of_edge(a, b)) {
                    if (g == f)
                        continue;
                    if (!state[g]) {
                        if (directed(g, a, b))
                            std::reverse(faces[g].begin(), faces[g].end());
                        state[g] = 1;
                        queue.push_back(g);
                    } else if (directed(g, a, b)) {
                        orientable = false;
                    }
                }
            }
        }
    }
}

std::optional<int> Surface::find_vertex(const Vec4& x, double tol) const
{
    return index_.find(x, tol);
}

std::optional<int> Surface::find_face(std::vector<int> verts) const
{
    std::sort(verts.begin(), verts.end());
    auto it = face_lookup_.find(verts);
    if (it == face_lookup_.end())
        return std::nullopt;
    return it->second;
}

const std::vector<int>& Surface::faces_of_edge(int a, int b) const
{
    static const std::vector<int> none;
    if (a > b)
        std::swap(a, b);
    auto it = edge_faces_.find({a, b});
    return it == edge_faces_.end() ? none : it->second;
}

std::vector<std::vector<int>> Surface::vertex_faces() const
{
    std::vector<std::vector<int>> out(vertices.size());
    for (int f = 0; f < static_cast<int>(faces.size()); ++f)
        for (int v : faces[f])
            out[v].push_back(f);
    return out;
}

bool Surface::closed() const
{
    for (const auto& [e, fs] : edge_faces_)
        if (fs.size() != 2)
            return false;
    return true;
}

bool Surface::interior(int v) const
{
    if (neighbours_[v].empty())
        return false;
    for (int w : neighbours_[v])
        if (faces_of_edge(v, w).size() != 2)
            return false;
    return true;
}

Surface build_surface(const FundamentalPatch& patch, const OrbitSet& orbit, double weld_tol)
{
    if (patch.space != orbit.space)
        throw SpaceMismatch();
    const SpaceForm s = patch.space;
    Surface S;
    S.space = s;
    S.patch = std::make_shared<const FundamentalPatch>(patch);
    S.orbit = std::make_shared<const OrbitSet>(orbit);

    // the patch is symmetric under the cell stabilizer: one element per cell suffices
    const std::vector<int> reps = distinct_images(orbit, origin(s));

    std::vector<std::vector<std::vector<Vec4>>> images(reps.size());
    parallel_for(reps.size(), thread_count(), [&](std::size_t r) {
        const Isometry& g = orbit.elements[reps[r]];
        for (const PatchPolygon& poly : patch.polygons) {
            std::vector<Vec4> pts;
            for (const Vec4& x : poly.vertices)
                pts.push_back(apply_point(g, x));
            images[r].push_back(std::move(pts));
        }
    });

    PointIndex index(s);
    std::map<std::vector<int>, int> seen;
    for (std::size_t r = 0; r < reps.size(); ++r) {
        for (std::size_t k = 0; k < patch.polygons.size(); ++k) {
            std::vector<int> ids;
            for (const Vec4& x : images[r][k]) {
                double d = 0;
                auto hit = index.find(x, weld_tol, &d);
                if (!hit && d < 3 * weld_tol) {
                    std::ostringstream os;
                    os << "weld ambiguity: vertices " << d << " apart";
                    throw TilerError(os.str());
                }
                if (!hit) {
                    hit = static_cast<int>(S.vertices.size());
                    S.vertices.push_back(x);
                    index.insert(x, *hit);
                }
                ids.push_back(*hit);
            }
            auto key = ids;
            std::sort(key.begin(), key.end());
            if (std::adjacent_find(key.begin(), key.end()) != key.end())
                throw TilerError("polygon collapsed while welding");
            if (seen.count(key))
                continue;
            seen[key] = static_cast<int>(S.faces.size());
            S.faces.push_back(std::move(ids));
            S.face_element.push_back(reps[r]);
            S.face_role.push_back(patch.polygons[k].role);
        }
    }
    S.finalize();
    return S;
}

}
