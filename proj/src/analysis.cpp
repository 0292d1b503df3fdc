#include "polyform/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <functional>

namespace pf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x)
    {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b)
    {
        a = find(a);
        b = find(b);
        if (a != b)
            parent[std::max(a, b)] = std::min(a, b);
    }
};

Vec4 tangent(SpaceForm s, const Vec4& x, const Vec4& y)
{
    if (s == SpaceForm::Euclidean) {
        Vec4 t = y / y[3] - x / x[3];
        t[3] = 0;
        return t;
    }
    return y - (point_dot(s, x, y) / point_dot(s, x, x)) * x;
}

double tnorm(SpaceForm s, const Vec4& t)
{
    return std::sqrt(std::max(0.0, point_dot(s, t, t)));
}

double corner_angle(SpaceForm s, const Vec4& x, const Vec4& a, const Vec4& b)
{
    const Vec4 u = tangent(s, x, a), v = tangent(s, x, b);
    const double c = point_dot(s, u, v) / (tnorm(s, u) * tnorm(s, v));
    return std::acos(std::clamp(c, -1.0, 1.0));
}

// orthonormal coordinates on the tangent space at x
std::array<Vec4, 3> tangent_basis(SpaceForm s, const Vec4& x)
{
    std::array<Vec4, 3> out;
    int k = 0;
    for (int i = 0; i < 4 && k < 3; ++i) {
        Vec4 e = Vec4::Zero();
        e[i] = 1;
        Vec4 t;
        if (s == SpaceForm::Euclidean) {
            if (i == 3)
                continue;
            t = e;
        } else {
            t = e - (point_dot(s, x, e) / point_dot(s, x, x)) * x;
        }
        for (int j = 0; j < k; ++j)
            t -= point_dot(s, t, out[j]) * out[j];
        const double n = tnorm(s, t);
        if (n < 0.3)
            continue;
        out[k++] = t / n;
    }
    if (k < 3)
        throw AnalysisError("degenerate tangent space");
    return out;
}

struct Star {
    std::vector<int> ring;      // neighbours in cyclic order
    std::vector<int> gonality;  // face between ring[i] and ring[i+1]
};

std::optional<Star> star_of(const Surface& S, int v, const std::vector<int>& faces)
{
    if (faces.empty())
        return std::nullopt;
    auto around = [&](int f) {
        const auto& L = S.faces[f];
        const int k = static_cast<int>(L.size());
        for (int i = 0; i < k; ++i)
            if (L[i] == v)
                return std::pair{L[(i + k - 1) % k], L[(i + 1) % k]};
        throw AnalysisError("vertex not on face");
    };
    Star st;
    int f = faces.front();
    auto [prev, next] = around(f);
    const int first = prev;
    st.ring.push_back(prev);
    for (std::size_t step = 0; step < faces.size(); ++step) {
        st.gonality.push_back(static_cast<int>(S.faces[f].size()));
        if (next == first)
            break;
        st.ring.push_back(next);
        const auto& fs = S.faces_of_edge(v, next);
        if (fs.size() != 2)
            return std::nullopt;
        const int g = fs[0] == f ? fs[1] : fs[0];
        auto [a, b] = around(g);
        f = g;
        next = a == next ? b : a;
    }
    if (st.ring.size() != faces.size() || next != first)
        return std::nullopt;
    return st;
}

std::vector<Vec3> star_vectors(const Surface& S, int v, const Star& st)
{
    const auto B = tangent_basis(S.space, S.vertices[v]);
    std::vector<Vec3> out;
    for (int w : st.ring) {
        const Vec4 t = tangent(S.space, S.vertices[v], S.vertices[w]);
        const double len = point_distance(S.space, S.vertices[v], S.vertices[w]);
        Vec3 c(point_dot(S.space, t, B[0]), point_dot(S.space, t, B[1]),
               point_dot(S.space, t, B[2]));
        out.push_back(c.normalized() * len);
    }
    return out;
}

// best orthogonal map carrying one star onto the other over all cyclic alignments
double star_gap(const std::vector<Vec3>& a, const std::vector<int>& ga, const std::vector<Vec3>& b,
                const std::vector<int>& gb)
{
    const int k = static_cast<int>(a.size());
    if (static_cast<int>(b.size()) != k)
        return kInf;
    double best = kInf;
    for (int dir : {1, -1})
        for (int shift = 0; shift < k; ++shift) {
            std::vector<int> idx(k);
            bool gon = true;
            for (int i = 0; i < k; ++i) {
                idx[i] = ((shift + dir * i) % k + k) % k;
            }
            for (int i = 0; i < k; ++i) {
                // face between i and i+1 maps to the face between idx[i] and idx[i+1]
                const int j = dir == 1 ? idx[i] : (idx[i] + k - 1) % k;
                if (ga[i] != gb[j])
                    gon = false;
            }
            if (!gon)
                continue;
            Mat3 H = Mat3::Zero();
            for (int i = 0; i < k; ++i)
                H += b[idx[i]] * a[i].transpose();
            Eigen::JacobiSVD<Mat3> svd(H, Eigen::ComputeFullU | Eigen::ComputeFullV);
            const Mat3 Q = svd.matrixU() * svd.matrixV().transpose();
            double gap = 0;
            for (int i = 0; i < k; ++i)
                gap = std::max(gap, (Q * a[i] - b[idx[i]]).norm());
            best = std::min(best, gap);
        }
    return best;
}

// precision scale of a hyperboloid point: errors grow with the square of its height
double weight(SpaceForm s, const Vec4& x)
{
    return s == SpaceForm::Hyperbolic ? std::max(1.0, x[3] * x[3]) : 1.0;
}

Vec4 face_centroid(const Surface& S, int f)
{
    Vec4 c = Vec4::Zero();
    for (int v : S.faces[f])
        c += S.space == SpaceForm::Euclidean ? Vec4(S.vertices[v] / S.vertices[v][3])
                                             : S.vertices[v];
    return normalize_point(S.space, c);
}

int flag_at(const std::vector<int>& off, const Surface& S, int f, int a, int b)
{
    const auto& L = S.faces[f];
    const int k = static_cast<int>(L.size());
    for (int j = 0; j < k; ++j) {
        if (L[j] == a && L[(j + 1) % k] == b)
            return off[f] + 2 * j;
        if (L[j] == b && L[(j + 1) % k] == a)
            return off[f] + 2 * j + 1;
    }
    throw AnalysisError("edge not on face");
}

struct Gluing {
    std::vector<int> offset;
    std::vector<std::pair<int, int>> flag_owner; // (face, edge*2+end)
    std::vector<bool> core;
    UnionFind uf;
    explicit Gluing(const Surface& S) : uf(0)
    {
        int n = 0;
        for (const auto& L : S.faces) {
            offset.push_back(n);
            for (int i = 0; i < static_cast<int>(2 * L.size()); ++i)
                flag_owner.push_back({static_cast<int>(offset.size()) - 1, i});
            n += 2 * static_cast<int>(L.size());
        }
        uf = UnionFind(n);
        core.assign(S.faces.size(), false);
    }

    // image of every flag of face f under h, if the image face is on the surface
    std::optional<std::vector<int>> image(const Surface& S, int f, const Isometry& h) const
    {
        const auto& L = S.faces[f];
        std::vector<int> img;
        for (int v : L) {
            auto w = S.find_vertex(apply_point(h, S.vertices[v]), 1e-6);
            if (!w)
                return std::nullopt;
            img.push_back(*w);
        }
        auto g = S.find_face(img);
        if (!g)
            return std::nullopt;
        const int k = static_cast<int>(L.size());
        std::vector<int> out(2 * k);
        for (int i = 0; i < k; ++i)
            for (int e = 0; e < 2; ++e)
                out[2 * i + e] =
                    flag_at(offset, S, *g, img[(i + e) % k], img[(i + 1 - e) % k]);
        return out;
    }

    bool link(const Surface& S, int f, const Isometry& h)
    {
        const auto img = image(S, f, h);
        if (!img)
            return false;
        for (std::size_t x = 0; x < img->size(); ++x)
            uf.unite(offset[f] + static_cast<int>(x), (*img)[x]);
        return true;
    }

    // carries a flag outside the core onto a core flag; -1 when impossible
    std::function<int(int)> resolve = [](int) { return -1; };

    FlagMap finish(const Surface& S)
    {
        const int n = static_cast<int>(flag_owner.size());
        std::vector<int> cls(n, -1);
        std::vector<int> rep;
        for (int x = 0; x < n; ++x) {
            if (!core[flag_owner[x].first])
                continue;
            const int r = uf.find(x);
            if (cls[r] < 0) {
                cls[r] = static_cast<int>(rep.size());
                rep.push_back(x);
            }
        }
        auto class_of = [&](int x) {
            int c = cls[uf.find(x)];
            if (c < 0) {
                const int y = resolve(x);
                if (y >= 0)
                    c = cls[uf.find(y)];
            }
            if (c < 0)
                throw AnalysisError(
                    "surface does not cover the neighbourhood of the core faces; build deeper");
            return c;
        };
        auto moves = [&](int x) {
            const auto [f, ie] = flag_owner[x];
            const auto& L = S.faces[f];
            const int k = static_cast<int>(L.size());
            const int i = ie / 2, e = ie % 2;
            const int a = L[(i + e) % k], b = L[(i + 1 - e) % k];
            const int r0 = offset[f] + 2 * i + (1 - e);
            const int r1 = e == 0 ? offset[f] + 2 * ((i + k - 1) % k) + 1
                                  : offset[f] + 2 * ((i + 1) % k);
            const auto& fs = S.faces_of_edge(a, b);
            if (fs.size() != 2)
                throw AnalysisError(
                    "surface does not cover the neighbourhood of the core faces; build deeper");
            const int g = fs[0] == f ? fs[1] : fs[0];
            return std::array<int, 3>{class_of(r0), class_of(r1),
                                      class_of(flag_at(offset, S, g, a, b))};
        };
        FlagMap m;
        const int N = static_cast<int>(rep.size());
        m.r0.resize(N);
        m.r1.resize(N);
        m.r2.resize(N);
        for (int c = 0; c < N; ++c) {
            const auto t = moves(rep[c]);
            m.r0[c] = t[0];
            m.r1[c] = t[1];
            m.r2[c] = t[2];
        }
        for (int x = 0; x < n; ++x) {
            if (!core[flag_owner[x].first])
                continue;
            const auto t = moves(x);
            const int c = class_of(x);
            if (t[0] != m.r0[c] || t[1] != m.r1[c] || t[2] != m.r2[c])
                throw AnalysisError("face identifications are not compatible with the surface");
        }
        for (int c = 0; c < N; ++c)
            if (m.r0[m.r0[c]] != c || m.r1[m.r1[c]] != c || m.r2[m.r2[c]] != c ||
                m.r0[c] == c || m.r1[c] == c || m.r2[c] == c)
                throw AnalysisError("quotient is not a surface");
        return m;
    }
};

std::vector<std::vector<int>> orbits(int n, const std::vector<const std::vector<int>*>& gens)
{
    std::vector<int> seen(n, 0);
    std::vector<std::vector<int>> out;
    for (int s = 0; s < n; ++s) {
        if (seen[s])
            continue;
        std::vector<int> orb = {s};
        seen[s] = 1;
        for (std::size_t k = 0; k < orb.size(); ++k)
            for (const auto* g : gens) {
                const int y = (*g)[orb[k]];
                if (!seen[y]) {
                    seen[y] = 1;
                    orb.push_back(y);
                }
            }
        out.push_back(std::move(orb));
    }
    return out;
}

// no fixed point in the space: no eigenvalue 1 on S^3, no fixed timelike vector on H^3
bool acts_freely(const Isometry& h)
{
    Eigen::JacobiSVD<Mat4> svd(h.m - Mat4::Identity(), Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    std::vector<Vec4> kernel;
    for (int i = 0; i < 4; ++i)
        if (sv[i] < 1e-9)
            kernel.push_back(svd.matrixV().col(i));
    if (kernel.empty())
        return true;
    if (h.space != SpaceForm::Hyperbolic)
        return false;
    const int k = static_cast<int>(kernel.size());
    Eigen::MatrixXd G(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            G(i, j) = point_dot(SpaceForm::Hyperbolic, kernel[i], kernel[j]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    return es.eigenvalues().minCoeff() >= -1e-12;
}

Isometry linear_isometry(SpaceForm s, const Mat3& M)
{
    Isometry g = identity(s);
    g.m.topLeftCorner<3, 3>() = M;
    return g;
}

}

RegularityReport verify_regular_faces(const Surface& S, double tol)
{
    RegularityReport r;
    if (S.faces.empty())
        return r;
    const auto& L0 = S.faces[0];
    const double d0 = point_distance(S.space, S.vertices[L0[0]], S.vertices[L0[1]]);
    std::map<int, double> ref;
    for (const auto& L : S.faces) {
        const int k = static_cast<int>(L.size());
        double w = 1;
        for (int v : L)
            w = std::max(w, weight(S.space, S.vertices[v]));
        double alo = kInf, ahi = -kInf;
        for (int i = 0; i < k; ++i) {
            const Vec4& x = S.vertices[L[i]];
            const double d = point_distance(S.space, x, S.vertices[L[(i + 1) % k]]);
            r.edge_spread = std::max(r.edge_spread, std::abs(d - d0) / w);
            const double a = corner_angle(S.space, x, S.vertices[L[(i + k - 1) % k]],
                                          S.vertices[L[(i + 1) % k]]);
            alo = std::min(alo, a);
            ahi = std::max(ahi, a);
        }
        auto [it, fresh] = ref.try_emplace(k, 0.5 * (alo + ahi));
        r.angle_spread = std::max(r.angle_spread, (ahi - alo) / w);
        r.angle_spread = std::max(r.angle_spread, std::abs(0.5 * (alo + ahi) - it->second) / w);
    }
    r.edge_length = d0;
    r.corner_angle = ref;
    r.faces_regular = r.edge_spread <= tol * std::max(1.0, d0) && r.angle_spread <= tol;
    return r;
}

void verify_vertex_figures(const Surface& S, RegularityReport& r, double tol, unsigned seed,
                           int pairs)
{
    const auto vf = S.vertex_faces();
    std::vector<int> inner;
    std::vector<Star> stars;
    r.skipped_vertices = 0;
    for (int v = 0; v < static_cast<int>(S.vertices.size()); ++v) {
        auto st = S.interior(v) ? star_of(S, v, vf[v]) : std::nullopt;
        if (!st) {
            ++r.skipped_vertices;
            continue;
        }
        inner.push_back(v);
        stars.push_back(std::move(*st));
    }
    r.interior_vertices = static_cast<int>(inner.size());
    r.valency_constant = r.signatures_match = r.figures_match = false;
    if (inner.empty())
        return;

    r.valency = static_cast<int>(stars[0].ring.size());
    r.valency_constant = true;
    for (const Star& st : stars)
        if (static_cast<int>(st.ring.size()) != r.valency)
            r.valency_constant = false;

    // stage one: sorted distances to the neighbours and between consecutive neighbours
    auto signature = [&](std::size_t i) {
        const int v = inner[i];
        const Star& st = stars[i];
        std::vector<double> len, gap;
        const int k = static_cast<int>(st.ring.size());
        for (int j = 0; j < k; ++j) {
            len.push_back(point_distance(S.space, S.vertices[v], S.vertices[st.ring[j]]));
            gap.push_back(point_distance(S.space, S.vertices[st.ring[j]],
                                         S.vertices[st.ring[(j + 1) % k]]));
        }
        std::sort(len.begin(), len.end());
        std::sort(gap.begin(), gap.end());
        auto gon = st.gonality;
        std::sort(gon.begin(), gon.end());
        len.insert(len.end(), gap.begin(), gap.end());
        len.insert(len.end(), gon.begin(), gon.end());
        return len;
    };
    std::vector<double> w(inner.size());
    std::size_t base = 0;
    for (std::size_t i = 0; i < inner.size(); ++i) {
        w[i] = weight(S.space, S.vertices[inner[i]]);
        for (int u : stars[i].ring)
            w[i] = std::max(w[i], weight(S.space, S.vertices[u]));
        if (w[i] < w[base])
            base = i;
    }
    const auto ref = signature(base);
    r.signatures_match = r.valency_constant;
    for (std::size_t i = 0; i < inner.size() && r.signatures_match; ++i) {
        const auto sig = signature(i);
        if (sig.size() != ref.size()) {
            r.signatures_match = false;
            break;
        }
        for (std::size_t j = 0; j < sig.size(); ++j)
            if (std::abs(sig[j] - ref[j]) / w[i] > tol * std::max(1.0, std::abs(ref[j])))
                r.signatures_match = false;
    }

    // stage two: explicit frame isometries between random pairs
    std::mt19937 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, inner.size() - 1);
    r.figure_gap = 0;
    r.figure_pairs = 0;
    for (int t = 0; t < pairs; ++t) {
        const std::size_t i = pick(rng), j = pick(rng);
        const auto a = star_vectors(S, inner[i], stars[i]);
        const auto b = star_vectors(S, inner[j], stars[j]);
        r.figure_gap = std::max(r.figure_gap, star_gap(a, stars[i].gonality, b, stars[j].gonality) /
                                                  std::max(w[i], w[j]));
        ++r.figure_pairs;
    }
    r.figures_match = r.signatures_match && r.figure_gap <= tol * std::max(1.0, r.edge_length);
}

RegularityReport verify_regular(const Surface& S, double tol)
{
    RegularityReport r = verify_regular_faces(S, tol);
    verify_vertex_figures(S, r, tol);
    return r;
}

std::vector<Mat3> content_symmetries(const FundamentalPatch& patch)
{
    const Solid& F = *patch.fundamental;
    const PlatonicType& T = platonic_type(F.spec.p, F.spec.q);
    const auto& U = T.face_dirs;
    const auto& e = T.edges[0];
    int third = -1;
    for (int f : T.vertex_cycle[e.v0])
        if (f != e.f0 && f != e.f1) {
            third = f;
            break;
        }
    Mat3 A;
    A << U[e.f0], U[e.f1], U[third];
    const Mat3 Ainv = A.inverse();

    PointIndex pts(patch.space);
    int n = 0;
    std::vector<Vec4> all;
    for (const auto& poly : patch.polygons)
        for (const Vec4& x : poly.vertices)
            if (!pts.find(x, 1e-7)) {
                pts.insert(x, n++);
                all.push_back(x);
            }

    auto close = [](const Vec3& a, const Vec3& b) { return (a - b).norm() < 1e-9; };
    std::vector<Mat3> out;
    const int m = static_cast<int>(U.size());
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c) {
                if (std::abs(U[a].dot(U[b]) - A.col(0).dot(A.col(1))) > 1e-9 ||
                    std::abs(U[a].dot(U[c]) - A.col(0).dot(A.col(2))) > 1e-9 ||
                    std::abs(U[b].dot(U[c]) - A.col(1).dot(A.col(2))) > 1e-9)
                    continue;
                Mat3 B;
                B << U[a], U[b], U[c];
                const Mat3 M = B * Ainv;
                if ((M.transpose() * M - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-9)
                    continue;
                bool ok = true;
                for (const Vec3& u : U) {
                    bool hit = false;
                    for (const Vec3& w : U)
                        hit = hit || close(M * u, w);
                    if (!hit) {
                        ok = false;
                        break;
                    }
                }
                if (!ok)
                    continue;
                const Isometry g = linear_isometry(patch.space, M);
                for (const Vec4& x : all)
                    if (!pts.find(apply_point(g, x), 1e-7)) {
                        ok = false;
                        break;
                    }
                if (ok)
                    out.push_back(M);
            }
    return out;
}

FlagMap flag_map(const Surface& S)
{
    Gluing G(S);
    G.core.assign(S.faces.size(), true);
    return G.finish(S);
}

QuotientComplex complex_of(const FlagMap& m)
{
    QuotientComplex q;
    q.map = m;
    const int n = m.size();
    const auto faces = orbits(n, {&m.r0, &m.r1});
    const auto edges = orbits(n, {&m.r0, &m.r2});
    const auto verts = orbits(n, {&m.r1, &m.r2});
    q.F = static_cast<int>(faces.size());
    q.E = static_cast<int>(edges.size());
    q.V = static_cast<int>(verts.size());
    q.map.face.assign(n, 0);
    for (int f = 0; f < q.F; ++f) {
        ++q.gonalities[static_cast<int>(faces[f].size()) / 2];
        for (int x : faces[f])
            q.map.face[x] = f;
    }
    for (const auto& v : verts)
        ++q.valencies[static_cast<int>(v.size()) / 2];
    q.euler = q.V - q.E + q.F;

    std::vector<int> colour(n, -1);
    q.orientable = true;
    for (int s = 0; s < n; ++s) {
        if (colour[s] >= 0)
            continue;
        colour[s] = 0;
        std::vector<int> stack = {s};
        while (!stack.empty()) {
            const int x = stack.back();
            stack.pop_back();
            for (const auto* g : {&m.r0, &m.r1, &m.r2}) {
                const int y = (*g)[x];
                if (colour[y] < 0) {
                    colour[y] = 1 - colour[x];
                    stack.push_back(y);
                } else if (colour[y] == colour[x]) {
                    q.orientable = false;
                }
            }
        }
    }
    q.genus = q.orientable ? (2 - q.euler) / 2 : 2 - q.euler;
    return q;
}

QuotientComplex quotient_complex(const Surface& S, const GroupSpec& group)
{
    if (!S.patch || !S.orbit)
        throw AnalysisError("quotient needs a surface built from a patch");
    if (S.space != group.space)
        throw SpaceMismatch();
    const Solid& src = *group.source;
    const auto G0 = content_symmetries(*S.patch);
    Gluing G(S);
    int cells = 1;
    FlagMap map;

    if (S.space == SpaceForm::Euclidean) {
        std::vector<Vec3> cand;
        for (const Isometry& e : S.orbit->elements)
            for (const Mat3& M : G0) {
                if ((e.linear() * M - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-9)
                    continue;
                const Vec3 t = e.translation();
                if (t.norm() < 1e-9)
                    continue;
                bool dup = false;
                for (const Vec3& c : cand)
                    dup = dup || (c - t).norm() < 1e-9;
                if (!dup)
                    cand.push_back(t);
            }
        std::stable_sort(cand.begin(), cand.end(),
                         [](const Vec3& a, const Vec3& b) { return a.norm() < b.norm() - 1e-12; });
        const int m = std::min<int>(40, static_cast<int>(cand.size()));
        double best = kInf;
        Mat3 B = Mat3::Zero();
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                for (int k = j + 1; k < m; ++k) {
                    Mat3 T;
                    T << cand[i], cand[j], cand[k];
                    const double d = std::abs(T.determinant());
                    if (d < 1e-9 || d >= best - 1e-9)
                        continue;
                    const Mat3 Ti = T.inverse();
                    bool ok = true;
                    for (const Vec3& c : cand) {
                        const Vec3 x = Ti * c;
                        for (int r = 0; r < 3; ++r)
                            ok = ok && std::abs(x[r] - std::round(x[r])) < 1e-6;
                        if (!ok)
                            break;
                    }
                    if (ok) {
                        best = d;
                        B = T;
                    }
                }
        if (!std::isfinite(best))
            throw AnalysisError("no translation lattice found; build deeper");
        const Mat3 Bi = B.inverse();
        auto shift = [&](int f) {
            const Vec3 x = Bi * face_centroid(S, f).head<3>();
            Eigen::Vector3i k;
            for (int r = 0; r < 3; ++r)
                k[r] = static_cast<int>(std::floor(x[r] + 0.5 + 1e-9));
            return k;
        };
        for (int f = 0; f < static_cast<int>(S.faces.size()); ++f)
            G.core[f] = shift(f).isZero();
        for (int f = 0; f < static_cast<int>(S.faces.size()); ++f) {
            const Eigen::Vector3i k = shift(f);
            if (k.isZero())
                continue;
            Isometry t = identity(S.space);
            t.m.topRightCorner<3, 1>() = -(B * k.cast<double>());
            G.link(S, f, t);
        }
        // cells in one period: cell centres inside the half-open parallelepiped
        cells = 0;
        for (int id : distinct_images(*S.orbit, origin(S.space))) {
            const Vec3 x = Bi * S.orbit->elements[id].translation();
            bool in = true;
            for (int r = 0; r < 3; ++r)
                in = in && std::floor(x[r] + 0.5 + 1e-9) == 0;
            cells += in;
        }
        map = G.finish(S);
    } else {
        // pair generator faces, opposite ones where possible
        const int ng = static_cast<int>(group.faces.size());
        std::vector<int> partner(ng, -1);
        for (int i = 0; i < ng; ++i)
            for (int j = 0; j < ng; ++j)
                if (i != j && (src.faces[group.faces[i]].direction +
                               src.faces[group.faces[j]].direction).norm() < 1e-9)
                    partner[i] = j;
        for (int i = 0; i < ng; ++i)
            if (partner[i] < 0)
                for (int j = i + 1; j < ng; ++j)
                    if (partner[j] < 0) {
                        partner[i] = j;
                        partner[j] = i;
                        break;
                    }
        std::vector<Isometry> pairings;
        for (int i = 0; i < ng; ++i) {
            const int j = partner[i];
            if (j < 0)
                throw AnalysisError("unpaired generator face");
            if (j < i)
                continue;
            const Isometry& g = group.generators[i];
            const Vec3 ui = src.faces[group.faces[i]].direction;
            const Vec3 uj = src.faces[group.faces[j]].direction;
            const double dg = g.m.determinant();
            // free pairings first, and among those the involutive symmetries (the central one)
            std::optional<Isometry> h;
            int rank = -1;
            for (const Mat3& M : G0) {
                if ((M * uj - ui).norm() > 1e-9 || M.determinant() * dg < 0)
                    continue;
                const Isometry c = compose(g, linear_isometry(S.space, M));
                const int r = acts_freely(c) ? ((M * M - Mat3::Identity()).norm() < 1e-9 ? 2 : 1) : 0;
                if (r > rank) {
                    h = c;
                    rank = r;
                }
            }
            if (!h)
                throw AnalysisError("no symmetry of the cell carries a face to its partner");
            pairings.push_back(*h);
            pairings.push_back(inverse(*h));
        }
        auto inside = [&](const Vec4& x) {
            for (const Face& F : src.faces)
                if (F.covector.dot(x) > 1e-9 * std::max(1.0, x.cwiseAbs().maxCoeff()))
                    return false;
            return true;
        };
        for (int f = 0; f < static_cast<int>(S.faces.size()); ++f)
            G.core[f] = inside(face_centroid(S, f));
        // faces straddling the cell boundary are glued to their partners
        for (int f = 0; f < static_cast<int>(S.faces.size()); ++f) {
            if (!G.core[f])
                continue;
            for (const Isometry& h : pairings)
                if (inside(apply_point(h, face_centroid(S, f))))
                    G.link(S, f, h);
        }
        // other flags come back through the pairing of the cell holding their edge
        G.resolve = [&](int x) {
            const auto [f, ie] = G.flag_owner[x];
            const auto& L = S.faces[f];
            const int k = static_cast<int>(L.size());
            const int i = ie / 2;
            const Vec4 mid = normalize_point(
                S.space, S.space == SpaceForm::Euclidean
                             ? Vec4(S.vertices[L[i]] / S.vertices[L[i]][3] +
                                    S.vertices[L[(i + 1) % k]] / S.vertices[L[(i + 1) % k]][3])
                             : Vec4(S.vertices[L[i]] + S.vertices[L[(i + 1) % k]]));
            int found = -1;
            for (const Isometry& h : pairings) {
                if (!inside(apply_point(h, mid)))
                    continue;
                const auto img = G.image(S, f, h);
                if (!img)
                    continue;
                const int y = (*img)[ie];
                if (!G.core[G.flag_owner[y].first])
                    continue;
                if (found >= 0 && G.uf.find(found) != G.uf.find(y))
                    throw AnalysisError("face pairings glue one edge in two ways");
                found = y;
            }
            return found;
        };
        map = G.finish(S);
    }

    QuotientComplex q = complex_of(map);
    q.cells = cells;
    return q;
}

std::vector<int> straight_ahead_cycles(const FlagMap& m)
{
    const int n = m.size();
    std::vector<int> gon(n, 0), seen(n, 0);
    for (const auto& f : orbits(n, {&m.r0, &m.r1}))
        for (int x : f)
            gon[x] = static_cast<int>(f.size()) / 2;
    for (int g : gon)
        if (g % 2)
            throw AnalysisError("straight-ahead cycles need faces of even gonality");
    // a state is a face side: the pair {x, r0 x}; move to the opposite side and cross
    auto opposite = [&](int x) {
        int y = x;
        for (int i = 0; i < gon[x] / 2; ++i)
            y = m.r1[m.r0[y]];
        return y;
    };
    auto key = [&](int x) { return std::min(x, m.r0[x]); };
    std::vector<int> out;
    for (int s = 0; s < n; ++s) {
        if (seen[key(s)])
            continue;
        int len = 0;
        int x = key(s);
        while (!seen[key(x)]) {
            seen[key(x)] = 1;
            ++len;
            x = key(m.r2[opposite(x)]);
        }
        out.push_back(len);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> petrie_cycles(const FlagMap& m)
{
    const int n = m.size();
    std::vector<int> seen(n, 0);
    std::map<std::vector<int>, int> polygons;
    std::vector<int> edge_of(n, -1);
    {
        const auto edges = orbits(n, {&m.r0, &m.r2});
        for (int e = 0; e < static_cast<int>(edges.size()); ++e)
            for (int x : edges[e])
                edge_of[x] = e;
    }
    std::vector<int> out;
    for (int s = 0; s < n; ++s) {
        if (seen[s])
            continue;
        std::vector<int> es;
        int x = s;
        do {
            seen[x] = 1;
            es.push_back(edge_of[x]);
            x = m.r0[m.r1[m.r2[x]]];
        } while (x != s);
        std::sort(es.begin(), es.end());
        ++polygons[es];
    }
    for (const auto& [es, count] : polygons)
        for (int i = 0; i < std::max(1, count / 2); ++i)
            out.push_back(static_cast<int>(es.size()));
    std::sort(out.begin(), out.end());
    return out;
}

Consistency genus_consistency(const Expectation& e)
{
    Consistency c;
    auto fail = [&](const std::string& why) {
        if (c.pass) {
            c.pass = false;
            c.violated = why;
        }
    };
    std::optional<int> V = e.vertices, E = e.edges, F = e.faces;
    if (e.gonality && F) {
        if ((*e.gonality * *F) % 2)
            fail("p F = 2 E has no integer solution");
        else if (E && *E != *e.gonality * *F / 2)
            fail("p F = 2 E");
        else
            E = *e.gonality * *F / 2;
    }
    if (e.valency && E) {
        if ((2 * *E) % *e.valency)
            fail("q V = 2 E has no integer solution");
        else if (V && *V * *e.valency != 2 * *E)
            fail("q V = 2 E");
        else
            V = 2 * *E / *e.valency;
    }
    if (e.genus && V && E && F && V.value() - E.value() + F.value() != 2 - 2 * *e.genus)
        fail("V - E + F = 2 - 2g");
    return c;
}

Consistency genus_consistency(const QuotientComplex& q, const Expectation& e)
{
    Consistency c = genus_consistency(e);
    if (!c.pass)
        return c;
    auto fail = [&](const std::string& why) {
        c.pass = false;
        c.violated = why;
    };
    Expectation full = e;
    if (e.gonality && e.faces)
        full.edges = *e.gonality * *e.faces / 2;
    if (e.valency && full.edges)
        full.vertices = 2 * *full.edges / *e.valency;
    if (full.faces && *full.faces != q.F)
        fail("face count");
    else if (full.edges && *full.edges != q.E)
        fail("edge count");
    else if (full.vertices && *full.vertices != q.V)
        fail("vertex count");
    else if (e.genus && (!q.orientable || *e.genus != q.genus))
        fail("genus");
    else if (e.valency && (q.valencies.size() != 1 || q.valencies.begin()->first != *e.valency))
        fail("valency");
    return c;
}

}
