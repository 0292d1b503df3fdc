#include "app.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace pf::app {

using nlohmann::json;

std::string family_name(PatchKind k)
{
    return k == PatchKind::Prismatic ? "prismatic" : "antiprismatic";
}

std::optional<PatchKind> parse_family(std::string_view s)
{
    if (s == "prismatic")
        return PatchKind::Prismatic;
    if (s == "antiprismatic")
        return PatchKind::Antiprismatic;
    return std::nullopt;
}

void validate(const BuildConfig& c)
{
    if (!is_platonic(c.p, c.q))
        throw NonexistenceError("{" + std::to_string(c.p) + "," + std::to_string(c.q) +
                                "} is not a Platonic type");
    if (c.depth < 0)
        throw DomainError("depth must be non-negative");
    if (c.family == PatchKind::Prismatic) {
        if (c.n < 3)
            throw NonexistenceError("prismatic surfaces need n >= 3 around each edge");
        if (c.base != Base::Platonic && !(c.p == 3 && c.q == 4))
            throw NonexistenceError("truncated and rectified prismatic bases are built on the "
                                    "octahedron only");
    } else {
        if (c.n < 2)
            throw NonexistenceError("antiprismatic surfaces need n >= 2");
        if (c.base == Base::Truncated)
            throw NonexistenceError("antiprismatic surfaces have no truncated base");
        if (c.base == Base::Rectified && c.q != 3)
            throw NonexistenceError("rectified antiprismatic bases need q = 3");
    }
}

Solved solve(const BuildConfig& c)
{
    validate(c);
    Solved r{c, {}, {}, {}, {}};
    if (c.family == PatchKind::Prismatic) {
        r.fundamental_solve = solve_platonic_angle(c.p, c.q, c.n);
        r.inner_solve = solve_prismatic_inner(c.p, c.q, c.n, c.base);
        r.fundamental =
            platonic_at(c.p, c.q, *r.inner_solve.secondary_inradius, r.inner_solve.space);
    } else {
        r.fundamental_solve = solve_kis_angle_condition(c.p, c.q, c.n);
        r.inner_solve = solve_antiprismatic_inner(c.p, c.q, c.n, c.base);
        r.fundamental =
            kis_at(c.p, c.q, c.n, *r.inner_solve.secondary_inradius, r.inner_solve.space);
    }
    r.inner = *r.inner_solve.witness;
    return r;
}

Built build(const BuildConfig& c, int threads)
{
    Built b{solve(c), {}, {}, {}, {}, {}, {}, {}};
    const SpaceForm s = b.solved.inner_solve.space;
    b.group = c.family == PatchKind::Prismatic ? prismatic_generators(b.solved.fundamental)
                                               : antiprismatic_generators(b.solved.fundamental);
    Limit lim;
    if (s != SpaceForm::Spherical)
        lim.depth = c.depth;
    b.orbit = enumerate(b.group, lim, threads);
    const auto patch =
        fundamental_patch(c.family, b.solved.inner, b.solved.fundamental, b.solved.inner_solve);
    b.surface = build_surface(patch, b.orbit, c.weld_tol);
    b.regularity = verify_regular(b.surface, c.verify_tol);
    b.quotient = quotient_complex(b.surface, b.group);
    bool even = true;
    for (auto [k, n] : b.quotient.gonalities)
        even = even && k % 2 == 0;
    if (even)
        b.straight_ahead = straight_ahead_cycles(b.quotient.map);
    b.petrie = petrie_cycles(b.quotient.map);
    return b;
}

static std::string trim(std::string s)
{
    const auto a = s.find_first_not_of(" \t\r");
    const auto z = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? "" : s.substr(a, z - a + 1);
}

static int parse_int(const std::string& v, const std::string& what)
{
    std::size_t used = 0;
    int x = 0;
    try {
        x = std::stoi(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != v.size())
        throw DomainError("bad integer for " + what + ": '" + v + "'");
    return x;
}

Expectation parse_expectation(const std::string& s)
{
    Expectation e;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty())
            continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw DomainError("expectation '" + item + "' is not key=value");
        const std::string k = trim(item.substr(0, eq));
        const int v = parse_int(trim(item.substr(eq + 1)), k);
        if (k == "genus")
            e.genus = v;
        else if (k == "faces")
            e.faces = v;
        else if (k == "edges")
            e.edges = v;
        else if (k == "vertices")
            e.vertices = v;
        else if (k == "valency")
            e.valency = v;
        else if (k == "gonality")
            e.gonality = v;
        else
            throw DomainError("unknown expectation key '" + k + "'");
    }
    return e;
}

std::vector<Check> checks(const Built& b, const Expectation* expect)
{
    const auto& c = b.solved.config;
    const auto& r = b.regularity;
    const auto& q = b.quotient;
    std::vector<Check> out;
    out.push_back({"solve.fundamental_residual", b.solved.fundamental_solve.residual <= c.solve_tol,
                   b.solved.fundamental_solve.residual, c.solve_tol});
    out.push_back({"solve.inner_residual", b.solved.inner_solve.residual <= c.solve_tol,
                   b.solved.inner_solve.residual, c.solve_tol});
    out.push_back({"faces.edge_spread", r.faces_regular && r.edge_spread <= c.verify_tol,
                   r.edge_spread, c.verify_tol});
    out.push_back({"faces.angle_spread", r.faces_regular && r.angle_spread <= c.verify_tol,
                   r.angle_spread, c.verify_tol});
    out.push_back({"vertices.valency_constant", r.valency_constant,
                   static_cast<double>(r.valency), 0});
    out.push_back({"vertices.figures", r.figures_match && r.signatures_match, r.figure_gap,
                   c.verify_tol});

    const int chi = q.V - q.E + q.F;
    const int want = q.orientable ? 2 - 2 * q.genus : 2 - q.genus;
    out.push_back({"quotient.euler", chi == q.euler && chi == want, static_cast<double>(chi), 0});
    int vsum = 0, fsum = 0;
    for (auto [k, n] : q.valencies)
        vsum += k * n;
    for (auto [k, n] : q.gonalities)
        fsum += k * n;
    out.push_back({"quotient.vertex_degrees", vsum == 2 * q.E,
                   static_cast<double>(vsum - 2 * q.E), 0});
    out.push_back({"quotient.face_degrees", fsum == 2 * q.E,
                   static_cast<double>(fsum - 2 * q.E), 0});
    int sa = 0;
    for (int x : b.straight_ahead)
        sa += x;
    if (!b.straight_ahead.empty())
        out.push_back({"quotient.straight_ahead_total", sa == 2 * q.E,
                       static_cast<double>(sa - 2 * q.E), 0});

    if (expect) {
        auto add = [&](const char* name, const std::optional<int>& want, int got) {
            if (want)
                out.push_back({std::string("expect.") + name, *want == got, static_cast<double>(got),
                               0});
        };
        add("vertices", expect->vertices, q.V);
        add("edges", expect->edges, q.E);
        add("faces", expect->faces, q.F);
        add("genus", expect->genus, q.orientable ? q.genus : -q.genus);
        if (expect->valency)
            add("valency", expect->valency, q.valencies.size() == 1 ? q.valencies.begin()->first : -1);
        if (expect->gonality)
            add("gonality", expect->gonality,
                q.gonalities.size() == 1 ? q.gonalities.begin()->first : -1);
        const auto con = genus_consistency(q, *expect);
        out.push_back({"expect.identities" + (con.pass ? std::string() : ": " + con.violated),
                       con.pass, con.pass ? 0.0 : 1.0, 0});
    }
    return out;
}

json config_json(const BuildConfig& c)
{
    return {{"family", family_name(c.family)}, {"base", to_string(c.base)},
            {"p", c.p},          {"q", c.q},
            {"n", c.n},          {"depth", c.depth},
            {"solve_tol", c.solve_tol}, {"weld_tol", c.weld_tol},
            {"verify_tol", c.verify_tol}, {"subdivide", c.subdivide}};
}

json solve_json(const Solved& s)
{
    const auto& f = s.fundamental_solve;
    const auto& in = s.inner_solve;
    json params = {{"a", f.value},
                   {"fundamental_inradius", *in.secondary_inradius},
                   {"b", in.value},
                   {"inner_inradius", in.inradius}};
    if (f.secondary)
        params["s"] = *f.secondary;
    return {{"space", to_string(in.space)},
            {"classification", to_string(f.classification)},
            {"scale_free", in.scale_free},
            {"params", params},
            {"residuals", {{"fundamental", f.residual}, {"inner", in.residual}}},
            {"brackets", {{"fundamental", {f.lo, f.hi}}, {"inner", {in.lo, in.hi}}}},
            {"iterations", {{"fundamental", f.iterations}, {"inner", in.iterations}}}};
}

json report_json(const Built& b, const Expectation* expect)
{
    const auto& q = b.quotient;
    json val = json::object(), gon = json::object();
    for (auto [k, n] : q.valencies)
        val[std::to_string(k)] = n;
    for (auto [k, n] : q.gonalities)
        gon[std::to_string(k)] = n;
    json cs = json::array();
    bool all = true;
    for (const auto& c : checks(b, expect)) {
        cs.push_back({{"name", c.name}, {"pass", c.pass}, {"measured", c.measured},
                      {"tolerance", c.tolerance}});
        all = all && c.pass;
    }
    const auto& r = b.regularity;
    json angles = json::object();
    for (auto [k, a] : r.corner_angle)
        angles[std::to_string(k)] = a;
    return {{"config", config_json(b.solved.config)},
            {"solve", solve_json(b.solved)},
            {"group",
             {{"generators", b.group.generators.size()},
              {"kind", b.group.kind == GroupKind::Reflection ? "reflection" : "reflection-rotation"},
              {"elements", b.orbit.elements.size()},
              {"depth", b.orbit.depth},
              {"truncated", b.orbit.truncated}}},
            {"surface",
             {{"V", b.surface.vertices.size()},
              {"E", b.surface.edges.size()},
              {"F", b.surface.faces.size()},
              {"closed", b.surface.closed()},
              {"orientable", b.surface.orientable}}},
            {"regularity",
             {{"edge_length", r.edge_length},
              {"corner_angles", angles},
              {"valency", r.valency},
              {"interior_vertices", r.interior_vertices},
              {"figure_pairs", r.figure_pairs}}},
            {"quotient",
             {{"V", q.V},
              {"E", q.E},
              {"F", q.F},
              {"chi", q.euler},
              {"genus", q.genus},
              {"orientable", q.orientable},
              {"cells", q.cells},
              {"valencies", val},
              {"gonalities", gon},
              {"straight_ahead", b.straight_ahead},
              {"petrie", b.petrie}}},
            {"checks", cs},
            {"pass", all}};
}

static std::string num(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

static Vec3 obj_point(const Surface& s, const Vec4& x)
{
    const auto m = project(s.space, x);
    if (m.kind == ModelPoint::Kind::AtInfinity)
        throw TilerError("mesh vertex sits at the projection pole");
    return m.coords;
}

std::string obj_text(const Built& b)
{
    const auto& c = b.solved.config;
    const auto& S = b.surface;
    std::ostringstream o;
    o << "# polyform mesh\n";
    o << "# family = " << family_name(c.family) << "\n";
    o << "# base = " << to_string(c.base) << "\n";
    o << "# p = " << c.p << "\n# q = " << c.q << "\n# n = " << c.n << "\n";
    o << "# depth = " << c.depth << "\n";
    o << "# solve_tol = " << num(c.solve_tol) << "\n";
    o << "# weld_tol = " << num(c.weld_tol) << "\n";
    o << "# verify_tol = " << num(c.verify_tol) << "\n";
    o << "# subdivide = " << c.subdivide << "\n";
    o << "# space = " << to_string(S.space) << "\n";
    for (const auto& x : S.vertices) {
        const Vec3 v = obj_point(S, x);
        o << "v " << num(v[0]) << ' ' << num(v[1]) << ' ' << num(v[2]) << "\n";
    }
    for (const auto& f : S.faces) {
        o << 'f';
        for (int v : f)
            o << ' ' << v + 1;
        o << "\n";
    }
    if (c.subdivide > 0) {
        int next = static_cast<int>(S.vertices.size()) + 1;
        std::ostringstream lines;
        for (const auto& e : S.edges) {
            const Vec4& x = S.vertices[e[0]];
            const Vec4& y = S.vertices[e[1]];
            lines << "l " << e[0] + 1;
            for (int i = 1; i <= c.subdivide; ++i) {
                const double t = static_cast<double>(i) / (c.subdivide + 1);
                const Vec3 v = obj_point(S, normalize_point(S.space, (1 - t) * x + t * y));
                o << "v " << num(v[0]) << ' ' << num(v[1]) << ' ' << num(v[2]) << "\n";
                lines << ' ' << next++;
            }
            lines << ' ' << e[1] + 1 << "\n";
        }
        o << lines.str();
    }
    return o.str();
}

ObjMesh parse_obj(const std::string& text)
{
    ObjMesh m;
    BuildConfig c;
    int seen = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("# ", 0) == 0) {
            const auto eq = line.find(" = ");
            if (eq == std::string::npos)
                continue;
            const std::string k = trim(line.substr(2, eq - 2));
            const std::string v = trim(line.substr(eq + 3));
            ++seen;
            if (k == "family") {
                auto f = parse_family(v);
                if (!f)
                    throw DomainError("unknown family '" + v + "'");
                c.family = *f;
            } else if (k == "base") {
                auto bb = parse_base(v);
                if (!bb)
                    throw DomainError("unknown base '" + v + "'");
                c.base = *bb;
            } else if (k == "p")
                c.p = parse_int(v, k);
            else if (k == "q")
                c.q = parse_int(v, k);
            else if (k == "n")
                c.n = parse_int(v, k);
            else if (k == "depth")
                c.depth = parse_int(v, k);
            else if (k == "subdivide")
                c.subdivide = parse_int(v, k);
            else if (k == "solve_tol")
                c.solve_tol = std::stod(v);
            else if (k == "weld_tol")
                c.weld_tol = std::stod(v);
            else if (k == "verify_tol")
                c.verify_tol = std::stod(v);
            else
                --seen;
            continue;
        }
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "v") {
            Vec3 v;
            ls >> v[0] >> v[1] >> v[2];
            m.vertices.push_back(v);
        } else if (tag == "f") {
            std::vector<int> f;
            std::string tok;
            while (ls >> tok)
                f.push_back(std::stoi(tok.substr(0, tok.find('/'))) - 1);
            m.faces.push_back(std::move(f));
        }
    }
    if (seen > 0)
        m.config = c;
    return m;
}

std::string compare_mesh(const ObjMesh& m, const Built& b)
{
    const auto& S = b.surface;
    if (m.faces.size() != S.faces.size())
        return "face count " + std::to_string(m.faces.size()) + " != " +
               std::to_string(S.faces.size());
    if (m.vertices.size() < S.vertices.size())
        return "vertex count " + std::to_string(m.vertices.size()) + " < " +
               std::to_string(S.vertices.size());
    for (std::size_t i = 0; i < S.faces.size(); ++i)
        if (m.faces[i] != S.faces[i])
            return "face " + std::to_string(i + 1) + " differs";
    for (std::size_t i = 0; i < S.vertices.size(); ++i) {
        const Vec3 v = project(S.space, S.vertices[i]).coords;
        if ((v - m.vertices[i]).norm() > 1e-12 * (1 + v.norm()))
            return "vertex " + std::to_string(i + 1) + " differs";
    }
    return {};
}

std::string table_euclid_angles()
{
    std::ostringstream o;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-14s %6s %10s %10s  %s\n", "solid", "{p,q}", "n=2", "n=3",
                  "status");
    o << buf;
    for (const auto& r : euclidean_angle_table()) {
        std::snprintf(buf, sizeof buf, "%-14s  {%d,%d} %10.2f %10.2f  computed\n", r.name.c_str(),
                      r.p, r.q, r.sum2, r.sum3);
        o << buf;
    }
    return o.str();
}

static std::string space_label(SpaceForm s)
{
    return s == SpaceForm::Spherical ? "S3" : s == SpaceForm::Euclidean ? "E3" : "H3";
}

static const int kTypes[5][2] = {{3, 3}, {4, 3}, {3, 4}, {5, 3}, {3, 5}};

std::string table_geography()
{
    std::ostringstream o;
    char buf[160];
    o << "prismatic: space form for dihedral angle 2pi/n\n";
    std::snprintf(buf, sizeof buf, "%-14s", "solid");
    o << buf;
    for (int n = 3; n <= 7; ++n) {
        std::snprintf(buf, sizeof buf, " %-15s", ("n=" + std::to_string(n)).c_str());
        o << buf;
    }
    o << " status\n";
    for (auto [p, q] : kTypes) {
        std::snprintf(buf, sizeof buf, "%-14s", solid_name(p, q).c_str());
        o << buf;
        for (int n = 3; n <= 7; ++n) {
            const auto g = platonic_geography(p, q, n);
            std::string cell = space_label(g.space);
            if (g.space == SpaceForm::Hyperbolic)
                cell += " " + to_string(g.kind);
            std::snprintf(buf, sizeof buf, " %-15s", cell.c_str());
            o << buf;
        }
        o << " computed\n";
    }
    o << "\nantiprismatic: space form of the kis angle condition\n";
    std::snprintf(buf, sizeof buf, "%-14s", "solid");
    o << buf;
    for (int n = 2; n <= 4; ++n) {
        std::snprintf(buf, sizeof buf, " %-15s", ("n=" + std::to_string(n)).c_str());
        o << buf;
    }
    o << " status\n";
    for (auto [p, q] : kTypes) {
        std::snprintf(buf, sizeof buf, "%-14s", solid_name(p, q).c_str());
        o << buf;
        for (int n = 2; n <= 4; ++n) {
            std::snprintf(buf, sizeof buf, " %-15s", space_label(kis_geography(p, q, n)).c_str());
            o << buf;
        }
        o << " computed\n";
    }
    return o.str();
}

struct QuotientRow {
    const char* name;
    PatchKind family;
    Base base;
    int p, q, n, depth;
};

static const QuotientRow kQuotientRows[] = {
    {"mucube", PatchKind::Prismatic, Base::Platonic, 4, 3, 4, 3},
    {"prismatic octahedron", PatchKind::Prismatic, Base::Platonic, 3, 4, 5, 2},
    {"prismatic rectified octahedron", PatchKind::Prismatic, Base::Rectified, 3, 4, 5, 2},
    {"prismatic truncated octahedron", PatchKind::Prismatic, Base::Truncated, 3, 4, 5, 2},
    {"prismatic dodecahedron", PatchKind::Prismatic, Base::Platonic, 5, 3, 4, 2},
    {"prismatic icosahedron", PatchKind::Prismatic, Base::Platonic, 3, 5, 3, 2},
    {"antiprismatic tetrahedron", PatchKind::Antiprismatic, Base::Platonic, 3, 3, 3, 3},
    {"antiprismatic cube", PatchKind::Antiprismatic, Base::Platonic, 4, 3, 2, 2},
    {"antiprismatic octahedron", PatchKind::Antiprismatic, Base::Platonic, 3, 4, 2, 3},
    {"antiprismatic dodecahedron", PatchKind::Antiprismatic, Base::Platonic, 5, 3, 2, 2},
    {"antiprismatic icosidodecahedron", PatchKind::Antiprismatic, Base::Rectified, 5, 3, 2, 2},
};

std::string table_quotients()
{
    std::ostringstream o;
    char buf[240];
    std::snprintf(buf, sizeof buf, "%-32s %-12s %-11s %5s %5s %5s %6s %8s %6s  %s\n", "surface",
                  "(p,q,n)", "space", "V", "E", "F", "genus", "valency", "cells", "status");
    o << buf;
    for (const auto& row : kQuotientRows) {
        BuildConfig c;
        c.family = row.family;
        c.base = row.base;
        c.p = row.p;
        c.q = row.q;
        c.n = row.n;
        c.depth = row.depth;
        const std::string pqn = "(" + std::to_string(c.p) + "," + std::to_string(c.q) + "," +
                                std::to_string(c.n) + ")";
        try {
            const Built b = build(c);
            const auto& q = b.quotient;
            std::string val = "-";
            if (q.valencies.size() == 1)
                val = std::to_string(q.valencies.begin()->first);
            std::string genus = std::to_string(q.genus);
            if (!q.orientable)
                genus = "N" + genus;
            std::snprintf(buf, sizeof buf, "%-32s %-12s %-11s %5d %5d %5d %6s %8s %6d  computed\n",
                          row.name, pqn.c_str(), to_string(b.surface.space).c_str(), q.V, q.E, q.F,
                          genus.c_str(), val.c_str(), q.cells);
        } catch (const std::exception& e) {
            std::snprintf(buf, sizeof buf, "%-32s %-12s failed: %s\n", row.name, pqn.c_str(),
                          e.what());
        }
        o << buf;
    }
    return o.str();
}

}
