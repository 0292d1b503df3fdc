#pragma once

#include "polyform/analysis.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace pf::app {

struct BuildConfig {
    PatchKind family = PatchKind::Prismatic;
    Base base = Base::Platonic;
    int p = 4, q = 3, n = 5;
    int depth = 2;
    double solve_tol = 1e-9;
    double weld_tol = 1e-7;
    double verify_tol = 1e-8;
    int subdivide = 0;
};

std::string family_name(PatchKind k);
std::optional<PatchKind> parse_family(std::string_view s);

// throws NonexistenceError for combinations outside the supported tables
void validate(const BuildConfig& c);

struct Solved {
    BuildConfig config;
    SolveResult fundamental_solve;
    SolveResult inner_solve;
    Solid fundamental;
    Solid inner;
};

Solved solve(const BuildConfig& c);

struct Built {
    Solved solved;
    GroupSpec group;
    OrbitSet orbit;
    Surface surface;
    RegularityReport regularity;
    QuotientComplex quotient;
    std::vector<int> straight_ahead, petrie;
};

Built build(const BuildConfig& c, int threads = 0);

Expectation parse_expectation(const std::string& s);

struct Check {
    std::string name;
    bool pass;
    double measured;
    double tolerance;
};

std::vector<Check> checks(const Built& b, const Expectation* expect = nullptr);

nlohmann::json config_json(const BuildConfig& c);
nlohmann::json solve_json(const Solved& s);
nlohmann::json report_json(const Built& b, const Expectation* expect = nullptr);

std::string obj_text(const Built& b);

struct ObjMesh {
    std::optional<BuildConfig> config;
    std::vector<Vec3> vertices;
    std::vector<std::vector<int>> faces;
};

ObjMesh parse_obj(const std::string& text);
// empty when the mesh equals the build, otherwise what differs
std::string compare_mesh(const ObjMesh& m, const Built& b);

std::string table_euclid_angles();
std::string table_geography();
std::string table_quotients();

}
