#include "app.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace pf;
using namespace pf::app;

namespace {

enum Exit { Ok = 0, Other = 1, Nonexistence = 2, Bracket = 3, Tiler = 4, Failed = 5 };

struct Options {
    std::string family = "prismatic";
    std::string base = "platonic";
    BuildConfig config;
    std::string out;
    std::string report;
    std::string mesh;
    std::string expect;
    std::string table;
};

BuildConfig to_config(const Options& o)
{
    BuildConfig c = o.config;
    auto f = parse_family(o.family);
    if (!f)
        throw DomainError("unknown family '" + o.family + "'");
    auto b = parse_base(o.base);
    if (!b)
        throw DomainError("unknown base '" + o.base + "'");
    c.family = *f;
    c.base = *b;
    return c;
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot write " + path);
    f << text;
}

std::string read_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot read " + path);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

void emit(const nlohmann::json& j, const std::string& path)
{
    const std::string text = j.dump(2) + "\n";
    if (path.empty())
        std::cout << text;
    else
        write_file(path, text);
}

int cmd_solve(const Options& o)
{
    const Solved s = solve(to_config(o));
    const auto j = solve_json(s);
    std::cout << "space: " << to_string(s.inner_solve.space) << "\n";
    std::cout.precision(10);
    std::cout << "a: " << s.fundamental_solve.value << "\n";
    std::cout << "b: " << s.inner_solve.value << "\n";
    if (s.fundamental_solve.secondary)
        std::cout << "s: " << *s.fundamental_solve.secondary << "\n";
    std::cout << "residuals: " << s.fundamental_solve.residual << " " << s.inner_solve.residual
              << "\n";
    nlohmann::json out = {{"config", config_json(s.config)}, {"solve", j}};
    emit(out, o.report);
    return Ok;
}

bool all_pass(const nlohmann::json& report)
{
    for (const auto& c : report["checks"])
        if (!c["pass"].get<bool>())
            return false;
    return true;
}

int cmd_build(const Options& o)
{
    const Built b = build(to_config(o));
    const std::string obj = obj_text(b);
    if (!o.out.empty())
        write_file(o.out, obj);
    const auto report = report_json(b);
    emit(report, o.report);
    std::cerr << "surface: V " << b.surface.vertices.size() << " E " << b.surface.edges.size()
              << " F " << b.surface.faces.size() << "\n";
    return all_pass(report) ? Ok : Failed;
}

int cmd_verify(const Options& o)
{
    BuildConfig c = to_config(o);
    std::optional<ObjMesh> mesh;
    if (!o.mesh.empty()) {
        mesh = parse_obj(read_file(o.mesh));
        if (!mesh->config)
            throw DomainError(o.mesh + " carries no build configuration");
        c = *mesh->config;
    }
    const Built b = build(c);
    if (mesh) {
        const std::string diff = compare_mesh(*mesh, b);
        if (!diff.empty()) {
            std::cerr << "mesh does not match its configuration: " << diff << "\n";
            return Failed;
        }
    }
    std::optional<Expectation> e;
    if (!o.expect.empty())
        e = parse_expectation(o.expect);
    const auto report = report_json(b, e ? &*e : nullptr);
    emit(report, o.report);
    for (const auto& ch : report["checks"])
        if (!ch["pass"].get<bool>())
            std::cerr << "FAIL " << ch["name"].get<std::string>() << " measured "
                      << ch["measured"].dump() << "\n";
    return all_pass(report) ? Ok : Failed;
}

int cmd_table(const Options& o)
{
    if (o.table == "euclid-angles")
        std::cout << table_euclid_angles();
    else if (o.table == "geography")
        std::cout << table_geography();
    else if (o.table == "quotients")
        std::cout << table_quotients();
    else
        throw DomainError("unknown table '" + o.table + "'");
    return Ok;
}

void add_build_options(CLI::App* a, Options& o)
{
    a->add_option("--family", o.family, "prismatic or antiprismatic")->capture_default_str();
    a->add_option("--base", o.base, "platonic, truncated or rectified")->capture_default_str();
    a->add_option("--p", o.config.p, "face gonality")->capture_default_str();
    a->add_option("--q", o.config.q, "vertex valency of the solid")->capture_default_str();
    a->add_option("--n", o.config.n, "cells around an edge / pyramid count")->capture_default_str();
    a->add_option("--depth", o.config.depth, "word length for infinite groups")
        ->capture_default_str();
    a->add_option("--solve-tol", o.config.solve_tol, "residual bound for the closing conditions")->capture_default_str();
    a->add_option("--weld-tol", o.config.weld_tol, "vertex merge distance when welding cells")->capture_default_str();
    a->add_option("--verify-tol", o.config.verify_tol, "tolerance for regularity checks")->capture_default_str();
    a->add_option("--report", o.report, "JSON report path (default stdout)");
}

}

int main(int argc, char** argv)
{
    CLI::App app{"polyform: prismatic and antiprismatic polyhedra in S3, E3 and H3"};
    app.set_config("--config", "", "file of key = value lines mirroring the flags");
    app.require_subcommand(1);
    Options o;

    add_build_options(&app, o);
    app.add_option("--out", o.out, "OBJ output path (build)");
    app.add_option("--subdivide", o.config.subdivide, "geodesic samples per edge (build)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--mesh", o.mesh, "OBJ written by build (verify)");
    app.add_option("--expect", o.expect, "genus=G,faces=F,valency=k,... (verify)");

    auto* solve_cmd = app.add_subcommand("solve", "solve the closing conditions")->fallthrough();
    auto* build_cmd =
        app.add_subcommand("build", "build the surface, write OBJ and report")->fallthrough();
    auto* verify_cmd =
        app.add_subcommand("verify", "check regularity and quotient claims")->fallthrough();
    auto* table_cmd = app.add_subcommand("table", "print a reproduced table");
    table_cmd->add_option("which", o.table, "euclid-angles | geography | quotients")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*solve_cmd)
            return cmd_solve(o);
        if (*build_cmd)
            return cmd_build(o);
        if (*verify_cmd)
            return cmd_verify(o);
        return cmd_table(o);
    } catch (const NonexistenceError& e) {
        std::cerr << "no such surface: " << e.what() << "\n";
        return Nonexistence;
    } catch (const BracketError& e) {
        std::cerr << "bracket failure: " << e.what() << "\n";
        return Bracket;
    } catch (const TilerError& e) {
        std::cerr << "tiler error: " << e.what() << "\n";
        return Tiler;
    } catch (const AnalysisError& e) {
        std::cerr << "analysis error: " << e.what() << "\n";
        return Tiler;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Other;
    }
}
