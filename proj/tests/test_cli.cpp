#include "app.hpp"

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args)
{
    const std::string cmd = std::string(POLYFORM_BIN) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0)
        out.append(buf, n);
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

fs::path scratch()
{
    auto d = fs::temp_directory_path() / ("polyform_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
}

int count_prefix(const std::string& text, const std::string& prefix)
{
    std::istringstream in(text);
    std::string line;
    int n = 0;
    while (std::getline(in, line))
        n += line.rfind(prefix, 0) == 0;
    return n;
}

}

TEST(Cli, SolveCube)
{
    auto r = run("solve --family prismatic --p 4 --q 3 --n 5");
    EXPECT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out.substr(r.out.find('{')));
    EXPECT_EQ(j["solve"]["space"], "hyperbolic");
    EXPECT_NEAR(j["solve"]["params"]["a"].get<double>(), 2.0581710, 1e-7);
    const double a = std::sqrt(2 + std::sqrt(5.0));
    EXPECT_NEAR(j["solve"]["params"]["b"].get<double>(), a + std::sqrt(a * a - 1), 1e-9);
}

TEST(Cli, SolveSpaces)
{
    EXPECT_NE(run("solve --p 3 --q 5 --n 3").out.find("space: hyperbolic"), std::string::npos);
    EXPECT_NE(run("solve --p 4 --q 3 --n 3").out.find("space: spherical"), std::string::npos);
}

TEST(Cli, ExitCodes)
{
    EXPECT_EQ(run("solve --p 4 --q 3 --n 2").code, 2);
    EXPECT_EQ(run("solve --p 4 --q 4 --n 5").code, 2);
    EXPECT_EQ(run("solve --family antiprismatic --base truncated --p 3 --q 4 --n 2").code, 2);
    EXPECT_EQ(run("build --p 3 --q 4 --n 5 --depth 0").code, 4);
    EXPECT_EQ(run("solve --family sideways").code, 1);
    EXPECT_NE(run("frobnicate").code, 0);
}

TEST(Cli, BuildSphericalCube)
{
    const auto d = scratch();
    auto r = run("build --p 4 --q 3 --n 3 --out " + (d / "cube.obj").string() + " --report " +
                 (d / "cube.json").string());
    ASSERT_EQ(r.code, 0);
    const auto obj = slurp(d / "cube.obj");
    EXPECT_EQ(count_prefix(obj, "v "), 64);
    EXPECT_EQ(count_prefix(obj, "f "), 96);
    auto j = nlohmann::json::parse(slurp(d / "cube.json"));
    EXPECT_EQ(j["surface"]["F"], 96);
    EXPECT_EQ(j["regularity"]["valency"], 6);
    EXPECT_TRUE(j["pass"].get<bool>());
}

TEST(Cli, BuildPatches)
{
    auto m = nlohmann::json::parse(run("build --p 4 --q 3 --n 4 --depth 2").out);
    EXPECT_FALSE(m["surface"]["closed"].get<bool>());
    EXPECT_EQ(m["regularity"]["valency"], 6);
    auto t = nlohmann::json::parse(run("build --family antiprismatic --p 3 --q 3 --n 3").out);
    EXPECT_EQ(t["regularity"]["valency"], 9);
    EXPECT_EQ(t["quotient"]["gonalities"]["3"], 24);
}

TEST(Cli, RoundTripIsBitExact)
{
    const auto d = scratch();
    const auto obj = (d / "a.obj").string();
    ASSERT_EQ(run("build --family antiprismatic --p 3 --q 3 --n 3 --subdivide 2 --out " + obj +
                  " --report " + (d / "a.json").string())
                  .code,
              0);
    EXPECT_EQ(count_prefix(slurp(obj), "l "), 510);
    ASSERT_EQ(run("verify --mesh " + obj + " --report " + (d / "b.json").string()).code, 0);
    EXPECT_EQ(slurp(d / "a.json"), slurp(d / "b.json"));
}

TEST(Cli, TamperedMeshFails)
{
    const auto d = scratch();
    const auto obj = (d / "c.obj").string();
    ASSERT_EQ(run("build --p 4 --q 3 --n 3 --out " + obj + " --report /dev/null").code, 0);
    auto text = slurp(obj);
    const auto at = text.find("\nv ") + 3;
    text[at] = text[at] == '0' ? '1' : '0';
    std::ofstream(obj) << text;
    EXPECT_EQ(run("verify --mesh " + obj).code, 5);
}

TEST(Cli, Expectations)
{
    EXPECT_EQ(run("verify --p 3 --q 4 --n 5 --expect genus=4,faces=12,valency=8").code, 0);
    EXPECT_EQ(run("verify --family antiprismatic --p 5 --q 3 --n 2 --expect genus=6,faces=60,valency=9")
                  .code,
              0);
    auto bad = run("verify --family antiprismatic --p 5 --q 3 --n 2 --expect genus=5");
    EXPECT_EQ(bad.code, 5);
    EXPECT_NE(bad.out.find("expect.identities: genus"), std::string::npos);
}

TEST(Cli, ConfigFileAndFlagPrecedence)
{
    const auto d = scratch();
    std::ofstream(d / "run.ini") << "family = antiprismatic\np = 4\nq = 3\nn = 2\n";
    auto a = run("solve --config " + (d / "run.ini").string());
    EXPECT_NE(a.out.find("space: spherical"), std::string::npos);
    auto b = run("solve --config " + (d / "run.ini").string() + " --n 3");
    EXPECT_NE(b.out.find("space: hyperbolic"), std::string::npos);
}

TEST(Cli, Tables)
{
    auto angles = run("table euclid-angles");
    EXPECT_EQ(angles.code, 0);
    std::vector<double> sums;
    {
        std::istringstream words(angles.out);
        for (std::string w; words >> w;)
            if (w.find('.') != std::string::npos)
                sums.push_back(std::stod(w));
    }
    const std::vector<double> want = {289.47, 360, 340.53, 411.06, 360, 450,
                                      401.81, 472.34, 423.44, 540};
    ASSERT_EQ(sums.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i)
        EXPECT_NEAR(sums[i], want[i], 0.01) << i;
    auto geo = run("table geography");
    std::istringstream lines(geo.out);
    std::string line;
    std::vector<std::string> cube;
    while (std::getline(lines, line))
        if (line.rfind("cube", 0) == 0 && cube.empty()) {
            std::istringstream words(line);
            for (std::string w; words >> w;)
                cube.push_back(w);
        }
    EXPECT_EQ(cube, (std::vector<std::string>{"cube", "S3", "E3", "H3", "finite", "H3", "ideal",
                                              "H3", "hyperideal", "computed"}));
    auto quo = run("table quotients");
    EXPECT_NE(quo.out.find("mucube"), std::string::npos);
    EXPECT_NE(quo.out.find("euclidean       8    24    12      3"), std::string::npos) << quo.out;
    EXPECT_EQ(quo.out.find("failed"), std::string::npos);
}
