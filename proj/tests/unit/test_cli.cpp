#include <doctest.h>

#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "sdmce/disk_energy.hpp"
#include "sdmce_tools/cli.hpp"

using namespace sdmce;
namespace fs = std::filesystem;

namespace
{

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run invoke(std::vector<std::string> args)
{
    args.insert(args.begin(), "sdmce");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path write(const fs::path& p, const std::string& text)
{
    std::ofstream(p) << text;
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

nlohmann::json json_file(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

const char* const tetrahedron = "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\n"
                                "f 1 3 2\nf 1 2 4\nf 2 3 4\nf 3 1 4\n";

}  // namespace

TEST_CASE("parameterize the flat 12-fan")
{
    const auto dir = testing::scratch_dir("cli_fan");
    const auto mesh = write(dir / "fan.obj", testing::obj_text(shapes::make_fan(12)));
    const Run r = invoke({"parameterize", "--input", mesh.string(), "--report", (dir / "r.json").string(),
                       "--output", (dir / "out.obj").string(), "--svg", (dir / "out.svg").string(),
                       "--trace", (dir / "t.csv").string(), "--history", (dir / "h.csv").string()});
    CHECK(r.code == cli::ok);
    const auto j = json_file(dir / "r.json");
    CHECK(j["eps_A_signed"].get<double>() >= -1e-4);
    CHECK(j["folding"]["totals"]["triangles"] == 0);
    CHECK(j["folding"]["totals"]["boundary_vertices"] == 0);
    CHECK(j["manifest"]["input_fnv1a64"].get<std::string>().size() == 16);
    CHECK(j["solver"]["termination"] == "converged");
    CHECK(j["tuning"].is_array());
    CHECK(slurp(dir / "t.csv").rfind("iteration,objective", 0) == 0);
    CHECK(slurp(dir / "h.csv").rfind("mu,E_Cd", 0) == 0);
    CHECK(slurp(dir / "out.svg").find("<svg") != std::string::npos);

    SUBCASE("metrics re-audit matches the solve-time report")
    {
        const Run m = invoke({"metrics", "--input", mesh.string(), "--uv", (dir / "out.obj").string(),
                           "--report", (dir / "m.json").string()});
        CHECK(m.code == cli::ok);
        const auto k = json_file(dir / "m.json");
        CHECK(std::abs(k["E_Cd"].get<double>() - j["E_Cd"].get<double>()) <= 1e-12);
        CHECK(std::abs(k["angle_errors"]["mean"].get<double>() - j["angle_errors"]["mean"].get<double>()) <= 1e-12);
        CHECK(k["folding"] == j["folding"]);
    }
}

TEST_CASE("reports are reproducible without timings")
{
    const auto dir = testing::scratch_dir("cli_repro");
    const auto mesh = write(dir / "disk.obj",
                            testing::obj_text(testing::jittered_disk(3, shapes::Surface::hemisphere, 0.3, 1)));
    for (const char* name : {"a.json", "b.json"}) {
        CHECK(invoke({"parameterize", "-i", mesh.string(), "--report", (dir / name).string(), "--no-timings",
                   "--init", "random", "--seed", "5"})
                  .code == cli::ok);
    }
    CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
    CHECK(json_file(dir / "a.json")["manifest"]["config"]["init"] == "random:5");
}

TEST_CASE("exit codes")
{
    const auto dir = testing::scratch_dir("cli_codes");
    SUBCASE("closed surface")
    {
        const auto p = write(dir / "tet.obj", tetrahedron);
        const Run r = invoke({"parameterize", "-i", p.string()});
        CHECK(r.code == cli::input_error);
        CHECK(r.err.find("no boundary loop") != std::string::npos);
    }
    SUBCASE("malformed file")
    {
        const auto p = write(dir / "bad.obj", "v 0 0 0\nv 1 0\n");
        CHECK(invoke({"parameterize", "-i", p.string()}).code == cli::input_error);
    }
    SUBCASE("missing file")
    {
        CHECK(invoke({"parameterize", "-i", (dir / "nope.obj").string()}).code == cli::io_error);
    }
    SUBCASE("unwritable output")
    {
        const auto p = write(dir / "fan.obj", testing::obj_text(shapes::make_fan(6)));
        CHECK(invoke({"parameterize", "-i", p.string(), "--report", (dir / "no" / "dir" / "r.json").string()}).code ==
              cli::io_error);
    }
    SUBCASE("bad flag values")
    {
        const auto p = write(dir / "fan.obj", testing::obj_text(shapes::make_fan(6)));
        CHECK(invoke({"parameterize", "-i", p.string(), "--mu", "-1"}).code == cli::input_error);
        CHECK(invoke({"parameterize", "-i", p.string(), "--init", "arc:0"}).code == cli::input_error);
        CHECK(invoke({"parameterize", "-i", p.string(), "--variant", "nope"}).code == cli::input_error);
        CHECK(invoke({"frobnicate"}).code == cli::input_error);
    }
    SUBCASE("repair disabled leaves residual folds")
    {
        const auto p = write(dir / "disk.obj",
                             testing::obj_text(shapes::make_polar_disk(6, shapes::Surface::hemisphere)));
        CHECK(invoke({"parameterize", "-i", p.string(), "--mu", "10", "--init", "random", "--seed", "3", "--max-iterations", "1", "--no-repair"}).code ==
              cli::residual_foldings);
    }
}

TEST_CASE("check subcommand")
{
    const auto dir = testing::scratch_dir("cli_check");
    const auto tri = write(dir / "tri.obj", "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n");
    const Run ok = invoke({"check", tri.string()});
    CHECK(ok.code == cli::ok);
    CHECK(nlohmann::json::parse(ok.out)["is_disk"] == true);
    CHECK(invoke({"check", write(dir / "tet.obj", tetrahedron).string()}).code == cli::input_error);
    const Run two = invoke({"check", write(dir / "two.off", "OFF\n6 2 0\n0 0 0\n1 0 0\n0 1 0\n5 0 0\n6 0 0\n5 1 0\n"
                                                          "3 0 1 2\n3 3 4 5\n")
                                      .string()});
    CHECK(two.code == cli::input_error);
    CHECK_FALSE(nlohmann::json::parse(two.out)["defects"].empty());
}

TEST_CASE("metrics subcommand")
{
    const auto dir = testing::scratch_dir("cli_metrics");
    const auto mesh = write(dir / "fan.obj", testing::obj_text(shapes::make_fan(8)));
    CHECK(invoke({"metrics", "-i", mesh.string()}).code == cli::input_error);

    std::ostringstream csv;
    csv << std::setprecision(17);
    csv << "index,u,v\n0,0,0\n";
    const TriMesh fan = shapes::make_fan(8);
    for (int v = 1; v < 9; ++v) {
        csv << v << ',' << fan.vertices()(v, 0) << ',' << fan.vertices()(v, 1) << '\n';
    }
    const auto uv = write(dir / "id.csv", csv.str());
    const Run r = invoke({"metrics", "-i", mesh.string(), "--uv", uv.string()});
    CHECK(r.code == cli::ok);
    CHECK(nlohmann::json::parse(r.out)["angle_errors"]["mean"].get<double>() <= 1e-12);

    std::string flipped = csv.str();
    flipped.replace(flipped.find("\n0,0,0\n"), 7, "\n0,2,0\n");
    const Run f = invoke({"metrics", "-i", mesh.string(), "--uv", write(dir / "flip.csv", flipped).string()});
    CHECK(f.code == cli::ok);
    CHECK(nlohmann::json::parse(f.out)["folding"]["totals"]["triangles"].get<int>() >= 1);
}

TEST_CASE("several inputs in parallel")
{
    const auto dir = testing::scratch_dir("cli_jobs");
    std::vector<std::string> args{"parameterize"};
    for (int n : {6, 9, 12}) {
        const auto p = write(dir / ("fan" + std::to_string(n) + ".obj"), testing::obj_text(shapes::make_fan(n)));
        args.push_back("-i");
        args.push_back(p.string());
    }
    auto with = args;
    with.insert(with.end(), {"--jobs", "3", "--report", (dir / "{stem}.json").string()});
    const Run r = invoke(with);
    CHECK(r.code == cli::ok);
    for (int n : {6, 9, 12}) {
        const auto j = json_file(dir / ("fan" + std::to_string(n) + ".json"));
        CHECK(j["E_Cd"].get<double>() == doctest::Approx(0.5 * n * std::sin(2 * pi / n) - pi).epsilon(1e-6));
    }
    CHECK(r.out.find("fan6") < r.out.find("fan9"));
    CHECK(r.out.find("fan9") < r.out.find("fan12"));
    auto bad = args;
    bad.insert(bad.end(), {"--report", (dir / "x.json").string()});
    CHECK(invoke(bad).code == cli::input_error);
}
