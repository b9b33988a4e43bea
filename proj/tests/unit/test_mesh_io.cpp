#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "sdmce/errors.hpp"
#include "sdmce/mesh_io.hpp"

using namespace sdmce;

namespace
{

TriMesh parse(const std::string& text, MeshFormat fmt = MeshFormat::obj)
{
    std::istringstream in(text);
    return load_mesh(in, fmt);
}

const char* const tetrahedron = "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\n"
                                "f 1 3 2\nf 1 2 4\nf 2 3 4\nf 3 1 4\n";

}  // namespace

TEST_CASE("single triangle is its own boundary")
{
    const TriMesh m = parse("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n");
    CHECK(m.boundary_loop() == std::vector<int>{0, 1, 2});
    CHECK(m.interior_vertices().empty());
}

TEST_CASE("quad boundary follows face orientation")
{
    const TriMesh m = parse("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3\nf 1 3 4\n");
    CHECK(m.boundary_loop() == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("fan rim in rim order")
{
    const TriMesh m = shapes::make_fan(6);
    CHECK(m.boundary_loop() == std::vector<int>{1, 2, 3, 4, 5, 6});
    CHECK(m.interior_vertices() == std::vector<int>{0});
    const auto d = diagnose(m.vertices(), m.faces());
    CHECK(d.vertex_count == 7);
    CHECK(d.edge_count == 12);
    CHECK(d.face_count == 6);
    CHECK(d.euler_characteristic == 1);
    CHECK(d.is_disk);
}

TEST_CASE("closed surface is rejected")
{
    CHECK_THROWS_WITH_AS(parse(tetrahedron), doctest::Contains("no boundary loop"), TopologyError);
    std::istringstream in(tetrahedron);
    const RawMesh raw = read_mesh(in, MeshFormat::obj);
    const auto d = diagnose(raw.vertices, raw.faces);
    CHECK_FALSE(d.is_disk);
    REQUIRE_FALSE(d.defects.empty());
    CHECK(d.defects.front().kind == DefectKind::no_boundary);
}

TEST_CASE("topology defects")
{
    SUBCASE("two components")
    {
        std::istringstream in("v 0 0 0\nv 1 0 0\nv 0 1 0\nv 5 0 0\nv 6 0 0\nv 5 1 0\nf 1 2 3\nf 4 5 6\n");
        const RawMesh raw = read_mesh(in, MeshFormat::obj);
        const auto d = diagnose(raw.vertices, raw.faces);
        CHECK_FALSE(d.is_disk);
        CHECK(d.boundary_loop_count == 2);
        CHECK_THROWS_AS(TriMesh(raw.vertices, raw.faces), TopologyError);
    }
    SUBCASE("inconsistent winding")
    {
        CHECK_THROWS_AS(parse("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3\nf 1 4 3\n"), TopologyError);
    }
    SUBCASE("non-manifold edge")
    {
        CHECK_THROWS_AS(parse("v 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 -1 0\nv 0 0 1\n"
                              "f 1 2 3\nf 2 1 4\nf 1 2 5\n"),
                        TopologyError);
    }
    SUBCASE("isolated vertex")
    {
        CHECK_THROWS_AS(parse("v 0 0 0\nv 1 0 0\nv 0 1 0\nv 9 9 9\nf 1 2 3\n"), TopologyError);
    }
}

TEST_CASE("parse errors carry line numbers")
{
    try {
        parse("v 0 0 0\nv 1 0 0\nv 0 1 x\nf 1 2 3\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    try {
        parse("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 5);
    }
    CHECK_THROWS_AS(parse("v 0 0 0\nv 1 0\n"), ParseError);
    CHECK_THROWS_AS(parse("v 0 0 0\nf 1 2 3\n"), TopologyError);
}

TEST_CASE("OFF input")
{
    const TriMesh m = parse("OFF\n# comment\n4 2 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n3 0 1 2\n3 0 2 3\n",
                            MeshFormat::off);
    CHECK(m.vertex_count() == 4);
    CHECK(m.boundary_loop() == std::vector<int>{0, 1, 2, 3});
    CHECK_THROWS_AS(parse("OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n", MeshFormat::off),
                    ParseError);
}

TEST_CASE("boundary start is canonical under face reordering")
{
    const TriMesh m = shapes::make_polar_disk(3, shapes::Surface::plane);
    Eigen::MatrixX3i F = m.faces();
    std::vector<int> order(static_cast<std::size_t>(F.rows()));
    std::iota(order.begin(), order.end(), 0);
    std::mt19937 rng(4);
    std::shuffle(order.begin(), order.end(), rng);
    Eigen::MatrixX3i G(F.rows(), 3);
    for (Eigen::Index i = 0; i < F.rows(); ++i) {
        G.row(i) = F.row(order[static_cast<std::size_t>(i)]);
    }
    CHECK(extract_boundary(G) == m.boundary_loop());
    CHECK(m.boundary_loop().front() == *std::min_element(m.boundary_loop().begin(), m.boundary_loop().end()));
}

TEST_CASE("parameterized output round trip")
{
    const TriMesh m = shapes::make_polar_disk(2, shapes::Surface::hemisphere);
    Eigen::MatrixX2d uv = m.vertices().leftCols<2>();
    uv(3, 0) = 1.0 / 3.0;

    std::stringstream obj;
    write_parameterized(m, uv, obj, UvFormat::obj);
    const RawMesh back = read_mesh(obj, MeshFormat::obj);
    CHECK(back.faces == m.faces());
    REQUIRE(back.uv.has_value());
    CHECK((*back.uv - uv).cwiseAbs().maxCoeff() <= 1e-12);
    const TriMesh again(back.vertices, back.faces);
    CHECK(again.boundary_loop() == m.boundary_loop());

    std::stringstream csv;
    write_parameterized(m, uv, csv, UvFormat::csv);
    std::string header;
    std::getline(csv, header);
    CHECK(header == "index,u,v");
    int rows = 0;
    for (std::string line; std::getline(csv, line);) {
        rows += line.empty() ? 0 : 1;
    }
    CHECK(rows == m.vertex_count());
    csv.clear();
    csv.seekg(0);
    CHECK((read_uv_csv(csv, m.vertex_count()) - uv).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("triangle output lists vt matching the plane")
{
    const TriMesh m = testing::make_mesh({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 2}});
    std::stringstream s;
    write_parameterized(m, m.vertices().leftCols<2>(), s, UvFormat::obj);
    const std::string text = s.str();
    CHECK(text.find("vt 0 0") != std::string::npos);
    CHECK(text.find("vt 1 0") != std::string::npos);
    CHECK(text.find("vt 0 1") != std::string::npos);
    CHECK(text.find("f 1/1 2/2 3/3") != std::string::npos);
}

TEST_CASE("failed sink raises IoError")
{
    const TriMesh m = shapes::make_fan(4);
    std::ostringstream s;
    s.setstate(std::ios::badbit);
    CHECK_THROWS_AS(write_parameterized(m, Eigen::MatrixX2d::Zero(5, 2), s, UvFormat::csv), IoError);
    std::ostringstream ok;
    CHECK_THROWS_AS(write_parameterized(m, Eigen::MatrixX2d::Zero(3, 2), ok, UvFormat::csv), IoError);
}

TEST_CASE("coincident vertices are reported, not merged")
{
    std::istringstream in("v 0 0 0\nv 1 0 0\nv 0 1 0\nv 1 0 0\nv 2 0 0\nv 1 1 0\nf 1 2 3\nf 4 5 6\n");
    const RawMesh raw = read_mesh(in, MeshFormat::obj);
    const auto d = diagnose(raw.vertices, raw.faces);
    REQUIRE(d.coincident_vertices.size() == 1);
    CHECK(d.coincident_vertices.front() == std::pair<int, int>{1, 3});
}
