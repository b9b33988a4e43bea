#include <doctest.h>

#include <cmath>
#include <regex>

#include "fixtures.hpp"
#include "sdmce/laplacian.hpp"
#include "sdmce/metrics.hpp"
#include "sdmce/pipeline.hpp"
#include "sdmce/report_json.hpp"
#include "sdmce/svg.hpp"

using namespace sdmce;

namespace
{

void same(const Eigen::VectorXd& a, const Eigen::VectorXd& b)
{
    REQUIRE(a.size() == b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (std::isnan(a(i))) {
            CHECK(std::isnan(b(i)));
        } else {
            CHECK(a(i) == b(i));
        }
    }
}

}  // namespace

TEST_CASE("report survives a JSON round trip")
{
    const TriMesh m = testing::jittered_disk(3, shapes::Surface::hemisphere, 0.3, 9);
    RunConfig c;
    c.mu = 10;
    const RunResult r = parameterize(m, c);
    QualityReport q = r.report;
    q.angle_errors.per_corner(4) = std::nan("");
    q.beltrami.per_face(2) = std::numeric_limits<double>::infinity();

    const std::string text = to_json(q).dump();
    const QualityReport back = report_from_json(nlohmann::json::parse(text));
    CHECK(back.mu == q.mu);
    CHECK(back.E_Cd == q.E_Cd);
    CHECK(back.eps_A_signed == q.eps_A_signed);
    CHECK(back.area == q.area);
    CHECK(back.angle_errors.mean == q.angle_errors.mean);
    CHECK(back.angle_errors.std == q.angle_errors.std);
    same(back.angle_errors.per_corner, q.angle_errors.per_corner);
    CHECK(std::isinf(back.beltrami.per_face(2)));
    same(back.d_list, q.d_list);
    CHECK(back.folding.folded_boundary_vertices == q.folding.folded_boundary_vertices);
    CHECK(back.injectivity_violations == q.injectivity_violations);
    CHECK(back.wall_seconds == q.wall_seconds);

    const auto keys = to_json(q, false);
    std::vector<std::string> names;
    for (auto it = keys.begin(); it != keys.end(); ++it) {
        names.push_back(it.key());
    }
    CHECK(names == std::vector<std::string>{"mu", "E_Cd", "eps_A_signed", "area", "angle_errors", "beltrami",
                                            "d_list", "folding", "injectivity_violations"});
}

TEST_CASE("tuning history JSON")
{
    std::vector<MuProbe> h{{TunePhase::escalate_low, 0, -0.5, std::nan(""), 0.1, 0.25, false}};
    const auto j = to_json(h, true);
    CHECK(j[0]["phase"] == "escalate_low");
    CHECK(j[0]["eps_A"].is_null());
    CHECK(j[0]["seconds"] == 0.25);
    CHECK_FALSE(to_json(h, false)[0].contains("seconds"));
}

TEST_CASE("FNV-1a")
{
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("SVG layout")
{
    const TriMesh m = shapes::make_fan(12);
    const Eigen::MatrixX2d f = m.vertices().leftCols<2>();
    const std::string a = render_svg(m, f);
    CHECK(a == render_svg(m, f));
    CHECK(a.find("<circle") != std::string::npos);
    const std::regex line("<line ");
    CHECK(std::distance(std::sregex_iterator(a.begin(), a.end(), line), std::sregex_iterator()) == 24);
    const auto folded = a.substr(a.find("<g id=\"folded\""), a.find("</g>") - a.find("<g id=\"folded\""));
    CHECK(folded.find("<polygon") == std::string::npos);

    Eigen::MatrixX2d g = f;
    g.row(3).swap(g.row(4));
    const FoldingReport rep = classify_folding(m, g);
    const std::string b = render_svg(m, g);
    const auto fb = b.substr(b.find("<g id=\"folded\""), b.find("</g>") - b.find("<g id=\"folded\""));
    const std::regex poly("<polygon ");
    CHECK(std::distance(std::sregex_iterator(fb.begin(), fb.end(), poly), std::sregex_iterator()) ==
          rep.folded_triangle_count());
    CHECK(rep.folded_triangle_count() > 0);
}
