#include "sdmce/report_json.hpp"

#include <cmath>
#include <limits>

namespace sdmce
{

namespace
{

ordered_json number(double x)
{
    return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr);
}

ordered_json array(const Eigen::VectorXd& v)
{
    ordered_json a = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        a.push_back(number(v(i)));
    }
    return a;
}

double read_number(const nlohmann::json& j, double if_null)
{
    return j.is_null() ? if_null : j.get<double>();
}

Eigen::VectorXd read_array(const nlohmann::json& j, double if_null)
{
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = read_number(j[i], if_null);
    }
    return v;
}

constexpr double nan = std::numeric_limits<double>::quiet_NaN();
constexpr double inf = std::numeric_limits<double>::infinity();

}  // namespace

ordered_json to_json(const FoldingReport& r)
{
    ordered_json j;
    j["folded_boundary_vertices"] = r.folded_boundary_vertices;
    j["folded_interior_triangles"] = r.folded_interior_triangles;
    j["folded_boundary_triangles_kind1"] = r.folded_boundary_triangles_kind1;
    j["folded_boundary_triangles_kind2"] = r.folded_boundary_triangles_kind2;
    j["folded_boundary_triangles_kind3"] = r.folded_boundary_triangles_kind3;
    j["totals"] = {{"boundary_vertices", r.folded_boundary_vertices.size()},
                   {"interior_triangles", r.folded_interior_triangles.size()},
                   {"boundary_triangles_kind1", r.folded_boundary_triangles_kind1.size()},
                   {"boundary_triangles_kind2", r.folded_boundary_triangles_kind2.size()},
                   {"boundary_triangles_kind3", r.folded_boundary_triangles_kind3.size()},
                   {"triangles", r.folded_triangle_count()}};
    return j;
}

FoldingReport folding_from_json(const nlohmann::json& j)
{
    FoldingReport r;
    j.at("folded_boundary_vertices").get_to(r.folded_boundary_vertices);
    j.at("folded_interior_triangles").get_to(r.folded_interior_triangles);
    j.at("folded_boundary_triangles_kind1").get_to(r.folded_boundary_triangles_kind1);
    j.at("folded_boundary_triangles_kind2").get_to(r.folded_boundary_triangles_kind2);
    j.at("folded_boundary_triangles_kind3").get_to(r.folded_boundary_triangles_kind3);
    return r;
}

ordered_json to_json(const QualityReport& r, bool timings)
{
    ordered_json j;
    j["mu"] = r.mu;
    j["E_Cd"] = number(r.E_Cd);
    j["eps_A_signed"] = number(r.eps_A_signed);
    j["area"] = number(r.area);
    j["angle_errors"] = {{"mean", number(r.angle_errors.mean)},
                         {"std", number(r.angle_errors.std)},
                         {"degenerate_faces", r.angle_errors.degenerate_faces},
                         {"values", array(r.angle_errors.per_corner)}};
    j["beltrami"] = {{"mean", number(r.beltrami.mean)},
                     {"infinite_count", r.beltrami.infinite_count},
                     {"values", array(r.beltrami.per_face)}};
    j["d_list"] = array(r.d_list);
    j["folding"] = to_json(r.folding);
    j["injectivity_violations"] = r.injectivity_violations;
    if (timings) {
        j["wall_seconds"] = r.wall_seconds;
    }
    return j;
}

QualityReport report_from_json(const nlohmann::json& j)
{
    QualityReport r;
    r.mu = j.at("mu").get<double>();
    r.E_Cd = read_number(j.at("E_Cd"), nan);
    r.eps_A_signed = read_number(j.at("eps_A_signed"), nan);
    r.area = read_number(j.at("area"), nan);
    const auto& a = j.at("angle_errors");
    r.angle_errors.mean = read_number(a.at("mean"), inf);
    r.angle_errors.std = read_number(a.at("std"), nan);
    a.at("degenerate_faces").get_to(r.angle_errors.degenerate_faces);
    r.angle_errors.per_corner = read_array(a.at("values"), nan);
    const auto& b = j.at("beltrami");
    r.beltrami.mean = read_number(b.at("mean"), inf);
    r.beltrami.infinite_count = b.at("infinite_count").get<int>();
    r.beltrami.per_face = read_array(b.at("values"), inf);
    r.d_list = read_array(j.at("d_list"), nan);
    r.folding = folding_from_json(j.at("folding"));
    r.injectivity_violations = j.at("injectivity_violations").get<int>();
    r.wall_seconds = j.value("wall_seconds", 0.0);
    return r;
}

ordered_json to_json(const std::vector<MuProbe>& history, bool timings)
{
    ordered_json a = ordered_json::array();
    for (const auto& h : history) {
        ordered_json p;
        p["phase"] = to_string(h.phase);
        p["mu"] = h.mu;
        p["E_Cd"] = number(h.conformal_energy);
        p["eps_A"] = number(h.area_deviation);
        p["eps_theta"] = number(h.angle_error);
        p["accepted"] = h.accepted;
        if (timings) {
            p["seconds"] = h.seconds;
        }
        a.push_back(std::move(p));
    }
    return a;
}

std::uint64_t fnv1a64(std::string_view bytes)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace sdmce
