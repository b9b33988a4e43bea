#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "sdmce/unfolding.hpp"

namespace sdmce::testing
{

TriMesh make_mesh(std::initializer_list<std::initializer_list<double>> vertices,
                  std::initializer_list<std::initializer_list<int>> faces)
{
    Eigen::MatrixX3d V(static_cast<Eigen::Index>(vertices.size()), 3);
    Eigen::Index r = 0;
    for (const auto& v : vertices) {
        Eigen::Index c = 0;
        for (double x : v) {
            V(r, c++) = x;
        }
        ++r;
    }
    Eigen::MatrixX3i F(static_cast<Eigen::Index>(faces.size()), 3);
    r = 0;
    for (const auto& t : faces) {
        Eigen::Index c = 0;
        for (int x : t) {
            F(r, c++) = x;
        }
        ++r;
    }
    return TriMesh(std::move(V), std::move(F));
}

TriMesh jittered_disk(int rings, shapes::Surface surface, double amplitude, std::uint64_t seed)
{
    const TriMesh base = shapes::make_polar_disk(rings, surface);
    Eigen::MatrixX3d V = base.vertices();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double h = surface == shapes::Surface::plane ? 1.0 / rings : 0.5 * std::numbers::pi / rings;
    const double rim_step = 2 * std::numbers::pi / (6.0 * rings);
    for (int v = 1; v < V.rows(); ++v) {
        if (base.is_boundary(v)) {
            const double t = std::atan2(V(v, 1), V(v, 0)) + amplitude * rim_step * u(rng);
            const double r = std::hypot(V(v, 0), V(v, 1));
            V(v, 0) = r * std::cos(t);
            V(v, 1) = r * std::sin(t);
            continue;
        }
        Eigen::RowVector3d d(u(rng), u(rng), 0.0);
        if (surface == shapes::Surface::hemisphere) {
            d(2) = u(rng);
        }
        Eigen::RowVector3d p = V.row(v) + amplitude * h * d;
        if (surface == shapes::Surface::hemisphere) {
            p(2) = std::max(p(2), 1e-3);
            p.normalize();
        }
        V.row(v) = p;
    }
    return TriMesh(std::move(V), base.faces());
}

std::vector<int> deep_faces(const TriMesh& mesh, const Eigen::MatrixX2d& f,
                            const Eigen::RowVector2d& center)
{
    std::vector<std::pair<double, int>> order;
    const auto& F = mesh.faces();
    for (int t = 0; t < mesh.face_count(); ++t) {
        bool deep = true;
        for (int c = 0; c < 3 && deep; ++c) {
            const int v = F(t, c);
            deep = !mesh.is_boundary(v);
            for (int u : mesh.neighbors(v)) {
                deep = deep && !mesh.is_boundary(u);
            }
        }
        if (deep) {
            const Eigen::RowVector2d g = (f.row(F(t, 0)) + f.row(F(t, 1)) + f.row(F(t, 2))) / 3.0;
            order.emplace_back((g - center).norm(), t);
        }
    }
    std::sort(order.begin(), order.end());
    std::vector<int> out;
    for (const auto& [d, t] : order) {
        out.push_back(t);
    }
    return out;
}

int boundary_face_at(const TriMesh& mesh, int position)
{
    for (int t = 0; t < mesh.face_count(); ++t) {
        const auto e = boundary_edge_of(mesh, t);
        if (e && e->position == position) {
            return t;
        }
    }
    return -1;
}

void plant_boundary_swap(const TriMesh& mesh, Eigen::MatrixX2d& f, int position)
{
    const auto& loop = mesh.boundary_loop();
    const int n = static_cast<int>(loop.size());
    const int a = loop[(position - 1 + n) % n];
    const int b = loop[position % n];
    const Eigen::RowVector2d tmp = f.row(a);
    f.row(a) = f.row(b);
    f.row(b) = tmp;
}

void plant_apex_beyond(const TriMesh& mesh, Eigen::MatrixX2d& f, int face)
{
    const auto e = boundary_edge_of(mesh, face);
    const Eigen::RowVector2d mid = 0.5 * (f.row(e->j) + f.row(e->k));
    f.row(e->apex) = 1.01 * mid.normalized();
}

void plant_interior_flip(const TriMesh& mesh, Eigen::MatrixX2d& f, int face)
{
    const auto& F = mesh.faces();
    const int a = F(face, 0);
    const Eigen::RowVector2d p = f.row(F(face, 1));
    const Eigen::RowVector2d q = f.row(F(face, 2));
    const Eigen::RowVector2d e = (q - p).normalized();
    const Eigen::RowVector2d r = f.row(a) - p;
    const Eigen::RowVector2d along = r.dot(e) * e;
    // mirror image, pulled halfway back toward the edge
    f.row(a) = p + along - 0.5 * (r - along);
}

std::string obj_text(const TriMesh& mesh)
{
    std::ostringstream s;
    write_mesh(mesh, s, MeshFormat::obj);
    return s.str();
}

std::filesystem::path scratch_dir(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / ("sdmce_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace sdmce::testing
