#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Geometry>

#include "fixtures.hpp"
#include "sdmce/disk_energy.hpp"
#include "sdmce/laplacian.hpp"
#include "sdmce/metrics.hpp"

using namespace sdmce;

namespace
{

Eigen::MatrixX2d planar(const TriMesh& m) { return m.vertices().leftCols<2>(); }

// n x 2 grid strip: vertex (i, r) at (i, r * width)
TriMesh strip(int n, double width)
{
    Eigen::MatrixX3d V(2 * n, 3);
    Eigen::MatrixX3i F(2 * (n - 1), 3);
    for (int i = 0; i < n; ++i) {
        V.row(i) << i, 0, 0;
        V.row(n + i) << i, width, 0;
    }
    for (int i = 0; i + 1 < n; ++i) {
        F.row(2 * i) << i, i + 1, n + i + 1;
        F.row(2 * i + 1) << i, n + i + 1, n + i;
    }
    return TriMesh(V, F);
}

}  // namespace

TEST_CASE("angle errors")
{
    SUBCASE("identity")
    {
        const TriMesh m = testing::jittered_disk(3, shapes::Surface::plane, 0.3, 1);
        const AngleErrors e = angle_errors(m, planar(m));
        CHECK(e.per_corner.cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(e.mean <= 1e-12);
        CHECK(e.degenerate_faces.empty());
    }
    SUBCASE("equilateral corner mapped to a right angle")
    {
        const TriMesh m = testing::make_mesh({{0, 0, 0}, {1, 0, 0}, {0.5, std::sqrt(3.0) / 2, 0}}, {{0, 1, 2}});
        Eigen::MatrixX2d f(3, 2);
        f << 0, 0, 1, 0, 0, 1;
        const AngleErrors e = angle_errors(m, f);
        CHECK(e.per_corner(0) == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(e.per_corner(1) == doctest::Approx(0.25).epsilon(1e-14));
    }
    SUBCASE("degenerate image face")
    {
        const TriMesh m = shapes::make_fan(4);
        Eigen::MatrixX2d f = planar(m);
        f.row(0) = f.row(1);
        const AngleErrors e = angle_errors(m, f);
        CHECK(e.degenerate_faces.size() == 2);
        CHECK(std::isnan(e.per_corner(0)));
        CHECK(std::isfinite(e.mean));
    }
}

TEST_CASE("Beltrami coefficients")
{
    const Eigen::Vector2d u1(1, 0);
    const Eigen::Vector2d u2(0.3, 0.8);
    auto apply = [](const Eigen::Matrix2d& A, const Eigen::Vector2d& x) -> Eigen::Vector2d { return A * x; };
    Eigen::Matrix2d sim;
    sim << 1.2, -0.7, 0.7, 1.2;
    CHECK(beltrami_modulus(u1, u2, apply(sim, u1), apply(sim, u2)) <= 1e-14);
    Eigen::Matrix2d stretch;
    stretch << 2, 0, 0, 1;
    CHECK(beltrami_modulus(u1, u2, apply(stretch, u1), apply(stretch, u2)) ==
          doctest::Approx(1.0 / 3).epsilon(1e-14));
    Eigen::Matrix2d mirror;
    mirror << 1, 0, 0, -1;
    const double r = beltrami_modulus(u1, u2, apply(mirror, u1), apply(mirror, u2));
    CHECK((std::isinf(r) || r > 1));

    const TriMesh m = testing::jittered_disk(3, shapes::Surface::hemisphere, 0.3, 2);
    const Eigen::MatrixX2d f = planar(m);
    const BeltramiCoefficients b = beltrami_coefficients(m, f);
    const Eigen::Matrix2d rot = Eigen::Rotation2Dd(0.7).toRotationMatrix();
    const BeltramiCoefficients br = beltrami_coefficients(m, f * rot.transpose());
    CHECK((b.per_face - br.per_face).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(b.per_face.maxCoeff() < 1.0);
    CHECK(b.infinite_count == 0);

    Eigen::MatrixX3i cyc = m.faces();
    cyc.col(0).swap(cyc.col(1));
    cyc.col(1).swap(cyc.col(2));
    const TriMesh m2(m.vertices(), cyc);
    CHECK((beltrami_coefficients(m2, f).per_face - b.per_face).cwiseAbs().maxCoeff() <= 1e-12);

    const BeltramiCoefficients id = beltrami_coefficients(shapes::make_fan(7), planar(shapes::make_fan(7)));
    CHECK(id.per_face.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("bijectivity distances")
{
    SUBCASE("identity gives nearest-neighbour distances")
    {
        const TriMesh m = testing::jittered_disk(4, shapes::Surface::plane, 0.3, 3);
        const Eigen::VectorXd d = bijectivity_distances(m, planar(m));
        for (int i = 0; i < m.vertex_count(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (int j = 0; j < m.vertex_count(); ++j) {
                if (j != i) {
                    best = std::min(best, (m.vertex(i) - m.vertex(j)).norm());
                }
            }
            CHECK(d(i) == doctest::Approx(best).epsilon(1e-14));
        }
    }
    SUBCASE("single triangle")
    {
        const TriMesh m = testing::make_mesh({{0, 0, 0}, {3, 0, 0}, {0, 4, 0}}, {{0, 1, 2}});
        const Eigen::VectorXd d = bijectivity_distances(m, planar(m));
        CHECK(d(0) == 3.0);
        CHECK(d(1) == 3.0);
        CHECK(d(2) == 4.0);
    }
    SUBCASE("double cover")
    {
        const TriMesh m = strip(21, 1.0);
        Eigen::MatrixX2d f = planar(m);
        // fold the far half back onto the near half
        for (int v = 0; v < m.vertex_count(); ++v) {
            if (f(v, 0) > 10) {
                f(v, 0) = 20 - f(v, 0) + 1e-3;
            }
        }
        const Eigen::VectorXd d = bijectivity_distances(m, f);
        CHECK(d(15) > 5);
        CHECK(d(15) == doctest::Approx(std::hypot(15.0 - 5.0, 0.0)).epsilon(1e-9));
        const Eigen::VectorXd ok = bijectivity_distances(m, planar(m));
        CHECK(ok.maxCoeff() <= 1.0 + 1e-12);
    }
}

TEST_CASE("quality report")
{
    const TriMesh m = shapes::make_fan(12);
    const SparseMatrix L = build_laplacian(m);
    const QualityReport q = build_report(m, L, planar(m), 10, 0.5);
    const double gap = pi - inscribed_polygon_area(12);
    CHECK(q.E_Cd == doctest::Approx(-gap).epsilon(1e-12));
    CHECK(std::abs(q.eps_A_signed - gap) <= 1e-8);
    CHECK(q.mu == 10);
    CHECK(q.wall_seconds == 0.5);
    CHECK(q.folding.clean());
    CHECK(q.injectivity_violations == 0);

    Eigen::MatrixX2d collapsed = Eigen::MatrixX2d::Zero(13, 2).rowwise() + Eigen::RowVector2d(1, 0);
    const QualityReport c = build_report(m, L, collapsed);
    CHECK(c.E_Cd == doctest::Approx(-pi));
    CHECK(c.eps_A_signed == doctest::Approx(pi));
    CHECK(c.angle_errors.degenerate_faces.size() == 12);
}
