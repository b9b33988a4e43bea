#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "sdmce/disk_energy.hpp"
#include "sdmce/laplacian.hpp"
#include "sdmce/optimizer.hpp"
#include "sdmce/pipeline.hpp"

using namespace sdmce;

TEST_CASE("direction update")
{
    Eigen::MatrixX2d g(2, 2);
    g << 1, 0, 0, 1;
    Eigen::MatrixX2d d(2, 2);
    d << -3, 1, 0.5, 2;

    SUBCASE("equal gradients give steepest descent")
    {
        CHECK(ncg_direction(g, g, d) == -g);
    }
    SUBCASE("orthogonal gradients")
    {
        Eigen::MatrixX2d old(2, 2);
        old << 0, 2, -1, 0;
        const double beta = g.squaredNorm() / old.squaredNorm();
        Eigen::MatrixX2d dold(2, 2);
        dold << -0.1, 0, 0, -0.1;
        CHECK((ncg_direction(g, old, dold) - (-g + beta * dold)).norm() <= 1e-15);
    }
    SUBCASE("non-descent candidate is reset")
    {
        Eigen::MatrixX2d old(2, 2);
        old << 0, 0.1, 0.1, 0;
        Eigen::MatrixX2d dold(2, 2);
        dold << 100, 0, 0, 100;
        CHECK(ncg_direction(g, old, dold) == -g);
    }
}

TEST_CASE("config validation")
{
    NcgConfig c;
    CHECK_NOTHROW(c.validate());
    c.contraction = 1.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.gradient_tolerance = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.max_iterations = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("distance to a fixed point on the circles")
{
    const int n = 9;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-pi, pi);
    Eigen::VectorXd tc(n);
    Eigen::VectorXd ts(n);
    for (int i = 0; i < n; ++i) {
        tc(i) = u(rng);
        ts(i) = tc(i) + 0.9 * u(rng) / pi;
    }
    const Eigen::MatrixX2d c = circle_points(tc);
    ObjectivePair obj{[&](const Eigen::MatrixX2d& f) { return 0.5 * (f - c).squaredNorm(); },
                      [&](const Eigen::MatrixX2d& f) -> Eigen::MatrixX2d { return f - c; }};
    const NcgResult r = minimize_on_circles(obj, circle_points(ts), {});
    CHECK(r.trace.termination == Termination::converged);
    CHECK(r.trace.iterations() <= 200);
    CHECK(r.grad_norm <= 1e-6);
    CHECK((r.points - c).cwiseAbs().maxCoeff() <= 1e-5);
}

TEST_CASE("start must lie on the circles")
{
    ObjectivePair obj{[](const Eigen::MatrixX2d& f) { return f.squaredNorm(); },
                      [](const Eigen::MatrixX2d& f) -> Eigen::MatrixX2d { return 2 * f; }};
    CHECK_THROWS_AS(minimize_on_circles(obj, Eigen::MatrixX2d::Constant(3, 2, 0.5), {}),
                    std::invalid_argument);
}

TEST_CASE("flat 12-fan converges to equal angles")
{
    const TriMesh m = shapes::make_fan(12);
    DiskSolver solver(m, SchurMode::explicit_dense, {});
    PenaltyState p;
    p.mu = 10;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.2, 0.2);
    Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(12, 0.0, 2 * pi * 11 / 12);
    for (int i = 0; i < 12; ++i) {
        t(i) += u(rng);
    }
    const NcgResult r = solver.solve(p, circle_points(t));
    CHECK(r.trace.termination == Termination::converged);
    for (std::size_t k = 1; k < r.trace.rows.size(); ++k) {
        CHECK(r.trace.rows[k].objective <= r.trace.rows[k - 1].objective + 1e-12);
    }
    const Eigen::VectorXd a = central_angles(r.points);
    std::vector<double> gaps;
    for (int i = 0; i < 12; ++i) {
        gaps.push_back(std::remainder(a((i + 1) % 12) - a(i), 2 * pi));
    }
    std::sort(gaps.begin(), gaps.end());
    CHECK(gaps.front() == doctest::Approx(2 * pi / 12).epsilon(1e-5));
    CHECK(gaps.back() == doctest::Approx(2 * pi / 12).epsilon(1e-5));
}

TEST_CASE("collapsed start is stationary")
{
    const TriMesh m = shapes::make_polar_disk(3, shapes::Surface::hemisphere);
    DiskSolver solver(m, SchurMode::implicit, {});
    const int n = static_cast<int>(m.boundary_loop().size());
    const Eigen::MatrixX2d start = Eigen::MatrixX2d::Zero(n, 2).rowwise() + Eigen::RowVector2d(1, 0);
    const NcgResult r = solver.solve({}, start);
    CHECK(r.trace.termination == Termination::converged);
    CHECK(r.trace.iterations() == 0);
    CHECK(r.points == start);
}

TEST_CASE("trace CSV")
{
    SolveTrace t;
    t.rows.push_back({0, 1.5, 0.25, 0.0, true});
    t.rows.push_back({1, 1.0, 0.125, 0.5, false});
    std::ostringstream s;
    t.write_csv(s);
    CHECK(s.str() == "iteration,objective,grad_norm,step,restart\n0,1.5,0.25,0,1\n1,1,0.125,0.5,0\n");
    CHECK(t.iterations() == 1);
}
