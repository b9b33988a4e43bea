#include "sdmce/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Geometry>
#include <Eigen/LU>

#include "sdmce/disk_energy.hpp"

namespace sdmce
{

AngleErrors angle_errors(const TriMesh& mesh, const Eigen::MatrixX2d& f)
{
    const auto& F = mesh.faces();
    const auto& V = mesh.vertices();
    AngleErrors out;
    out.per_corner.resize(3 * F.rows());
    double sum = 0.0;
    int count = 0;
    for (Eigen::Index t = 0; t < F.rows(); ++t) {
        const Eigen::RowVector2d q0 = f.row(F(t, 0));
        const Eigen::RowVector2d e1 = f.row(F(t, 1)) - q0;
        const Eigen::RowVector2d e2 = f.row(F(t, 2)) - q0;
        const double longest =
            std::max({e1.squaredNorm(), e2.squaredNorm(), (e2 - e1).squaredNorm()});
        const double cross = e1(0) * e2(1) - e1(1) * e2(0);
        if (!(std::abs(cross) > 1e-14 * longest) || longest == 0.0) {
            out.degenerate_faces.push_back(static_cast<int>(t));
            out.per_corner.segment<3>(3 * t).setConstant(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        for (int c = 0; c < 3; ++c) {
            const int i = F(t, c);
            const int j = F(t, (c + 1) % 3);
            const int k = F(t, (c + 2) % 3);
            const Eigen::Vector3d a = (V.row(j) - V.row(i)).transpose();
            const Eigen::Vector3d b = (V.row(k) - V.row(i)).transpose();
            const double src = std::atan2(a.cross(b).norm(), a.dot(b));
            const Eigen::RowVector2d p = f.row(j) - f.row(i);
            const Eigen::RowVector2d q = f.row(k) - f.row(i);
            const double img = std::atan2(p(0) * q(1) - p(1) * q(0), p.dot(q));
            const double e = std::abs(src - img) / src;
            out.per_corner(3 * t + c) = e;
            sum += e;
            ++count;
        }
    }
    if (count == 0) {
        out.mean = std::numeric_limits<double>::infinity();
        out.std = 0.0;
        return out;
    }
    out.mean = sum / count;
    double var = 0.0;
    for (Eigen::Index i = 0; i < out.per_corner.size(); ++i) {
        if (!std::isnan(out.per_corner(i))) {
            const double d = out.per_corner(i) - out.mean;
            var += d * d;
        }
    }
    out.std = std::sqrt(var / count);
    return out;
}

double beltrami_modulus(const Eigen::Vector2d& u1, const Eigen::Vector2d& u2,
                        const Eigen::Vector2d& q1, const Eigen::Vector2d& q2)
{
    Eigen::Matrix2d U;
    U << u1, u2;
    Eigen::Matrix2d Q;
    Q << q1, q2;
    const Eigen::Matrix2d J = Q * U.inverse();
    using C = std::complex<double>;
    const C fx(J(0, 0), J(1, 0));
    const C fy(J(0, 1), J(1, 1));
    const C I(0.0, 1.0);
    const C fz = 0.5 * (fx - I * fy);
    const C fzbar = 0.5 * (fx + I * fy);
    if (std::abs(fz) < 1e-14) {
        return std::numeric_limits<double>::infinity();
    }
    return std::abs(fzbar) / std::abs(fz);
}

BeltramiCoefficients beltrami_coefficients(const TriMesh& mesh, const Eigen::MatrixX2d& f)
{
    const auto& F = mesh.faces();
    const auto& V = mesh.vertices();
    BeltramiCoefficients out;
    out.per_face.resize(F.rows());
    double sum = 0.0;
    int finite = 0;
    for (Eigen::Index t = 0; t < F.rows(); ++t) {
        const Eigen::Vector3d p0 = V.row(F(t, 0)).transpose();
        const Eigen::Vector3d e1 = V.row(F(t, 1)).transpose() - p0;
        const Eigen::Vector3d e2 = V.row(F(t, 2)).transpose() - p0;
        const double l1 = e1.norm();
        const Eigen::Vector3d x = e1 / l1;
        const Eigen::Vector2d u1(l1, 0.0);
        const Eigen::Vector2d u2(e2.dot(x), e2.cross(x).norm());
        const Eigen::Vector2d q1 = (f.row(F(t, 1)) - f.row(F(t, 0))).transpose();
        const Eigen::Vector2d q2 = (f.row(F(t, 2)) - f.row(F(t, 0))).transpose();
        const double m = beltrami_modulus(u1, u2, q1, q2);
        out.per_face(t) = m;
        if (std::isfinite(m)) {
            sum += m;
            ++finite;
        } else {
            ++out.infinite_count;
        }
    }
    out.mean = finite > 0 ? sum / finite : std::numeric_limits<double>::infinity();
    return out;
}

Eigen::VectorXd bijectivity_distances(const TriMesh& mesh, const Eigen::MatrixX2d& f)
{
    const int n = mesh.vertex_count();
    Eigen::VectorXd d(n);
    if (n < 2) {
        d.setZero();
        return d;
    }
    const auto& V = mesh.vertices();
    const Eigen::RowVector2d lo = f.colwise().minCoeff();
    const Eigen::RowVector2d hi = f.colwise().maxCoeff();
    const int cells = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(n) / 2.0)));
    const double h = std::max({hi(0) - lo(0), hi(1) - lo(1), 1e-300}) / cells;
    auto cell = [&](double x, double l) {
        return std::clamp(static_cast<int>((x - l) / h), 0, cells - 1);
    };
    std::vector<std::vector<int>> grid(static_cast<std::size_t>(cells) * cells);
    for (int v = 0; v < n; ++v) {
        grid[static_cast<std::size_t>(cell(f(v, 1), lo(1))) * cells + cell(f(v, 0), lo(0))]
            .push_back(v);
    }

    for (int i = 0; i < n; ++i) {
        const int cx = cell(f(i, 0), lo(0));
        const int cy = cell(f(i, 1), lo(1));
        double best2 = std::numeric_limits<double>::infinity();
        double best3 = std::numeric_limits<double>::infinity();
        for (int r = 0; r < cells; ++r) {
            // every point in ring r is at least (r - 1) h away
            if (r >= 2 && (r - 1) * h * ((r - 1) * h) > best2) {
                break;
            }
            for (int y = cy - r; y <= cy + r; ++y) {
                if (y < 0 || y >= cells) {
                    continue;
                }
                const bool edge_row = (y == cy - r || y == cy + r);
                for (int x = cx - r; x <= cx + r; x += edge_row ? 1 : 2 * r) {
                    if (x >= 0 && x < cells) {
                        for (int j : grid[static_cast<std::size_t>(y) * cells + x]) {
                            if (j == i) {
                                continue;
                            }
                            const double d2 = (f.row(j) - f.row(i)).squaredNorm();
                            if (d2 > best2) {
                                continue;
                            }
                            const double d3 = (V.row(j) - V.row(i)).norm();
                            if (d2 < best2 || d3 < best3) {
                                best2 = d2;
                                best3 = d3;
                            }
                        }
                    }
                    if (r == 0) {
                        break;
                    }
                }
            }
        }
        d(i) = best3;
    }
    return d;
}

QualityReport build_report(const TriMesh& mesh, const SparseMatrix& laplacian,
                           const Eigen::MatrixX2d& f, double mu, double wall_seconds)
{
    QualityReport r;
    r.mu = mu;
    r.E_Cd = dirichlet_energy(laplacian, f) - pi;
    r.area = polygon_area(boundary_rows(f, mesh.boundary_loop()));
    r.eps_A_signed = signed_area_deviation(r.area);
    r.angle_errors = angle_errors(mesh, f);
    r.beltrami = beltrami_coefficients(mesh, f);
    r.d_list = bijectivity_distances(mesh, f);
    r.folding = classify_folding(mesh, f);
    r.injectivity_violations = count_injectivity_violations(mesh, f);
    r.wall_seconds = wall_seconds;
    return r;
}

}  // namespace sdmce
