#include "sdmce/disk_energy.hpp"

#include <cmath>
#include <stdexcept>

namespace sdmce
{

Eigen::MatrixX2d circle_points(const Eigen::VectorXd& angles)
{
    Eigen::MatrixX2d f(angles.size(), 2);
    f.col(0) = angles.array().cos();
    f.col(1) = angles.array().sin();
    return f;
}

Eigen::VectorXd central_angles(const Eigen::MatrixX2d& points)
{
    Eigen::VectorXd t(points.rows());
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        double a = std::atan2(points(i, 1), points(i, 0));
        if (a < 0) {
            a += 2 * pi;
        }
        if (a >= 2 * pi) {
            a -= 2 * pi;
        }
        t(i) = a;
    }
    return t;
}

Eigen::MatrixX2d boundary_rows(const Eigen::MatrixX2d& full, const std::vector<int>& loop)
{
    Eigen::MatrixX2d out(static_cast<Eigen::Index>(loop.size()), 2);
    for (std::size_t i = 0; i < loop.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) = full.row(loop[i]);
    }
    return out;
}

namespace cyclic
{

Eigen::MatrixXd shift_forward(const Eigen::MatrixXd& y)
{
    const Eigen::Index n = y.rows();
    Eigen::MatrixXd out(n, y.cols());
    if (n == 0) {
        return out;
    }
    out.topRows(n - 1) = y.bottomRows(n - 1);
    out.row(n - 1) = y.row(0);
    return out;
}

Eigen::MatrixXd central_difference(const Eigen::MatrixXd& y)
{
    const Eigen::Index n = y.rows();
    Eigen::MatrixXd out(n, y.cols());
    for (Eigen::Index i = 0; i < n; ++i) {
        out.row(i) = y.row((i + 1) % n) - y.row((i + n - 1) % n);
    }
    return out;
}

Eigen::MatrixX2d rotate(const Eigen::MatrixX2d& f)
{
    Eigen::MatrixX2d out(f.rows(), 2);
    out.col(0) = f.col(1);
    out.col(1) = -f.col(0);
    return out;
}

}  // namespace cyclic

double polygon_area(const Eigen::MatrixX2d& boundary)
{
    if (boundary.rows() < 3) {
        throw std::invalid_argument("polygon_area needs at least three points");
    }
    const Eigen::MatrixXd d2 = cyclic::central_difference(cyclic::rotate(boundary));
    return 0.25 * (boundary.array() * d2.array()).sum();
}

Eigen::VectorXd sector_terms(const Eigen::MatrixX2d& boundary)
{
    const Eigen::Index n = boundary.rows();
    Eigen::VectorXd sigma(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index p = (i + n - 1) % n;
        sigma(i) = 0.5 * (boundary(p, 0) * boundary(i, 1) - boundary(i, 0) * boundary(p, 1));
    }
    return sigma;
}

namespace
{
double face_cross(const Eigen::MatrixX2d& f, int a, int b, int c)
{
    const Eigen::RowVector2d u = f.row(b) - f.row(a);
    const Eigen::RowVector2d v = f.row(c) - f.row(a);
    return u(0) * v(1) - u(1) * v(0);
}
}  // namespace

double triangulation_area(const Eigen::MatrixX2d& f, const Eigen::MatrixX3i& faces)
{
    double total = 0.0;
    for (Eigen::Index i = 0; i < faces.rows(); ++i) {
        total += std::abs(face_cross(f, faces(i, 0), faces(i, 1), faces(i, 2)));
    }
    return 0.5 * total;
}

double signed_triangulation_area(const Eigen::MatrixX2d& f, const Eigen::MatrixX3i& faces)
{
    double total = 0.0;
    for (Eigen::Index i = 0; i < faces.rows(); ++i) {
        total += face_cross(f, faces(i, 0), faces(i, 1), faces(i, 2));
    }
    return 0.5 * total;
}

double dirichlet_energy(const SparseMatrix& laplacian, const Eigen::MatrixX2d& f)
{
    const Eigen::MatrixX2d lf = laplacian * f;
    return 0.5 * (lf.array() * f.array()).sum();
}

double conformal_energy(const BlockSystem& system, const Eigen::MatrixX2d& boundary)
{
    const Eigen::MatrixXd sf = system.apply_schur(boundary);
    return 0.5 * (sf.array() * boundary.array()).sum() - pi;
}

double inscribed_polygon_area(int n)
{
    return 0.5 * n * std::sin(2 * pi / n);
}

namespace
{

double hinge_value(const Eigen::MatrixX2d& boundary, const PenaltyState& penalty)
{
    if (penalty.alpha.size() == 0) {
        return 0.0;
    }
    if (penalty.alpha.size() != boundary.rows()) {
        throw std::invalid_argument("alpha must have one entry per boundary point");
    }
    const Eigen::VectorXd sigma = sector_terms(boundary);
    double total = 0.0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
        if (sigma(i) < 0) {
            total += penalty.alpha(i) * -sigma(i);
        }
    }
    return total;
}

void add_hinge_gradient(const Eigen::MatrixX2d& f, const PenaltyState& penalty,
                        Eigen::MatrixX2d& g)
{
    if (penalty.alpha.size() == 0) {
        return;
    }
    const Eigen::Index n = f.rows();
    const Eigen::VectorXd sigma = sector_terms(f);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(sigma(i) < 0) || penalty.alpha(i) == 0.0) {
            continue;
        }
        const Eigen::Index p = (i + n - 1) % n;
        const double a = penalty.alpha(i);
        // d(-sigma_i): row i gets -1/2 (-y_p, x_p), row p gets -1/2 (y_i, -x_i)
        g(i, 0) += 0.5 * a * f(p, 1);
        g(i, 1) -= 0.5 * a * f(p, 0);
        g(p, 0) -= 0.5 * a * f(i, 1);
        g(p, 1) += 0.5 * a * f(i, 0);
    }
}

// Area-dependent part of the gradient, given the quadratic-form gradient.
Eigen::MatrixX2d finish_gradient(const Eigen::MatrixX2d& boundary, Eigen::MatrixX2d g,
                                 const PenaltyState& penalty)
{
    const double area = polygon_area(boundary);
    const Eigen::MatrixX2d grad_area =
        0.5 * cyclic::central_difference(cyclic::rotate(boundary));
    double area_coeff = -penalty.mu * (pi - area);
    if (penalty.variant == ObjectiveVariant::subtract_polygon_area) {
        area_coeff -= 1.0;
    }
    g += area_coeff * grad_area;
    add_hinge_gradient(boundary, penalty, g);
    return g;
}

}  // namespace

double penalized_objective(const Eigen::MatrixX2d& boundary, const BlockSystem& system,
                           const PenaltyState& penalty)
{
    const Eigen::MatrixXd sf = system.apply_schur(boundary);
    const double quad = 0.5 * (sf.array() * boundary.array()).sum();
    const double area = polygon_area(boundary);
    const double target =
        penalty.variant == ObjectiveVariant::subtract_polygon_area ? area : pi;
    return quad - target + penalty.mu * area_penalty(area) + hinge_value(boundary, penalty);
}

Eigen::MatrixX2d euclidean_gradient(const Eigen::MatrixX2d& boundary, const BlockSystem& system,
                                    const PenaltyState& penalty)
{
    return finish_gradient(boundary, system.apply_schur(boundary), penalty);
}

Eigen::MatrixX2d project_to_tangent(const Eigen::MatrixX2d& g, const Eigen::MatrixX2d& f)
{
    const Eigen::VectorXd radial = (g.array() * f.array()).rowwise().sum();
    return g - f.cwiseProduct(radial.replicate(1, 2));
}

Eigen::MatrixX2d objective_gradient(const Eigen::MatrixX2d& boundary, const BlockSystem& system,
                                    const PenaltyState& penalty)
{
    return project_to_tangent(euclidean_gradient(boundary, system, penalty), boundary);
}

KktResidual kkt_residual(const Eigen::MatrixX2d& full, const BlockSystem& system,
                         const PenaltyState& penalty)
{
    const int nb = system.boundary_size();
    const int ni = system.interior_size();
    Eigen::MatrixX2d fb(nb, 2);
    Eigen::MatrixX2d fi(ni, 2);
    for (int i = 0; i < nb; ++i) {
        fb.row(i) = full.row(system.boundary()[i]);
    }
    for (int i = 0; i < ni; ++i) {
        fi.row(i) = full.row(system.interior()[i]);
    }
    Eigen::MatrixX2d quad = system.boundary_block() * fb;
    if (ni > 0) {
        quad += system.boundary_interior_block() * fi;
    }
    const Eigen::MatrixX2d g = finish_gradient(fb, quad, penalty);

    KktResidual out;
    out.multipliers = (g.array() * fb.array()).rowwise().sum();
    const Eigen::MatrixX2d r = g - fb.cwiseProduct(out.multipliers.replicate(1, 2));
    out.stationarity = nb > 0 ? r.rowwise().norm().maxCoeff() : 0.0;
    if (ni > 0) {
        const Eigen::MatrixX2d harmonic =
            system.interior_boundary_block() * fb + system.interior_block() * fi;
        out.interior = harmonic.rowwise().norm().maxCoeff();
    }
    return out;
}

}  // namespace sdmce
