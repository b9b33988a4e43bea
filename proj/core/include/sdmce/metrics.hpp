#pragma once

#include <vector>

#include <Eigen/Core>

#include "sdmce/laplacian.hpp"
#include "sdmce/mesh_io.hpp"
#include "sdmce/unfolding.hpp"

namespace sdmce
{

/**
 * @brief Relative angle errors |theta_v - theta_f| / theta_v per corner.
 *
 * `per_corner` has 3F entries, corner c of face t at 3t + c. Image angles are
 * signed (counter-clockwise positive), so a reversed face yields errors above
 * one. Corners of image faces with (near) zero area are NaN and their faces
 * are listed in `degenerate_faces`; mean and std skip them. With no valid
 * corner the mean is +inf.
 */
struct AngleErrors {
    Eigen::VectorXd per_corner;
    double mean = 0.0;
    double std = 0.0;
    std::vector<int> degenerate_faces;
};

AngleErrors angle_errors(const TriMesh& mesh, const Eigen::MatrixX2d& f);

/**
 * @brief Per-face |mu| = |f_zbar| / |f_z| of the affine map from the isometrically
 * flattened source triangle to its image.
 *
 * |mu| is +inf when |f_z| < 1e-14. `mean` averages the finite entries.
 */
struct BeltramiCoefficients {
    Eigen::VectorXd per_face;
    double mean = 0.0;
    int infinite_count = 0;
};

BeltramiCoefficients beltrami_coefficients(const TriMesh& mesh, const Eigen::MatrixX2d& f);

/// Beltrami modulus of the affine map taking flat triangle (0, u1, u2) to (0, q1, q2).
double beltrami_modulus(const Eigen::Vector2d& u1, const Eigen::Vector2d& u2,
                        const Eigen::Vector2d& q1, const Eigen::Vector2d& q2);

/**
 * @brief d_i = || v_i - v_i' || where f_i' is the nearest other image point.
 *
 * Exact nearest neighbour through a uniform grid. Among image points at equal
 * distance the one closest in 3D is taken.
 */
Eigen::VectorXd bijectivity_distances(const TriMesh& mesh, const Eigen::MatrixX2d& f);

/// Everything reported about a parameterization.
struct QualityReport {
    double mu = 0.0;
    double E_Cd = 0.0;
    double eps_A_signed = 0.0;
    double area = 0.0;
    AngleErrors angle_errors;
    BeltramiCoefficients beltrami;
    Eigen::VectorXd d_list;
    FoldingReport folding;
    int injectivity_violations = 0;
    double wall_seconds = 0.0;
};

/**
 * @brief Evaluates all metrics of the full embedding `f`.
 *
 * E_Cd is 1/2 <L f, f> - pi on the full map and A(f) the boundary polygon area.
 */
QualityReport build_report(const TriMesh& mesh, const SparseMatrix& laplacian,
                           const Eigen::MatrixX2d& f, double mu = 0.0, double wall_seconds = 0.0);

}  // namespace sdmce
