#pragma once

#include <numbers>

#include <Eigen/Core>

#include "sdmce/laplacian.hpp"

namespace sdmce
{

inline constexpr double pi = std::numbers::pi;

/**
 * @brief A map of the mesh into the plane with boundary on the unit circle.
 *
 * `points` has one row per vertex. `angles` holds the central angle in
 * [0, 2pi) of each boundary point, in boundary-loop order.
 */
struct DiskEmbedding {
    Eigen::MatrixX2d points;
    Eigen::VectorXd angles;
};

/// Unit-circle points (cos t, sin t), one row per angle.
Eigen::MatrixX2d circle_points(const Eigen::VectorXd& angles);

/// Central angles in [0, 2pi) of the given rows.
Eigen::VectorXd central_angles(const Eigen::MatrixX2d& points);

/// Gathers the boundary-loop rows of a full V x 2 embedding.
Eigen::MatrixX2d boundary_rows(const Eigen::MatrixX2d& full, const std::vector<int>& loop);

enum class ObjectiveVariant {
    subtract_true_area,   /**< 1/2 <Sf, f> - pi */
    subtract_polygon_area /**< 1/2 <Sf, f> - A(f) */
};

/**
 * @brief Penalty weights of the boundary-reduced objective.
 *
 * `mu` weighs the squared area deficit; `alpha[i]` weighs the hinge on the
 * signed sector area of boundary pair (i-1, i). An empty `alpha` means all
 * zero.
 */
struct PenaltyState {
    double mu = 0.0;
    Eigen::VectorXd alpha;
    ObjectiveVariant variant = ObjectiveVariant::subtract_true_area;
};

/// Cyclic operators on boundary-ordered data.
namespace cyclic
{
/// (D1 y)_i = y_{i+1}, wrapping at the end.
Eigen::MatrixXd shift_forward(const Eigen::MatrixXd& y);
/// (D2 y)_i = y_{i+1} - y_{i-1}, wrapping at both ends. Skew-symmetric.
Eigen::MatrixXd central_difference(const Eigen::MatrixXd& y);
/// Right multiplication by Theta = [[0, -1], [1, 0]]: row (x, y) -> (y, -x).
Eigen::MatrixX2d rotate(const Eigen::MatrixX2d& f);
}  // namespace cyclic

/// Signed area of the boundary polygon: 1/4 <f, D2 f Theta>. Requires at least 3 rows.
double polygon_area(const Eigen::MatrixX2d& boundary);

/// sigma_i = 1/2 (x_{i-1} y_i - x_i y_{i-1}) = 1/2 sin(t_i - t_{i-1}) on the circle.
Eigen::VectorXd sector_terms(const Eigen::MatrixX2d& boundary);

/// Sum of unsigned image-triangle areas.
double triangulation_area(const Eigen::MatrixX2d& f, const Eigen::MatrixX3i& faces);
/// Sum of signed image-triangle areas (positive for counter-clockwise faces).
double signed_triangulation_area(const Eigen::MatrixX2d& f, const Eigen::MatrixX3i& faces);

/// 1/2 <L f, f> for a full embedding.
double dirichlet_energy(const SparseMatrix& laplacian, const Eigen::MatrixX2d& f);

/// 1/2 <S f_B, f_B> - pi. Equals the Dirichlet energy minus pi for the harmonic extension.
double conformal_energy(const BlockSystem& system, const Eigen::MatrixX2d& boundary);

/// pi - A, the signed area deviation. Negative means over-covered area.
inline double signed_area_deviation(double area) { return pi - area; }
/// 1/2 (pi - A)^2, the penalty form of the area deviation.
inline double area_penalty(double area)
{
    const double d = pi - area;
    return 0.5 * d * d;
}

/// Largest area of an n-gon inscribed in the unit circle, (n/2) sin(2 pi / n).
double inscribed_polygon_area(int n);

/**
 * @brief Boundary-reduced penalized objective
 *
 *   1/2 <S f, f> - pi + (mu/2)(pi - A(f))^2 + sum_i alpha_i max(-sigma_i, 0)
 *
 * with "- pi" replaced by "- A(f)" for ObjectiveVariant::subtract_polygon_area.
 */
double penalized_objective(const Eigen::MatrixX2d& boundary, const BlockSystem& system,
                           const PenaltyState& penalty);

/// Euclidean gradient of penalized_objective (hinge subgradient 0 at sigma_i = 0).
Eigen::MatrixX2d euclidean_gradient(const Eigen::MatrixX2d& boundary, const BlockSystem& system,
                                    const PenaltyState& penalty);

/// Removes the radial component of each row: g_i - (g_i . f_i) f_i.
Eigen::MatrixX2d project_to_tangent(const Eigen::MatrixX2d& g, const Eigen::MatrixX2d& f);

/// Euclidean gradient projected onto the tangent lines of the unit circles.
Eigen::MatrixX2d objective_gradient(const Eigen::MatrixX2d& boundary, const BlockSystem& system,
                                    const PenaltyState& penalty);

struct KktResidual {
    /// max_i || g_i - lambda_i f_i || over boundary rows.
    double stationarity = 0.0;
    /// max row norm of L_IB f_B + L_II f_I (zero for a harmonic interior).
    double interior = 0.0;
    /// lambda_i = g_i . f_i
    Eigen::VectorXd multipliers;
};

/**
 * @brief First-order optimality residual of a full embedding.
 *
 * Uses the full blocks, so the boundary gradient is
 * L_BB f_B + L_BI f_I - mu (pi - A) 1/2 D2 f_B Theta (+ hinge terms).
 */
KktResidual kkt_residual(const Eigen::MatrixX2d& full, const BlockSystem& system,
                         const PenaltyState& penalty);

}  // namespace sdmce
