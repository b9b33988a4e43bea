#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace sdmce
{

/**
 * @brief Settings of the nonlinear conjugate gradient solver on products of circles.
 *
 * `restart_period` of 0 means one restart every |B| iterations.
 */
struct NcgConfig {
    int max_iterations = 2000;
    double gradient_tolerance = 1e-6;
    double contraction = 0.5;
    double sufficient_decrease = 1e-4;
    double initial_step = 1.0;
    int max_backtracks = 50;
    int restart_period = 0;
    /// Largest row displacement allowed for a trial step before retraction.
    double max_row_step = 0.5;

    void validate() const;
};

enum class Termination { converged, max_iterations, line_search_failure };

std::string to_string(Termination t);

struct TraceRow {
    int iteration = 0;
    double objective = 0.0;
    double grad_norm = 0.0;
    double step = 0.0;
    bool restart = false;
};

struct SolveTrace {
    std::vector<TraceRow> rows;
    Termination termination = Termination::max_iterations;

    int iterations() const noexcept { return rows.empty() ? 0 : rows.back().iteration; }
    /// Columns: iteration,objective,grad_norm,step,restart
    void write_csv(std::ostream& out) const;
};

/// Objective and its Euclidean gradient, both taking |B| x 2 unit rows.
struct ObjectivePair {
    std::function<double(const Eigen::MatrixX2d&)> value;
    std::function<Eigen::MatrixX2d(const Eigen::MatrixX2d&)> gradient;
};

struct NcgResult {
    Eigen::MatrixX2d points;
    SolveTrace trace;
    double objective = 0.0;
    double grad_norm = 0.0;
};

/**
 * @brief Minimizes an objective over rows constrained to the unit circle.
 *
 * Polak-Ribiere-plus conjugate gradient with tangent projection of the
 * gradient and the transported direction, Armijo backtracking and row
 * normalization as retraction. Stops when the max row norm of the projected
 * gradient drops below the tolerance. A failed line search ends the run with
 * Termination::line_search_failure and the last accepted iterate.
 *
 * Throws std::invalid_argument if a start row is not unit to 1e-12.
 */
NcgResult minimize_on_circles(const ObjectivePair& objective, const Eigen::MatrixX2d& start,
                              const NcgConfig& config = {});

/// PR+ direction -g_new + beta d_old; falls back to -g_new if that is not a descent direction.
Eigen::MatrixX2d ncg_direction(const Eigen::MatrixX2d& gradient_new,
                               const Eigen::MatrixX2d& gradient_old,
                               const Eigen::MatrixX2d& direction_old);

/// Max row norm.
double max_row_norm(const Eigen::MatrixX2d& m);

}  // namespace sdmce
