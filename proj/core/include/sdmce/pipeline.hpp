#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "sdmce/adaptive_mu.hpp"
#include "sdmce/disk_energy.hpp"
#include "sdmce/laplacian.hpp"
#include "sdmce/metrics.hpp"
#include "sdmce/optimizer.hpp"
#include "sdmce/unfolding.hpp"

namespace sdmce
{

/**
 * @brief Boundary solves on one mesh: Laplacian, block system and NCG settings.
 *
 * Every solve is recorded with its penalty and trace so that the trace of a
 * chosen probe can be exported afterwards.
 */
class DiskSolver
{
public:
    DiskSolver(const TriMesh& mesh, SchurMode mode, NcgConfig ncg,
               ObjectiveVariant variant = ObjectiveVariant::subtract_true_area);

    const TriMesh& mesh() const noexcept { return *mesh_; }
    const SparseMatrix& laplacian() const noexcept { return laplacian_; }
    const BlockSystem& system() const noexcept { return system_; }
    ObjectiveVariant variant() const noexcept { return variant_; }

    /// Minimizes the penalized objective from `start` (|B| x 2 unit rows).
    NcgResult solve(const PenaltyState& penalty, const Eigen::MatrixX2d& start);

    /// Tuner probe: solve at `mu` from the given angles, extend harmonically and measure.
    ProbeResult probe(double mu, const Eigen::VectorXd& start_angles);

    const std::vector<std::pair<double, SolveTrace>>& traces() const noexcept { return traces_; }

private:
    const TriMesh* mesh_;
    SparseMatrix laplacian_;
    BlockSystem system_;
    NcgConfig ncg_;
    ObjectiveVariant variant_;
    std::vector<std::pair<double, SolveTrace>> traces_;
};

struct RunConfig {
    /// Fixed penalty; empty selects the adaptive tuner.
    std::optional<double> mu;
    ObjectiveVariant variant = ObjectiveVariant::subtract_true_area;
    BoundaryInit init;
    double tau = 1e-4;
    NcgConfig ncg;
    SchurMode schur = SchurMode::explicit_dense;
    bool repair = true;
    RepairConfig repair_config;
    /**
     * Relax the tuner's energy gate by pi minus the area of the regular
     * |B|-gon, the least deficit any map with |B| boundary points on the
     * circle can have.
     */
    bool polygon_energy_gate = true;
};

struct RunResult {
    Eigen::MatrixX2d points;
    double mu = 0.0;
    PenaltyState penalty;
    std::vector<MuProbe> history;
    SolveTrace trace;
    std::optional<RepairOutcome> repair;
    bool repair_stalled = false;
    std::string stall_message;
    KktResidual kkt;
    QualityReport report;
    double solve_seconds = 0.0;
};

/**
 * @brief Full run: initial boundary, tuned or fixed penalty solve, harmonic
 * interior, folding repair and metrics.
 *
 * Solver errors propagate. A repair stall is not thrown; it is flagged on the
 * result, which then carries the partial repair.
 */
RunResult parameterize(const TriMesh& mesh, const RunConfig& config);

}  // namespace sdmce
