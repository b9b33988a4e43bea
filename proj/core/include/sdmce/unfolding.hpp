#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "sdmce/disk_energy.hpp"
#include "sdmce/errors.hpp"
#include "sdmce/laplacian.hpp"
#include "sdmce/mesh_io.hpp"

namespace sdmce
{

/**
 * @brief Foldings of a disk embedding by category.
 *
 * A boundary triangle is a face owning a boundary edge (j, k); its third
 * vertex is "beyond the chord" when its image lies on the far side of the
 * line f_j f_k from the origin.
 *
 *  - kind1: edge in order, third vertex beyond the chord (negative area)
 *  - kind2: edge folded, third vertex on the disk side (negative area)
 *  - kind3: edge folded, third vertex beyond the chord (positive area)
 *
 * Interior triangles are the faces without a boundary edge; they are folded
 * when their signed image area is negative.
 */
struct FoldingReport {
    /// Loop positions i whose pair (i-1, i) has a negative sector term.
    std::vector<int> folded_boundary_vertices;
    std::vector<int> folded_interior_triangles;
    std::vector<int> folded_boundary_triangles_kind1;
    std::vector<int> folded_boundary_triangles_kind2;
    std::vector<int> folded_boundary_triangles_kind3;

    int folded_triangle_count() const noexcept
    {
        return static_cast<int>(folded_interior_triangles.size() +
                                folded_boundary_triangles_kind1.size() +
                                folded_boundary_triangles_kind2.size() +
                                folded_boundary_triangles_kind3.size());
    }
    bool clean() const noexcept
    {
        return folded_boundary_vertices.empty() && folded_triangle_count() == 0;
    }
};

/// Classifies the foldings of the full V x 2 embedding `f`.
FoldingReport classify_folding(const TriMesh& mesh, const Eigen::MatrixX2d& f);

/// Twice the signed image area of face `face`, det([f_j - f_i, f_k - f_i]).
double signed_face_area2(const TriMesh& mesh, const Eigen::MatrixX2d& f, int face);

/// Number of (face, vertex) pairs where a foreign vertex lies strictly inside a face image.
int count_injectivity_violations(const TriMesh& mesh, const Eigen::MatrixX2d& f,
                                 double eps = 1e-14);

/// Simplex weights that best reproduce a point from its neighbours.
struct ConvexWeights {
    Eigen::VectorXd w;
    double residual = 0.0;
};

/**
 * @brief min || v - sum_l w_l n_l || over the probability simplex.
 *
 * Active-set method on the normal equations; rank-deficient supports are
 * handled with a complete orthogonal decomposition. `neighbors` holds one
 * point per row. Throws std::invalid_argument when it is empty.
 */
ConvexWeights convex_weights(const Eigen::Vector3d& v, const Eigen::MatrixX3d& neighbors);

/// Lazily computed convex weights of each vertex over its sorted one-ring in 3D.
class WeightCache
{
public:
    explicit WeightCache(const TriMesh& mesh);
    const ConvexWeights& get(int v);

private:
    const TriMesh* mesh_;
    std::vector<std::optional<ConvexWeights>> cache_;
};

/// Loop position of the boundary edge owned by `face` and its third vertex, if any.
struct BoundaryEdge {
    int j = -1;      ///< edge start vertex
    int k = -1;      ///< edge end vertex (follows j in the loop)
    int apex = -1;   ///< remaining vertex of the face
    int position = -1;  ///< loop position of k
};
std::optional<BoundaryEdge> boundary_edge_of(const TriMesh& mesh, int face);

/**
 * @brief Moves the apex of a boundary triangle to the convex combination of its one-ring.
 *
 * Returns false (leaving f unchanged) if the apex is itself a boundary vertex.
 */
bool repair_boundary_triangle(const TriMesh& mesh, Eigen::MatrixX2d& f, int face,
                              WeightCache& weights);

/**
 * @brief Joint update of the three vertices of a folded interior triangle.
 *
 * Solves M (f_i; f_j; f_k) = (w_i' F_i'; w_j' F_j'; w_k' F_k') where M carries
 * the mutual weights. Boundary vertices of the face keep their position.
 * Throws SingularUpdateError when |det M| < 1e-12.
 */
void repair_interior_triangle(const TriMesh& mesh, Eigen::MatrixX2d& f, int face,
                              WeightCache& weights);

/// The 3 x 3 matrix of the interior-triangle update for `face`, with boundary rows replaced by identity rows.
Eigen::Matrix3d interior_update_matrix(const TriMesh& mesh, int face, WeightCache& weights);

/// Closed-form inverse of a 3 x 3 matrix via the adjugate. Throws SingularUpdateError(face) for |det| < min_det.
Eigen::Matrix3d inverse3(const Eigen::Matrix3d& m, int face = -1, double min_det = 1e-12);

/// Re-solves the boundary problem for a penalty state, warm-started from `start` (|B| x 2).
using PenalizedSolver =
    std::function<Eigen::MatrixX2d(const PenaltyState& state, const Eigen::MatrixX2d& start)>;

struct BoundaryRepair {
    Eigen::MatrixX2d boundary;
    Eigen::VectorXd alpha;
    int rounds = 0;
};

/**
 * @brief Raises the hinge weight of every folded boundary pair and re-solves until none remain.
 *
 * Returns after zero solves when nothing is folded. Throws RepairStall after
 * `max_rounds` rounds with foldings left.
 */
BoundaryRepair repair_boundary_vertices(const PenaltyState& state, const Eigen::MatrixX2d& boundary,
                                        const PenalizedSolver& solver, double delta,
                                        int max_rounds = 100);

struct RepairConfig {
    enum class DeltaRule { boundary_over_interior, boundary_over_faces };
    DeltaRule delta_rule = DeltaRule::boundary_over_interior;
    /// Overrides the rule when positive.
    double delta = 0.0;
    int boundary_rounds = 100;
    int triangle_passes = 20;
};

struct RepairOutcome {
    Eigen::MatrixX2d points;
    PenaltyState penalty;
    /// Classification before repair and after each of the three stages.
    std::vector<FoldingReport> history;
    int boundary_rounds = 0;
    int boundary_triangle_passes = 0;
    int interior_passes = 0;
    /// Interior updates that fell back to single-vertex moves.
    int singular_fallbacks = 0;
    bool clean = false;
};

/** @brief A repair loop hit its cap with foldings left. Carries the partial outcome. */
class RepairStall : public Error
{
public:
    RepairStall(const std::string& msg, RepairOutcome partial)
        : Error(msg), partial_(std::move(partial))
    {
    }
    const RepairOutcome& partial() const noexcept { return partial_; }

private:
    RepairOutcome partial_;
};

/**
 * @brief Full folding repair of a converged solution.
 *
 * Boundary pairs first (hinge penalty and re-solve, interior re-extended
 * harmonically), then kind1 boundary triangles, then interior triangles.
 * Throws RepairStall if any stage exceeds its cap or foldings remain.
 */
RepairOutcome repair_all(const TriMesh& mesh, const BlockSystem& system, const Eigen::MatrixX2d& f,
                         const PenaltyState& state, const PenalizedSolver& solver,
                         const RepairConfig& config = {});

}  // namespace sdmce
