#pragma once

#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "sdmce/mesh_io.hpp"

namespace sdmce
{

using SparseMatrix = Eigen::SparseMatrix<double>;

/**
 * @brief Cotangent Laplacian of a triangle mesh.
 *
 * Off-diagonal entries are -w_ij with w_ij = (cot a_ij + cot b_ij) / 2 over
 * the angles opposite edge (i, j); diagonal entries are the row sums of the
 * weights, so 1/2 <Lf, f> is the Dirichlet energy of the piecewise-linear
 * map f. Throws DegenerateFaceError for a zero-area face.
 */
SparseMatrix build_laplacian(const TriMesh& mesh);

enum class SchurMode {
    explicit_dense, /**< form S once as a dense |B|x|B| matrix */
    implicit        /**< apply S on demand through one interior solve */
};

/**
 * @brief Boundary/interior block partition of a Laplacian.
 *
 * Holds the four blocks L_BB, L_BI, L_IB, L_II (B = boundary loop in loop
 * order, I = the remaining vertices in increasing order), a sparse LDLT
 * factorization of L_II with an AMD ordering, and, in explicit mode, the
 * dense Schur complement S = L_BB - L_BI L_II^{-1} L_IB.
 *
 * Immutable after construction; safe to share read-only between threads.
 */
class BlockSystem
{
public:
    BlockSystem(const SparseMatrix& laplacian, std::span<const int> boundary,
                SchurMode mode = SchurMode::explicit_dense);
    ~BlockSystem();
    BlockSystem(BlockSystem&&) noexcept;
    BlockSystem& operator=(BlockSystem&&) noexcept;

    SchurMode mode() const noexcept { return mode_; }
    int boundary_size() const noexcept { return static_cast<int>(boundary_.size()); }
    int interior_size() const noexcept { return static_cast<int>(interior_.size()); }
    const std::vector<int>& boundary() const noexcept { return boundary_; }
    const std::vector<int>& interior() const noexcept { return interior_; }

    const SparseMatrix& laplacian() const noexcept { return laplacian_; }
    const SparseMatrix& boundary_block() const noexcept { return l_bb_; }
    const SparseMatrix& boundary_interior_block() const noexcept { return l_bi_; }
    const SparseMatrix& interior_boundary_block() const noexcept { return l_ib_; }
    const SparseMatrix& interior_block() const noexcept { return l_ii_; }

    /// S x for a |B| x k block of boundary data.
    Eigen::MatrixXd apply_schur(const Eigen::MatrixXd& x) const;

    /// Dense S. Explicit mode returns the stored matrix; implicit mode assembles it column by column.
    Eigen::MatrixXd schur_matrix() const;

    /// Harmonic extension: the interior rows solving L_IB f_B + L_II f_I = 0.
    Eigen::MatrixXd solve_interior(const Eigen::MatrixXd& boundary_values) const;

    /// Full V x k matrix with boundary rows from `boundary_values` and harmonic interior.
    Eigen::MatrixXd extend(const Eigen::MatrixXd& boundary_values) const;

    /// Ratio of the extreme LDLT pivots of L_II; a cheap conditioning indicator.
    double condition_estimate() const noexcept { return condition_; }

private:
    struct Factor;

    SchurMode mode_;
    std::vector<int> boundary_;
    std::vector<int> interior_;
    SparseMatrix laplacian_;
    SparseMatrix l_bb_;
    SparseMatrix l_bi_;
    SparseMatrix l_ib_;
    SparseMatrix l_ii_;
    std::unique_ptr<Factor> factor_;
    Eigen::MatrixXd schur_;
    double condition_ = 1.0;
};

/// MatrixMarket coordinate dump (general, real). Throws IoError.
void write_matrix_market(const SparseMatrix& m, const std::filesystem::path& path);
void write_matrix_market(const Eigen::MatrixXd& m, const std::filesystem::path& path);

}  // namespace sdmce
