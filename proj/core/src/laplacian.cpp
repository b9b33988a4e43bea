#include "sdmce/laplacian.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <Eigen/Geometry>
#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>

#include "sdmce/errors.hpp"
#include "sdmce/logging.hpp"

namespace sdmce
{

SparseMatrix build_laplacian(const TriMesh& mesh)
{
    const auto& V = mesh.vertices();
    const auto& F = mesh.faces();
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(F.rows()) * 12);

    for (Eigen::Index f = 0; f < F.rows(); ++f) {
        const Eigen::Vector3d p[3] = {V.row(F(f, 0)).transpose(), V.row(F(f, 1)).transpose(),
                                      V.row(F(f, 2)).transpose()};
        double longest = 0.0;
        for (int c = 0; c < 3; ++c) {
            longest = std::max(longest, (p[(c + 1) % 3] - p[c]).squaredNorm());
        }
        const double twice_area = (p[1] - p[0]).cross(p[2] - p[0]).norm();
        if (!(twice_area > 1e-14 * longest)) {
            throw DegenerateFaceError(static_cast<int>(f));
        }
        // Corner c is opposite edge (c+1, c+2).
        for (int c = 0; c < 3; ++c) {
            const Eigen::Vector3d a = p[(c + 1) % 3] - p[c];
            const Eigen::Vector3d b = p[(c + 2) % 3] - p[c];
            const double half_cot = 0.5 * a.dot(b) / twice_area;
            const int i = F(f, (c + 1) % 3);
            const int j = F(f, (c + 2) % 3);
            triplets.emplace_back(i, j, -half_cot);
            triplets.emplace_back(j, i, -half_cot);
            triplets.emplace_back(i, i, half_cot);
            triplets.emplace_back(j, j, half_cot);
        }
    }
    SparseMatrix L(mesh.vertex_count(), mesh.vertex_count());
    L.setFromTriplets(triplets.begin(), triplets.end());
    L.makeCompressed();
    return L;
}

struct BlockSystem::Factor {
    Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt;
};

BlockSystem::~BlockSystem() = default;
BlockSystem::BlockSystem(BlockSystem&&) noexcept = default;
BlockSystem& BlockSystem::operator=(BlockSystem&&) noexcept = default;

BlockSystem::BlockSystem(const SparseMatrix& laplacian, std::span<const int> boundary,
                         SchurMode mode)
    : mode_(mode), boundary_(boundary.begin(), boundary.end()), laplacian_(laplacian)
{
    const auto n = static_cast<int>(laplacian.rows());
    if (laplacian.cols() != n) {
        throw std::invalid_argument("Laplacian must be square");
    }
    // local index: >= 0 boundary position, < 0 encodes -(interior position) - 1
    std::vector<int> local(n, 0);
    std::vector<bool> on_boundary(n, false);
    for (std::size_t i = 0; i < boundary_.size(); ++i) {
        const int v = boundary_[i];
        if (v < 0 || v >= n || on_boundary[v]) {
            throw std::invalid_argument("boundary index list is not a set of valid vertices");
        }
        on_boundary[v] = true;
        local[v] = static_cast<int>(i);
    }
    for (int v = 0; v < n; ++v) {
        if (!on_boundary[v]) {
            local[v] = -static_cast<int>(interior_.size()) - 1;
            interior_.push_back(v);
        }
    }

    const auto nb = static_cast<int>(boundary_.size());
    const auto ni = static_cast<int>(interior_.size());
    std::vector<Eigen::Triplet<double>> bb, bi, ib, ii;
    for (int col = 0; col < laplacian.outerSize(); ++col) {
        for (SparseMatrix::InnerIterator it(laplacian, col); it; ++it) {
            const int r = static_cast<int>(it.row());
            const int c = static_cast<int>(it.col());
            const bool rb = on_boundary[r];
            const bool cb = on_boundary[c];
            const int lr = rb ? local[r] : -local[r] - 1;
            const int lc = cb ? local[c] : -local[c] - 1;
            auto& target = rb ? (cb ? bb : bi) : (cb ? ib : ii);
            target.emplace_back(lr, lc, it.value());
        }
    }
    l_bb_.resize(nb, nb);
    l_bb_.setFromTriplets(bb.begin(), bb.end());
    l_bi_.resize(nb, ni);
    l_bi_.setFromTriplets(bi.begin(), bi.end());
    l_ib_.resize(ni, nb);
    l_ib_.setFromTriplets(ib.begin(), ib.end());
    l_ii_.resize(ni, ni);
    l_ii_.setFromTriplets(ii.begin(), ii.end());

    if (ni > 0) {
        factor_ = std::make_unique<Factor>();
        factor_->ldlt.compute(l_ii_);
        if (factor_->ldlt.info() != Eigen::Success) {
            throw SingularInteriorError("factorization of the interior block failed",
                                        std::numeric_limits<double>::infinity());
        }
        const Eigen::VectorXd d = factor_->ldlt.vectorD();
        const double dmax = d.cwiseAbs().maxCoeff();
        const double dmin = d.minCoeff();
        condition_ = dmin > 0 ? dmax / dmin : std::numeric_limits<double>::infinity();
        if (!(dmin > 1e-14 * dmax)) {
            std::ostringstream ss;
            ss << "interior block is singular or indefinite (pivot ratio " << condition_ << ")";
            throw SingularInteriorError(ss.str(), condition_);
        }
        std::ostringstream ss;
        ss << "interior block " << ni << "x" << ni << ", pivot ratio " << condition_;
        log::debug(ss.str());
    }

    if (mode_ == SchurMode::explicit_dense) {
        Eigen::MatrixXd s = Eigen::MatrixXd(l_bb_);
        if (ni > 0) {
            const Eigen::MatrixXd rhs = Eigen::MatrixXd(l_ib_);
            const Eigen::MatrixXd h = factor_->ldlt.solve(rhs);
            s -= l_bi_ * h;
        }
        schur_ = 0.5 * (s + s.transpose());
    }
}

Eigen::MatrixXd BlockSystem::apply_schur(const Eigen::MatrixXd& x) const
{
    if (mode_ == SchurMode::explicit_dense) {
        return schur_ * x;
    }
    Eigen::MatrixXd out = l_bb_ * x;
    if (!interior_.empty()) {
        const Eigen::MatrixXd rhs = l_ib_ * x;
        const Eigen::MatrixXd h = factor_->ldlt.solve(rhs);
        out -= l_bi_ * h;
    }
    return out;
}

Eigen::MatrixXd BlockSystem::schur_matrix() const
{
    if (mode_ == SchurMode::explicit_dense) {
        return schur_;
    }
    const Eigen::MatrixXd s = apply_schur(Eigen::MatrixXd::Identity(boundary_size(), boundary_size()));
    return 0.5 * (s + s.transpose());
}

Eigen::MatrixXd BlockSystem::solve_interior(const Eigen::MatrixXd& boundary_values) const
{
    if (boundary_values.rows() != boundary_size()) {
        throw std::invalid_argument("boundary data has the wrong number of rows");
    }
    if (interior_.empty()) {
        return Eigen::MatrixXd(0, boundary_values.cols());
    }
    const Eigen::MatrixXd rhs = -(l_ib_ * boundary_values);
    return factor_->ldlt.solve(rhs);
}

Eigen::MatrixXd BlockSystem::extend(const Eigen::MatrixXd& boundary_values) const
{
    const Eigen::MatrixXd inner = solve_interior(boundary_values);
    Eigen::MatrixXd full(boundary_size() + interior_size(), boundary_values.cols());
    for (int i = 0; i < boundary_size(); ++i) {
        full.row(boundary_[i]) = boundary_values.row(i);
    }
    for (int i = 0; i < interior_size(); ++i) {
        full.row(interior_[i]) = inner.row(i);
    }
    return full;
}

namespace
{
void write_entries(std::ofstream& out, const SparseMatrix& m)
{
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
    out << std::setprecision(17);
    for (int col = 0; col < m.outerSize(); ++col) {
        for (SparseMatrix::InnerIterator it(m, col); it; ++it) {
            out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
        }
    }
}
}  // namespace

void write_matrix_market(const SparseMatrix& m, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    write_entries(out, m);
    if (!out.good()) {
        throw IoError("write failure on " + path.string());
    }
}

void write_matrix_market(const Eigen::MatrixXd& m, const std::filesystem::path& path)
{
    write_matrix_market(SparseMatrix(m.sparseView(0.0, 0.0)), path);
}

}  // namespace sdmce
