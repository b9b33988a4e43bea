#include "sdmce/unfolding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "sdmce/logging.hpp"

namespace sdmce
{

namespace
{

double cross2(const Eigen::RowVector2d& a, const Eigen::RowVector2d& b)
{
    return a(0) * b(1) - a(1) * b(0);
}

}  // namespace

double signed_face_area2(const TriMesh& mesh, const Eigen::MatrixX2d& f, int face)
{
    const auto& F = mesh.faces();
    const Eigen::RowVector2d a = f.row(F(face, 0));
    return cross2(f.row(F(face, 1)) - a, f.row(F(face, 2)) - a);
}

std::optional<BoundaryEdge> boundary_edge_of(const TriMesh& mesh, int face)
{
    const auto& loop = mesh.boundary_loop();
    const auto n = static_cast<int>(loop.size());
    const auto& F = mesh.faces();
    for (int c = 0; c < 3; ++c) {
        const int j = F(face, c);
        const int k = F(face, (c + 1) % 3);
        const int pj = mesh.boundary_position(j);
        if (pj < 0 || !mesh.is_boundary(k)) {
            continue;
        }
        if (loop[(pj + 1) % n] == k) {
            return BoundaryEdge{j, k, F(face, (c + 2) % 3), (pj + 1) % n};
        }
    }
    return std::nullopt;
}

FoldingReport classify_folding(const TriMesh& mesh, const Eigen::MatrixX2d& f)
{
    if (f.rows() != mesh.vertex_count()) {
        throw std::invalid_argument("embedding has the wrong number of rows");
    }
    FoldingReport rep;
    const auto& loop = mesh.boundary_loop();
    const Eigen::VectorXd sigma = sector_terms(boundary_rows(f, loop));
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
        if (sigma(i) < 0) {
            rep.folded_boundary_vertices.push_back(static_cast<int>(i));
        }
    }

    for (int face = 0; face < mesh.face_count(); ++face) {
        const double area2 = signed_face_area2(mesh, f, face);
        const auto edge = boundary_edge_of(mesh, face);
        if (!edge) {
            if (area2 < 0) {
                rep.folded_interior_triangles.push_back(face);
            }
            continue;
        }
        const bool edge_folded = sigma(edge->position) < 0;
        const Eigen::RowVector2d fj = f.row(edge->j);
        const Eigen::RowVector2d chord = f.row(edge->k) - fj;
        const double side_apex = cross2(chord, f.row(edge->apex) - fj);
        const double side_origin = cross2(chord, -fj);
        bool beyond = false;
        if (std::abs(side_origin) > 1e-14) {
            beyond = side_apex * side_origin < 0;
        } else {
            // chord through the origin: fall back on the orientation the edge implies
            beyond = edge_folded ? area2 > 0 : area2 < 0;
        }
        if (!edge_folded && beyond) {
            rep.folded_boundary_triangles_kind1.push_back(face);
        } else if (edge_folded && !beyond) {
            rep.folded_boundary_triangles_kind2.push_back(face);
        } else if (edge_folded && beyond) {
            rep.folded_boundary_triangles_kind3.push_back(face);
        }
    }
    return rep;
}

int count_injectivity_violations(const TriMesh& mesh, const Eigen::MatrixX2d& f, double eps)
{
    const int nv = mesh.vertex_count();
    if (nv == 0) {
        return 0;
    }
    const Eigen::RowVector2d lo = f.colwise().minCoeff();
    const Eigen::RowVector2d hi = f.colwise().maxCoeff();
    const int cells = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(nv))));
    const Eigen::RowVector2d span = (hi - lo).cwiseMax(1e-300);
    auto cell_of = [&](double x, double lo_, double span_) {
        return std::clamp(static_cast<int>((x - lo_) / span_ * cells), 0, cells - 1);
    };
    std::vector<std::vector<int>> grid(static_cast<std::size_t>(cells) * cells);
    for (int v = 0; v < nv; ++v) {
        const int cx = cell_of(f(v, 0), lo(0), span(0));
        const int cy = cell_of(f(v, 1), lo(1), span(1));
        grid[static_cast<std::size_t>(cy) * cells + cx].push_back(v);
    }

    const auto& F = mesh.faces();
    int violations = 0;
    for (int face = 0; face < mesh.face_count(); ++face) {
        const int ids[3] = {F(face, 0), F(face, 1), F(face, 2)};
        Eigen::RowVector2d p[3];
        for (int c = 0; c < 3; ++c) {
            p[c] = f.row(ids[c]);
        }
        const Eigen::RowVector2d bmin = p[0].cwiseMin(p[1]).cwiseMin(p[2]);
        const Eigen::RowVector2d bmax = p[0].cwiseMax(p[1]).cwiseMax(p[2]);
        const int x0 = cell_of(bmin(0), lo(0), span(0));
        const int x1 = cell_of(bmax(0), lo(0), span(0));
        const int y0 = cell_of(bmin(1), lo(1), span(1));
        const int y1 = cell_of(bmax(1), lo(1), span(1));
        for (int cy = y0; cy <= y1; ++cy) {
            for (int cx = x0; cx <= x1; ++cx) {
                for (int v : grid[static_cast<std::size_t>(cy) * cells + cx]) {
                    if (v == ids[0] || v == ids[1] || v == ids[2]) {
                        continue;
                    }
                    const Eigen::RowVector2d q = f.row(v);
                    const double o0 = cross2(p[1] - p[0], q - p[0]);
                    const double o1 = cross2(p[2] - p[1], q - p[1]);
                    const double o2 = cross2(p[0] - p[2], q - p[2]);
                    if ((o0 > eps && o1 > eps && o2 > eps) ||
                        (o0 < -eps && o1 < -eps && o2 < -eps)) {
                        ++violations;
                    }
                }
            }
        }
    }
    return violations;
}

ConvexWeights convex_weights(const Eigen::Vector3d& v, const Eigen::MatrixX3d& neighbors)
{
    const auto m = static_cast<int>(neighbors.rows());
    if (m == 0) {
        throw std::invalid_argument("convex_weights needs at least one neighbour");
    }
    const Eigen::MatrixXd N = neighbors.transpose();
    const Eigen::MatrixXd Q = N.transpose() * N;
    const Eigen::VectorXd c = N.transpose() * v;
    const double tol = 1e-13 * (1.0 + Q.cwiseAbs().maxCoeff());

    Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
    int nearest = 0;
    (neighbors.rowwise() - v.transpose()).rowwise().squaredNorm().minCoeff(&nearest);
    w(nearest) = 1.0;
    std::vector<bool> free(m, false);
    free[nearest] = true;

    for (int iter = 0; iter < 50 * m + 50; ++iter) {
        std::vector<int> P;
        for (int i = 0; i < m; ++i) {
            if (free[i]) {
                P.push_back(i);
            }
        }
        const auto p = static_cast<int>(P.size());
        Eigen::MatrixXd K = Eigen::MatrixXd::Zero(p + 1, p + 1);
        Eigen::VectorXd rhs(p + 1);
        for (int a = 0; a < p; ++a) {
            for (int b = 0; b < p; ++b) {
                K(a, b) = Q(P[a], P[b]);
            }
            K(a, p) = 1.0;
            K(p, a) = 1.0;
            rhs(a) = c(P[a]);
        }
        rhs(p) = 1.0;
        const Eigen::VectorXd sol = K.completeOrthogonalDecomposition().solve(rhs);

        bool feasible = true;
        for (int a = 0; a < p; ++a) {
            if (sol(a) < -1e-15) {
                feasible = false;
                break;
            }
        }
        if (feasible) {
            w.setZero();
            for (int a = 0; a < p; ++a) {
                w(P[a]) = std::max(0.0, sol(a));
            }
            w /= w.sum();
            const Eigen::VectorXd g = Q * w - c;
            double lambda = 0.0;
            for (int a = 0; a < p; ++a) {
                lambda -= g(P[a]);
            }
            lambda /= p;
            int enter = -1;
            double worst = -tol;
            for (int i = 0; i < m; ++i) {
                if (!free[i] && g(i) + lambda < worst) {
                    worst = g(i) + lambda;
                    enter = i;
                }
            }
            if (enter < 0) {
                break;
            }
            free[enter] = true;
            continue;
        }

        // Step toward the subproblem solution until a weight hits zero.
        double alpha = 1.0;
        for (int a = 0; a < p; ++a) {
            const double wi = w(P[a]);
            if (sol(a) < 0 && wi - sol(a) > 0) {
                alpha = std::min(alpha, wi / (wi - sol(a)));
            }
        }
        for (int a = 0; a < p; ++a) {
            w(P[a]) += alpha * (sol(a) - w(P[a]));
        }
        bool dropped = false;
        for (int a = 0; a < p; ++a) {
            if (w(P[a]) <= 1e-15 && p > 1) {
                w(P[a]) = 0.0;
                free[P[a]] = false;
                dropped = true;
            }
        }
        if (!dropped) {
            break;
        }
        w = w.cwiseMax(0.0);
        w /= w.sum();
    }

    ConvexWeights out;
    out.w = std::move(w);
    out.residual = (v - N * out.w).norm();
    return out;
}

WeightCache::WeightCache(const TriMesh& mesh) : mesh_(&mesh), cache_(mesh.vertex_count()) {}

const ConvexWeights& WeightCache::get(int v)
{
    auto& slot = cache_[v];
    if (!slot) {
        const auto ring = mesh_->neighbors(v);
        Eigen::MatrixX3d nb(static_cast<Eigen::Index>(ring.size()), 3);
        for (std::size_t l = 0; l < ring.size(); ++l) {
            nb.row(static_cast<Eigen::Index>(l)) = mesh_->vertices().row(ring[l]);
        }
        slot = convex_weights(mesh_->vertex(v), nb);
    }
    return *slot;
}

namespace
{

Eigen::RowVector2d ring_combination(const TriMesh& mesh, const Eigen::MatrixX2d& f, int v,
                                    WeightCache& weights)
{
    const auto ring = mesh.neighbors(v);
    const Eigen::VectorXd& w = weights.get(v).w;
    Eigen::RowVector2d out = Eigen::RowVector2d::Zero();
    for (std::size_t l = 0; l < ring.size(); ++l) {
        out += w(static_cast<Eigen::Index>(l)) * f.row(ring[l]);
    }
    return out;
}

}  // namespace

bool repair_boundary_triangle(const TriMesh& mesh, Eigen::MatrixX2d& f, int face,
                              WeightCache& weights)
{
    const auto edge = boundary_edge_of(mesh, face);
    if (!edge || mesh.is_boundary(edge->apex)) {
        return false;
    }
    f.row(edge->apex) = ring_combination(mesh, f, edge->apex, weights);
    return true;
}

Eigen::Matrix3d inverse3(const Eigen::Matrix3d& m, int face, double min_det)
{
    const double c00 = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
    const double c01 = m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2);
    const double c02 = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
    const double det = m(0, 0) * c00 + m(0, 1) * c01 + m(0, 2) * c02;
    if (!(std::abs(det) >= min_det)) {
        throw SingularUpdateError(face, det);
    }
    Eigen::Matrix3d adj;
    adj(0, 0) = c00;
    adj(1, 0) = c01;
    adj(2, 0) = c02;
    adj(0, 1) = m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2);
    adj(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
    adj(2, 1) = m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1);
    adj(0, 2) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
    adj(1, 2) = m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2);
    adj(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    return adj / det;
}

namespace
{

double ring_weight(const TriMesh& mesh, int v, int u, const Eigen::VectorXd& w)
{
    const auto ring = mesh.neighbors(v);
    const auto it = std::lower_bound(ring.begin(), ring.end(), u);
    if (it == ring.end() || *it != u) {
        return 0.0;
    }
    return w(it - ring.begin());
}

}  // namespace

Eigen::Matrix3d interior_update_matrix(const TriMesh& mesh, int face, WeightCache& weights)
{
    const int ids[3] = {mesh.faces()(face, 0), mesh.faces()(face, 1), mesh.faces()(face, 2)};
    Eigen::Matrix3d M = Eigen::Matrix3d::Identity();
    for (int r = 0; r < 3; ++r) {
        if (mesh.is_boundary(ids[r])) {
            continue;
        }
        const Eigen::VectorXd& w = weights.get(ids[r]).w;
        for (int c = 0; c < 3; ++c) {
            if (c != r) {
                M(r, c) = -ring_weight(mesh, ids[r], ids[c], w);
            }
        }
    }
    return M;
}

void repair_interior_triangle(const TriMesh& mesh, Eigen::MatrixX2d& f, int face,
                              WeightCache& weights)
{
    const int ids[3] = {mesh.faces()(face, 0), mesh.faces()(face, 1), mesh.faces()(face, 2)};
    const Eigen::Matrix3d M = interior_update_matrix(mesh, face, weights);
    Eigen::Matrix<double, 3, 2> rhs;
    for (int r = 0; r < 3; ++r) {
        if (mesh.is_boundary(ids[r])) {
            rhs.row(r) = f.row(ids[r]);
            continue;
        }
        const auto ring = mesh.neighbors(ids[r]);
        const Eigen::VectorXd& w = weights.get(ids[r]).w;
        Eigen::RowVector2d acc = Eigen::RowVector2d::Zero();
        for (std::size_t l = 0; l < ring.size(); ++l) {
            const int u = ring[l];
            if (u != ids[0] && u != ids[1] && u != ids[2]) {
                acc += w(static_cast<Eigen::Index>(l)) * f.row(u);
            }
        }
        rhs.row(r) = acc;
    }
    const Eigen::Matrix<double, 3, 2> x = inverse3(M, face) * rhs;
    for (int r = 0; r < 3; ++r) {
        f.row(ids[r]) = x.row(r);
    }
}

BoundaryRepair repair_boundary_vertices(const PenaltyState& state, const Eigen::MatrixX2d& boundary,
                                        const PenalizedSolver& solver, double delta,
                                        int max_rounds)
{
    if (!(delta > 0)) {
        throw std::invalid_argument("penalty increment must be positive");
    }
    BoundaryRepair out;
    out.boundary = boundary;
    out.alpha = state.alpha.size() == boundary.rows()
                    ? state.alpha
                    : Eigen::VectorXd::Zero(boundary.rows());
    PenaltyState current = state;
    for (;;) {
        const Eigen::VectorXd sigma = sector_terms(out.boundary);
        if (!(sigma.array() < 0).any()) {
            return out;
        }
        if (out.rounds >= max_rounds) {
            RepairOutcome partial;
            partial.points = out.boundary;
            partial.penalty = current;
            partial.penalty.alpha = out.alpha;
            partial.boundary_rounds = out.rounds;
            throw RepairStall("boundary pairs still folded after " + std::to_string(out.rounds) +
                                  " rounds",
                              std::move(partial));
        }
        for (Eigen::Index i = 0; i < sigma.size(); ++i) {
            if (sigma(i) < 0) {
                out.alpha(i) += delta;
            }
        }
        current.alpha = out.alpha;
        out.boundary = solver(current, out.boundary);
        ++out.rounds;
    }
}

RepairOutcome repair_all(const TriMesh& mesh, const BlockSystem& system, const Eigen::MatrixX2d& f,
                         const PenaltyState& state, const PenalizedSolver& solver,
                         const RepairConfig& config)
{
    RepairOutcome out;
    out.points = f;
    out.penalty = state;
    FoldingReport rep = classify_folding(mesh, out.points);
    out.history.push_back(rep);

    auto stall = [&](const std::string& msg) {
        out.clean = false;
        throw RepairStall(msg, out);
    };

    if (!rep.folded_boundary_vertices.empty()) {
        double delta = config.delta;
        if (!(delta > 0)) {
            const double nb = static_cast<double>(mesh.boundary_loop().size());
            const double denom =
                config.delta_rule == RepairConfig::DeltaRule::boundary_over_faces
                    ? static_cast<double>(mesh.face_count())
                    : static_cast<double>(std::max<std::size_t>(1, mesh.interior_vertices().size()));
            delta = nb / denom;
        }
        try {
            BoundaryRepair br = repair_boundary_vertices(
                state, boundary_rows(out.points, mesh.boundary_loop()), solver, delta,
                config.boundary_rounds);
            out.points = system.extend(br.boundary);
            out.penalty.alpha = br.alpha;
            out.boundary_rounds = br.rounds;
        } catch (const RepairStall& e) {
            out.points = system.extend(e.partial().points);
            out.penalty = e.partial().penalty;
            out.boundary_rounds = e.partial().boundary_rounds;
            out.history.push_back(classify_folding(mesh, out.points));
            stall(e.what());
        }
        rep = classify_folding(mesh, out.points);
    }
    out.history.push_back(rep);

    WeightCache weights(mesh);
    while (!rep.folded_boundary_triangles_kind1.empty()) {
        if (out.boundary_triangle_passes >= config.triangle_passes) {
            out.history.push_back(rep);
            stall("boundary triangles still folded after " +
                  std::to_string(out.boundary_triangle_passes) + " passes");
        }
        for (int face : rep.folded_boundary_triangles_kind1) {
            repair_boundary_triangle(mesh, out.points, face, weights);
        }
        ++out.boundary_triangle_passes;
        rep = classify_folding(mesh, out.points);
    }
    out.history.push_back(rep);

    while (!rep.folded_interior_triangles.empty()) {
        if (out.interior_passes >= config.triangle_passes) {
            out.history.push_back(rep);
            stall("interior triangles still folded after " + std::to_string(out.interior_passes) +
                  " passes");
        }
        for (int face : rep.folded_interior_triangles) {
            try {
                repair_interior_triangle(mesh, out.points, face, weights);
            } catch (const SingularUpdateError&) {
                ++out.singular_fallbacks;
                for (int c = 0; c < 3; ++c) {
                    const int v = mesh.faces()(face, c);
                    if (!mesh.is_boundary(v)) {
                        out.points.row(v) = ring_combination(mesh, out.points, v, weights);
                    }
                }
            }
        }
        ++out.interior_passes;
        rep = classify_folding(mesh, out.points);
    }
    out.history.push_back(rep);

    out.clean = rep.clean();
    if (!out.clean) {
        stall("foldings remain after repair");
    }
    std::ostringstream ss;
    ss << "repair: " << out.boundary_rounds << " boundary rounds, "
       << out.boundary_triangle_passes << " boundary-triangle passes, " << out.interior_passes
       << " interior passes";
    log::info(ss.str());
    return out;
}

}  // namespace sdmce
