#include "sdmce/pipeline.hpp"

#include <chrono>
#include <sstream>

#include "sdmce/logging.hpp"

namespace sdmce
{

DiskSolver::DiskSolver(const TriMesh& mesh, SchurMode mode, NcgConfig ncg,
                       ObjectiveVariant variant)
    : mesh_(&mesh),
      laplacian_(build_laplacian(mesh)),
      system_(laplacian_, mesh.boundary_loop(), mode),
      ncg_(ncg),
      variant_(variant)
{
}

NcgResult DiskSolver::solve(const PenaltyState& penalty, const Eigen::MatrixX2d& start)
{
    PenaltyState p = penalty;
    p.variant = variant_;
    ObjectivePair obj{
        [&](const Eigen::MatrixX2d& f) { return penalized_objective(f, system_, p); },
        [&](const Eigen::MatrixX2d& f) { return euclidean_gradient(f, system_, p); }};
    NcgResult r = minimize_on_circles(obj, start, ncg_);
    std::ostringstream ss;
    ss << "solve mu=" << p.mu << ": " << to_string(r.trace.termination) << " after "
       << r.trace.iterations() << " iterations, objective " << r.objective << ", gradient "
       << r.grad_norm;
    log::debug(ss.str());
    if (r.trace.termination != Termination::converged) {
        log::warn(ss.str());
    }
    traces_.emplace_back(p.mu, r.trace);
    return r;
}

ProbeResult DiskSolver::probe(double mu, const Eigen::VectorXd& start_angles)
{
    PenaltyState p;
    p.mu = mu;
    const NcgResult r = solve(p, circle_points(start_angles));
    ProbeResult out;
    out.embedding.points = system_.extend(r.points);
    out.embedding.angles = central_angles(r.points);
    out.conformal_energy = conformal_energy(system_, r.points);
    out.area_deviation = signed_area_deviation(polygon_area(r.points));
    out.angle_error = angle_errors(*mesh_, out.embedding.points).mean;
    return out;
}

RunResult parameterize(const TriMesh& mesh, const RunConfig& config)
{
    const auto t0 = std::chrono::steady_clock::now();
    DiskSolver solver(mesh, config.schur, config.ncg, config.variant);
    const auto n = static_cast<int>(mesh.boundary_loop().size());

    BoundaryInit init = config.init;
    init.n = n;
    const Eigen::VectorXd start = generate_initial_boundary(init);

    RunResult res;
    ProbeResult sol;
    if (config.mu) {
        if (!(*config.mu >= 0)) {
            throw std::invalid_argument("fixed mu must be nonnegative");
        }
        res.mu = *config.mu;
        sol = solver.probe(res.mu, start);
    } else {
        TunerConfig tc;
        tc.tau = config.tau;
        if (config.polygon_energy_gate) {
            tc.energy_offset = pi - inscribed_polygon_area(n);
        }
        TuneResult tr = tune_mu([&](double mu, const Eigen::VectorXd& a) { return solver.probe(mu, a); },
                                start, tc);
        res.mu = tr.mu;
        res.history = std::move(tr.history);
        sol = std::move(tr.solution);
    }
    for (auto it = solver.traces().rbegin(); it != solver.traces().rend(); ++it) {
        if (it->first == res.mu) {
            res.trace = it->second;
            break;
        }
    }
    res.solve_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.points = sol.embedding.points;
    res.penalty.mu = res.mu;
    res.penalty.variant = config.variant;

    if (config.repair) {
        PenalizedSolver resolve = [&](const PenaltyState& s, const Eigen::MatrixX2d& b) {
            return solver.solve(s, b).points;
        };
        try {
            RepairOutcome out =
                repair_all(mesh, solver.system(), res.points, res.penalty, resolve,
                           config.repair_config);
            res.points = out.points;
            res.penalty = out.penalty;
            res.repair = std::move(out);
        } catch (const RepairStall& e) {
            res.repair_stalled = true;
            res.stall_message = e.what();
            res.repair = e.partial();
            res.points = e.partial().points;
            res.penalty = e.partial().penalty;
            log::warn(std::string("repair stalled: ") + e.what());
        }
    }

    res.kkt = kkt_residual(res.points, solver.system(), res.penalty);
    res.report = build_report(mesh, solver.laplacian(), res.points, res.mu, res.solve_seconds);
    return res;
}

}  // namespace sdmce
