#include "sdmce/optimizer.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include "sdmce/disk_energy.hpp"

namespace sdmce
{

void NcgConfig::validate() const
{
    if (max_iterations <= 0 || max_backtracks <= 0 || restart_period < 0) {
        throw std::invalid_argument("iteration counts must be positive");
    }
    if (!(gradient_tolerance > 0) || !(sufficient_decrease > 0) || !(initial_step > 0) ||
        !(max_row_step > 0)) {
        throw std::invalid_argument("solver tolerances and steps must be positive");
    }
    if (!(contraction > 0 && contraction < 1)) {
        throw std::invalid_argument("contraction must lie in (0, 1)");
    }
}

std::string to_string(Termination t)
{
    switch (t) {
    case Termination::converged:
        return "converged";
    case Termination::max_iterations:
        return "max_iterations";
    case Termination::line_search_failure:
        return "line_search_failure";
    }
    return "unknown";
}

void SolveTrace::write_csv(std::ostream& out) const
{
    out << "iteration,objective,grad_norm,step,restart\n" << std::setprecision(17);
    for (const auto& r : rows) {
        out << r.iteration << ',' << r.objective << ',' << r.grad_norm << ',' << r.step << ','
            << (r.restart ? 1 : 0) << '\n';
    }
}

double max_row_norm(const Eigen::MatrixX2d& m)
{
    return m.rows() == 0 ? 0.0 : m.rowwise().norm().maxCoeff();
}

Eigen::MatrixX2d ncg_direction(const Eigen::MatrixX2d& gradient_new,
                               const Eigen::MatrixX2d& gradient_old,
                               const Eigen::MatrixX2d& direction_old)
{
    if (gradient_new.rows() != gradient_old.rows() || gradient_new.rows() != direction_old.rows()) {
        throw std::invalid_argument("ncg_direction: shape mismatch");
    }
    const double denom = gradient_old.squaredNorm();
    double beta = 0.0;
    if (denom > 0) {
        beta = std::max(0.0, (gradient_new.array() * (gradient_new - gradient_old).array()).sum() /
                                 denom);
    }
    Eigen::MatrixX2d d = -gradient_new + beta * direction_old;
    if (!((d.array() * gradient_new.array()).sum() < 0)) {
        d = -gradient_new;
    }
    return d;
}

namespace
{

double inner(const Eigen::MatrixX2d& a, const Eigen::MatrixX2d& b)
{
    return (a.array() * b.array()).sum();
}

// Returns false if some row is too short to normalize.
bool retract(const Eigen::MatrixX2d& x, Eigen::MatrixX2d& out)
{
    const Eigen::VectorXd norms = x.rowwise().norm();
    if (norms.size() > 0 && norms.minCoeff() < 1e-8) {
        return false;
    }
    out = x.array().colwise() / norms.array();
    return true;
}

struct LineSearch {
    bool ok = false;
    Eigen::MatrixX2d point;
    double value = 0.0;
    double step = 0.0;
};

LineSearch backtrack(const ObjectivePair& objective, const NcgConfig& config,
                     const Eigen::MatrixX2d& f, double value, const Eigen::MatrixX2d& d,
                     double slope, double step)
{
    LineSearch out;
    const double slack = 1e-14 * std::abs(value);
    for (int b = 0; b < config.max_backtracks; ++b, step *= config.contraction) {
        Eigen::MatrixX2d trial;
        if (!retract(f + step * d, trial)) {
            continue;
        }
        const double v = objective.value(trial);
        if (std::isfinite(v) && v <= value + config.sufficient_decrease * step * slope + slack &&
            v <= value + slack) {
            out.ok = true;
            out.point = std::move(trial);
            out.value = v;
            out.step = step;
            break;
        }
    }
    if (!out.ok) {
        return out;
    }
    // One safeguarded quadratic-interpolation step keeps successive directions close to conjugate.
    const double curvature = out.value - value - slope * out.step;
    if (curvature > 0) {
        double q = -slope * out.step * out.step / (2 * curvature);
        q = std::min(q, 10 * out.step);
        const double dmax = d.rows() ? d.rowwise().norm().maxCoeff() : 0.0;
        if (dmax > 0) {
            q = std::min(q, config.max_row_step / dmax);
        }
        Eigen::MatrixX2d trial;
        if (q > 0.1 * out.step && std::abs(q - out.step) > 1e-3 * out.step &&
            retract(f + q * d, trial)) {
            const double v = objective.value(trial);
            if (std::isfinite(v) && v < out.value &&
                v <= value + config.sufficient_decrease * q * slope + slack) {
                out.point = std::move(trial);
                out.value = v;
                out.step = q;
            }
        }
    }
    return out;
}

}  // namespace

NcgResult minimize_on_circles(const ObjectivePair& objective, const Eigen::MatrixX2d& start,
                              const NcgConfig& config)
{
    config.validate();
    if (start.rows() == 0) {
        throw std::invalid_argument("minimize_on_circles: empty start");
    }
    if (((start.rowwise().norm().array() - 1.0).abs() > 1e-12).any()) {
        throw std::invalid_argument("minimize_on_circles: start rows must be unit vectors");
    }
    const int period = config.restart_period > 0 ? config.restart_period
                                                 : static_cast<int>(start.rows());

    NcgResult res;
    Eigen::MatrixX2d f = start;
    double value = objective.value(f);
    Eigen::MatrixX2d g = project_to_tangent(objective.gradient(f), f);
    double gnorm = max_row_norm(g);
    res.trace.rows.push_back({0, value, gnorm, 0.0, true});

    Eigen::MatrixX2d d = -g;
    double prev_step = config.initial_step;
    double prev_slope = 0.0;
    res.trace.termination = Termination::max_iterations;
    int since_restart = 0;

    for (int k = 1; k <= config.max_iterations; ++k) {
        if (gnorm <= config.gradient_tolerance) {
            res.trace.termination = Termination::converged;
            break;
        }
        bool restart = false;
        double slope = inner(g, d);
        if (!(slope < 0)) {
            d = -g;
            slope = inner(g, d);
            restart = true;
        }

        double step = config.initial_step;
        if (k > 1 && prev_slope < 0) {
            step = prev_step * prev_slope / slope;
        }
        const double dmax = max_row_norm(d);
        if (dmax > 0 && step * dmax > config.max_row_step) {
            step = config.max_row_step / dmax;
        }

        LineSearch ls = backtrack(objective, config, f, value, d, slope, step);
        if (!ls.ok && !restart) {
            d = -g;
            slope = inner(g, d);
            restart = true;
            step = config.initial_step;
            if (dmax > 0) {
                step = std::min(step, config.max_row_step / max_row_norm(d));
            }
            ls = backtrack(objective, config, f, value, d, slope, step);
        }
        if (!ls.ok) {
            res.trace.termination = Termination::line_search_failure;
            break;
        }

        const Eigen::MatrixX2d g_old = project_to_tangent(g, ls.point);
        const Eigen::MatrixX2d d_old = project_to_tangent(d, ls.point);
        f = std::move(ls.point);
        value = ls.value;
        g = project_to_tangent(objective.gradient(f), f);
        gnorm = max_row_norm(g);
        prev_step = ls.step;
        prev_slope = slope;

        since_restart = restart ? 1 : since_restart + 1;
        if (since_restart >= period) {
            d = -g;
            since_restart = 0;
        } else {
            d = ncg_direction(g, g_old, d_old);
        }
        res.trace.rows.push_back({k, value, gnorm, ls.step, restart});
    }
    if (res.trace.termination == Termination::max_iterations &&
        gnorm <= config.gradient_tolerance) {
        res.trace.termination = Termination::converged;
    }
    res.points = std::move(f);
    res.objective = value;
    res.grad_norm = gnorm;
    return res;
}

}  // namespace sdmce
