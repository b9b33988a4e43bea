#include "sdmce/adaptive_mu.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "sdmce/errors.hpp"
#include "sdmce/logging.hpp"

namespace sdmce
{

Eigen::VectorXd generate_initial_boundary(const BoundaryInit& init)
{
    if (init.n < 3) {
        throw std::invalid_argument("a boundary needs at least three points");
    }
    const int n = init.n;
    Eigen::VectorXd t(n);
    switch (init.kind) {
    case BoundaryInit::Kind::equal_angles:
        for (int i = 0; i < n; ++i) {
            t(i) = 2 * pi * i / n;
        }
        break;
    case BoundaryInit::Kind::scaled_arc:
        if (!(init.rho > 0)) {
            throw std::invalid_argument("arc scale rho must be positive");
        }
        for (int i = 0; i < n; ++i) {
            t(i) = std::fmod(2 * pi / init.rho * i / n, 2 * pi);
        }
        break;
    case BoundaryInit::Kind::random_order: {
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::mt19937_64 rng(init.seed);
        // Fisher-Yates on raw engine output
        for (int i = n - 1; i > 0; --i) {
            const auto j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
            std::swap(order[i], order[j]);
        }
        for (int i = 0; i < n; ++i) {
            t(i) = 2 * pi * order[i] / n;
        }
        break;
    }
    }
    return t;
}

std::string to_string(TunePhase p)
{
    switch (p) {
    case TunePhase::escalate_low:
        return "escalate_low";
    case TunePhase::escalate_high:
        return "escalate_high";
    case TunePhase::refine_down:
        return "refine_down";
    case TunePhase::refine_up:
        return "refine_up";
    }
    return "unknown";
}

namespace
{

class Tuner
{
public:
    Tuner(const BoundarySolver& solver, const TunerConfig& config, Eigen::VectorXd anchor)
        : solver_(solver), config_(config), anchor_(std::move(anchor))
    {
    }

    ProbeResult probe(double mu, TunePhase phase)
    {
        const auto t0 = std::chrono::steady_clock::now();
        ProbeResult r = solver_(mu, anchor_);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (std::abs(r.area_deviation) < config_.area_gate && r.embedding.angles.size() > 0) {
            anchor_ = r.embedding.angles;
        }
        history.push_back({phase, mu, r.conformal_energy, r.area_deviation, r.angle_error, secs,
                           false});
        std::ostringstream ss;
        ss << to_string(phase) << " mu=" << mu << " E_Cd=" << r.conformal_energy
           << " eps_A=" << r.area_deviation << " eps_theta=" << r.angle_error;
        log::debug(ss.str());
        return r;
    }

    bool energy_ok(const ProbeResult& r) const
    {
        return r.conformal_energy > -config_.tau - config_.energy_offset;
    }

    bool gates(const ProbeResult& r) const { return energy_ok(r) && r.area_deviation > -config_.tau; }

    void mark_accepted() { history.back().accepted = true; }

    // Escalation loop of the tuner: mu += s, s += 10 until the gates pass.
    ProbeResult escalate(double& mu, double& s, TunePhase phase)
    {
        for (;;) {
            mu += s;
            s += 10;
            if (mu > config_.mu_limit) {
                throw EscalationOverflow(mu);
            }
            ProbeResult r = probe(mu, phase);
            if (gates(r)) {
                mark_accepted();
                return r;
            }
        }
    }

    std::vector<MuProbe> history;

private:
    const BoundarySolver& solver_;
    TunerConfig config_;
    Eigen::VectorXd anchor_;
};

}  // namespace

TuneResult tune_mu(const BoundarySolver& solver, const Eigen::VectorXd& start_angles,
                   const TunerConfig& config)
{
    if (!(config.tau > 0)) {
        throw std::invalid_argument("tau must be positive");
    }
    Tuner tuner(solver, config, start_angles);
    const double tau = config.tau;

    double mu = 0.0;
    double s = 0.0;
    double mu_lo = 0.0;
    ProbeResult f_lo = tuner.escalate(mu, s, TunePhase::escalate_low);
    mu_lo = mu;
    ProbeResult f_hi = tuner.escalate(mu, s, TunePhase::escalate_high);
    double mu_hi = mu;

    if (f_lo.angle_error < (1 - tau) * f_hi.angle_error && mu_lo > 0) {
        while (s > 5) {
            std::optional<ProbeResult> cand;
            double cand_mu = 0.0;
            // Halve until a probe passes the gates or the step runs out.
            while (s > 5) {
                s /= 2;
                cand_mu = std::max(0.0, std::floor(mu_lo - s));
                ProbeResult r = tuner.probe(cand_mu, TunePhase::refine_down);
                if (tuner.energy_ok(r) && r.area_deviation > 0) {
                    cand = std::move(r);
                    break;
                }
            }
            if (cand && cand->angle_error < (1 - tau) * f_lo.angle_error) {
                tuner.mark_accepted();
                mu_lo = cand_mu;
                f_lo = std::move(*cand);
            }
        }
    }

    if (f_hi.angle_error < (1 - tau) * f_lo.angle_error) {
        for (;;) {
            const double cand_mu = mu_hi + s;
            if (cand_mu > config.mu_limit) {
                break;
            }
            ProbeResult r = tuner.probe(cand_mu, TunePhase::refine_up);
            if (tuner.gates(r) && r.angle_error < (1 - tau) * f_hi.angle_error) {
                tuner.mark_accepted();
                mu_hi = cand_mu;
                f_hi = std::move(r);
            } else {
                break;
            }
        }
    }

    TuneResult out;
    if (f_lo.angle_error < f_hi.angle_error) {
        out.mu = mu_lo;
        out.solution = std::move(f_lo);
    } else {
        out.mu = mu_hi;
        out.solution = std::move(f_hi);
    }
    out.history = std::move(tuner.history);
    return out;
}

void write_history_csv(const std::vector<MuProbe>& history, std::ostream& out)
{
    out << "mu,E_Cd,eps_A,eps_theta,seconds,phase,accepted\n" << std::setprecision(17);
    for (const auto& h : history) {
        out << h.mu << ',' << h.conformal_energy << ',' << h.area_deviation << ','
            << h.angle_error << ',' << h.seconds << ',' << to_string(h.phase) << ','
            << (h.accepted ? 1 : 0) << '\n';
    }
}

}  // namespace sdmce
