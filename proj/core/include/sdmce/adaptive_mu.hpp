#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sdmce/disk_energy.hpp"

namespace sdmce
{

/// Starting boundary angles for the disk solve.
struct BoundaryInit {
    enum class Kind { equal_angles, scaled_arc, random_order };
    Kind kind = Kind::equal_angles;
    int n = 0;
    double rho = 1.0;          ///< scaled_arc: the points cover an arc of 2 pi / rho
    std::uint64_t seed = 0;    ///< random_order: permutation seed
};

/**
 * @brief Central angles in [0, 2pi) for the requested start.
 *
 * equal_angles: t_i = 2 pi i / n. scaled_arc: t_i = (2 pi / rho) i / n mod 2 pi.
 * random_order: the equal angles permuted by a seeded shuffle.
 * Throws std::invalid_argument for n < 3 or rho <= 0.
 */
Eigen::VectorXd generate_initial_boundary(const BoundaryInit& init);

/// One solve at a fixed penalty, as seen by the tuner.
struct ProbeResult {
    DiskEmbedding embedding;
    double conformal_energy = 0.0;  ///< E_Cd
    double area_deviation = 0.0;    ///< signed pi - A(f)
    double angle_error = 0.0;       ///< mean relative angle error
};

/// Solves at penalty `mu` starting from the given boundary angles.
using BoundarySolver = std::function<ProbeResult(double mu, const Eigen::VectorXd& start_angles)>;

struct TunerConfig {
    double tau = 1e-4;
    /// Re-anchor the start angles when |eps_A| falls below this.
    double area_gate = 0.1;
    double mu_limit = 1e6;
    /// Added slack on the energy gate: E_Cd > -tau - energy_offset.
    double energy_offset = 0.0;
};

enum class TunePhase { escalate_low, escalate_high, refine_down, refine_up };

std::string to_string(TunePhase p);

struct MuProbe {
    TunePhase phase = TunePhase::escalate_low;
    double mu = 0.0;
    double conformal_energy = 0.0;
    double area_deviation = 0.0;
    double angle_error = 0.0;
    double seconds = 0.0;
    bool accepted = false;
};

struct TuneResult {
    double mu = 0.0;
    ProbeResult solution;
    std::vector<MuProbe> history;
};

/**
 * @brief Adaptive choice of the area penalty.
 *
 * Escalates mu = 0, 10, 30, 60, ... until the energy and area gates pass,
 * repeats the escalation for a second, larger penalty, then refines downward
 * by halving the step or upward by the current step while the mean angle error
 * improves by a factor (1 - tau). Returns the better of the two kept solutions.
 *
 * Throws EscalationOverflow if mu exceeds config.mu_limit during escalation.
 */
TuneResult tune_mu(const BoundarySolver& solver, const Eigen::VectorXd& start_angles,
                   const TunerConfig& config = {});

/// Columns: mu,E_Cd,eps_A,eps_theta,seconds (plus phase and accepted flag).
void write_history_csv(const std::vector<MuProbe>& history, std::ostream& out);

}  // namespace sdmce
