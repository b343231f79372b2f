#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "slm/random.hpp"
#include "slm/training.hpp"
#include "slm/types.hpp"

namespace slm {

/// Euler-forward Van der Pol trajectory generation, packaged as one-step
/// prediction data for the three experiment phases.
struct VdpConfig {
    double lambda = 1.0;
    double dt = 0.01;
    Index steps = 1000;           // states per trajectory
    Index n_trajectories = 10;    // per phase
    CenterDist init_dist = UniformDist{-2.5, 2.5};  // per coordinate of R^2
    std::uint64_t seed = 0;

    void validate_or_throw() const;
};

/// One Euler-forward step of dx1/dt = x2, dx2/dt = lambda (1 - x1^2) x2 - x1
/// (the attracting-limit-cycle orientation; trajectories from a bounded box
/// of initial conditions stay bounded, which the training data relies on).
inline Eigen::Vector2d vdp_step(const Eigen::Vector2d& state, double lambda, double dt) {
    const double x1 = state(0), x2 = state(1);
    return {x1 + dt * x2, x2 + dt * (lambda * (1.0 - x1 * x1) * x2 - x1)};
}

struct Trajectory {
    Eigen::Vector2d init;
    Matd states;  // steps x 2, row 0 = init
};

/// One phase: its raw trajectories plus the flattened one-step pairs
/// (state_t -> state_{t+1}), trajectory boundaries never crossed.
struct PhaseSet {
    std::vector<Trajectory> trajectories;
    Datasetd pairs;
};

struct PhaseData {
    PhaseSet learning;
    PhaseSet generalisation;
    PhaseSet simulation;
    VdpConfig config;
};

/// Three phases with independently drawn initial conditions; deterministic
/// in the config including its seed.
PhaseData generate_phase_data(const VdpConfig& cfg);

struct RolloutResult {
    Matd states;  // row 0 = initial; fewer than `steps` rows iff truncated
    std::optional<Index> truncated_at;  // index of the first non-finite prediction
};

/// Free-running iteration of an arbitrary state map: element 0 is the
/// initial state, element t+1 = evaluator(element t). A non-finite output
/// truncates the trajectory and records the failing step.
RolloutResult rollout(const std::function<Vecd(const Vecd&)>& evaluator, const Vecd& initial,
                      Index steps);

}  // namespace slm
