#include "slm/vanderpol.hpp"

#include <cmath>

namespace slm {

namespace {

// Substream tags for the three phases' initial-condition draws.
constexpr std::uint64_t kStreamLearning = 0x10;
constexpr std::uint64_t kStreamGeneralisation = 0x11;
constexpr std::uint64_t kStreamSimulation = 0x12;

PhaseSet generate_phase(const VdpConfig& cfg, std::uint64_t stream) {
    Rng rng(mix_seed(cfg.seed, stream));
    PhaseSet phase;
    phase.trajectories.reserve(cfg.n_trajectories);

    const Index pairs_per_traj = cfg.steps - 1;
    Matd inputs(cfg.n_trajectories * pairs_per_traj, 2);
    Matd targets(cfg.n_trajectories * pairs_per_traj, 2);

    for (Index traj = 0; traj < cfg.n_trajectories; ++traj) {
        Trajectory t;
        t.init = {rng.draw(cfg.init_dist), rng.draw(cfg.init_dist)};
        t.states.resize(cfg.steps, 2);
        t.states.row(0) = t.init.transpose();
        for (Index s = 0; s + 1 < cfg.steps; ++s) {
            const Eigen::Vector2d next =
                vdp_step(t.states.row(s).transpose(), cfg.lambda, cfg.dt);
            t.states.row(s + 1) = next.transpose();
        }
        inputs.middleRows(traj * pairs_per_traj, pairs_per_traj) =
            t.states.topRows(pairs_per_traj);
        targets.middleRows(traj * pairs_per_traj, pairs_per_traj) =
            t.states.bottomRows(pairs_per_traj);
        phase.trajectories.push_back(std::move(t));
    }
    phase.pairs = Datasetd(std::move(inputs), std::move(targets));
    return phase;
}

}  // namespace

void VdpConfig::validate_or_throw() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("vdp: dt must be > 0");
    if (steps < 2) throw ConfigError("vdp: steps must be >= 2");
    if (n_trajectories < 1) throw ConfigError("vdp: n_trajectories must be >= 1");
    if (!std::isfinite(lambda)) throw ConfigError("vdp: lambda must be finite");
    validate(init_dist);
}

PhaseData generate_phase_data(const VdpConfig& cfg) {
    cfg.validate_or_throw();
    PhaseData data;
    data.config = cfg;
    data.learning = generate_phase(cfg, kStreamLearning);
    data.generalisation = generate_phase(cfg, kStreamGeneralisation);
    data.simulation = generate_phase(cfg, kStreamSimulation);
    return data;
}

RolloutResult rollout(const std::function<Vecd(const Vecd&)>& evaluator, const Vecd& initial,
                      Index steps) {
    if (steps < 1) throw ContractViolation("rollout: steps must be >= 1");
    RolloutResult result;
    result.states.resize(steps, initial.size());
    result.states.row(0) = initial.transpose();
    for (Index s = 0; s + 1 < steps; ++s) {
        const Vecd next = evaluator(result.states.row(s).transpose());
        if (next.size() != initial.size())
            throw ContractViolation("rollout: evaluator changed the state dimension");
        if (!next.allFinite()) {
            result.truncated_at = s + 1;
            result.states.conservativeResize(s + 1, Eigen::NoChange);
            return result;
        }
        result.states.row(s + 1) = next.transpose();
    }
    return result;
}

}  // namespace slm
