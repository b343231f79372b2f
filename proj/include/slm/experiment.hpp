#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "slm/models.hpp"
#include "slm/rbf.hpp"
#include "slm/vanderpol.hpp"

namespace slm {

enum class ModelKind { Slm, Elm, Both };

/// The three-phase benchmark: train on the learning phase, score one-step
/// prediction on the generalisation phase, free-run on the simulation
/// phase's initial conditions; repeat over seeds and aggregate.
struct ExperimentConfig {
    ModelKind model_kind = ModelKind::Both;
    Index h_slm = 100;
    Index h_elm = 300;
    RandomSpec random_spec;  // per-repetition seeds are derived, spec seed ignored here
    VdpConfig vdp;
    Index repetitions = 100;
    std::optional<double> rank_tol;
    std::uint64_t base_seed = 1;

    void validate_or_throw() const;
};

struct RepetitionRecord {
    std::uint64_t seed = 0;
    double total_seconds = 0.0;  // bank draw + assembly + solve + both phase evaluations
    double pinv_seconds = 0.0;   // the solve alone
    double mse_train = 0.0;
    double mse_gen = 0.0;
    double mse_sim = 0.0;
    Index regressor_rank = 0;
    bool sim_truncated = false;
    bool fit_failed = false;
    std::string failure;
};

struct Aggregate {
    double mean = 0.0;
    double variance = 0.0;  // population variance over successful repetitions
};

struct ModelResults {
    std::vector<RepetitionRecord> records;
    Aggregate total_seconds, pinv_seconds, mse_train, mse_gen, mse_sim;
    Index failed_count = 0;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::optional<ModelResults> slm;
    std::optional<ModelResults> elm;
};

/// Mean over pairs of ||evaluator(x_j) - t_j||^2.
double run_phase_eval(const std::function<Vecd(const Vecd&)>& evaluator, const Datasetd& data);

struct SimEval {
    double mse = 0.0;          // pooled over all predictions of all trajectories
    Index truncated_count = 0;  // trajectories cut short by a non-finite output
};

/// Rolls the evaluator out from each trajectory's initial condition and
/// scores all predicted states against the ground truth, pooled. A truncated
/// rollout contributes its completed prefix.
SimEval run_simulation_eval(const std::function<Vecd(const Vecd&)>& evaluator,
                            const PhaseSet& simulation);

/// Repetition r derives its seeds from base_seed + r, with independent
/// substreams for the data draw and each model's bank. Deterministic except
/// for the wall-clock fields.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Recomputes an aggregate from records, skipping failed ones.
Aggregate aggregate_of(const std::vector<RepetitionRecord>& records,
                       double RepetitionRecord::*field);

const char* to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& s);

}  // namespace slm
