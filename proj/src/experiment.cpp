#include "slm/experiment.hpp"

#include <chrono>
#include <cmath>

#include "slm/training.hpp"

namespace slm {

namespace {

// Substream tags for the per-repetition seed.
constexpr std::uint64_t kStreamData = 0x01;
constexpr std::uint64_t kStreamBankSlm = 0x02;
constexpr std::uint64_t kStreamBankElm = 0x03;

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct SingleRun {
    RepetitionRecord record;
};

template <typename FitFn, typename EvalFn>
RepetitionRecord run_one(std::uint64_t rep_seed, std::uint64_t bank_stream, Index h,
                         const ExperimentConfig& cfg, const PhaseData& phases, FitFn fit,
                         EvalFn make_evaluator) {
    RepetitionRecord rec;
    rec.seed = rep_seed;
    const auto start = std::chrono::steady_clock::now();
    try {
        RandomSpec spec = cfg.random_spec;
        spec.seed = mix_seed(rep_seed, bank_stream);
        const RbfBankd bank = generate_bank(spec, /*dim_in=*/2, h);
        auto [params, fit_report] = fit(bank, phases.learning.pairs, cfg.rank_tol);
        rec.pinv_seconds = fit_report.solve_seconds;
        rec.mse_train = fit_report.train_mse;
        rec.regressor_rank = fit_report.regressor_rank;
        const auto evaluator = make_evaluator(std::move(params));
        rec.mse_gen = run_phase_eval(evaluator, phases.generalisation.pairs);
        const SimEval sim = run_simulation_eval(evaluator, phases.simulation);
        rec.mse_sim = sim.mse;
        rec.sim_truncated = sim.truncated_count > 0;
    } catch (const std::exception& e) {
        rec.fit_failed = true;
        rec.failure = e.what();
    }
    rec.total_seconds = seconds_since(start);
    return rec;
}

ModelResults finalize(std::vector<RepetitionRecord> records) {
    ModelResults out;
    out.records = std::move(records);
    for (const auto& r : out.records)
        if (r.fit_failed) ++out.failed_count;
    out.total_seconds = aggregate_of(out.records, &RepetitionRecord::total_seconds);
    out.pinv_seconds = aggregate_of(out.records, &RepetitionRecord::pinv_seconds);
    out.mse_train = aggregate_of(out.records, &RepetitionRecord::mse_train);
    out.mse_gen = aggregate_of(out.records, &RepetitionRecord::mse_gen);
    out.mse_sim = aggregate_of(out.records, &RepetitionRecord::mse_sim);
    return out;
}

}  // namespace

void ExperimentConfig::validate_or_throw() const {
    if (h_slm < 1 || h_elm < 1) throw ConfigError("experiment: model counts must be positive");
    if (repetitions < 1) throw ConfigError("experiment: repetitions must be positive");
    if (rank_tol && !(*rank_tol >= 0.0)) throw ConfigError("experiment: rank_tol must be >= 0");
    validate(random_spec.center_dist);
    validate(random_spec.width_dist);
    vdp.validate_or_throw();
}

double run_phase_eval(const std::function<Vecd(const Vecd&)>& evaluator, const Datasetd& data) {
    const Index n_samples = data.inputs.rows();
    double sse = 0.0;
    for (Index j = 0; j < n_samples; ++j) {
        const Vecd pred = evaluator(data.inputs.row(j).transpose());
        sse += (pred - data.targets.row(j).transpose()).squaredNorm();
    }
    return sse / static_cast<double>(n_samples);
}

SimEval run_simulation_eval(const std::function<Vecd(const Vecd&)>& evaluator,
                            const PhaseSet& simulation) {
    SimEval out;
    double sse = 0.0;
    Index count = 0;
    for (const Trajectory& truth : simulation.trajectories) {
        const Index steps = truth.states.rows();
        const RolloutResult rolled = rollout(evaluator, truth.states.row(0).transpose(), steps);
        if (rolled.truncated_at) ++out.truncated_count;
        // Row 0 is the shared initial condition; score the predictions.
        for (Index t = 1; t < rolled.states.rows(); ++t) {
            sse += (rolled.states.row(t) - truth.states.row(t)).squaredNorm();
            ++count;
        }
    }
    out.mse = count > 0 ? sse / static_cast<double>(count) : 0.0;
    return out;
}

Aggregate aggregate_of(const std::vector<RepetitionRecord>& records,
                       double RepetitionRecord::*field) {
    Aggregate agg;
    Index n = 0;
    for (const auto& r : records) {
        if (r.fit_failed) continue;
        agg.mean += r.*field;
        ++n;
    }
    if (n == 0) return agg;
    agg.mean /= static_cast<double>(n);
    for (const auto& r : records) {
        if (r.fit_failed) continue;
        const double d = r.*field - agg.mean;
        agg.variance += d * d;
    }
    agg.variance /= static_cast<double>(n);
    return agg;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate_or_throw();
    ExperimentReport report;
    report.config = cfg;

    const bool want_slm = cfg.model_kind != ModelKind::Elm;
    const bool want_elm = cfg.model_kind != ModelKind::Slm;
    std::vector<RepetitionRecord> slm_records, elm_records;

    for (Index r = 0; r < cfg.repetitions; ++r) {
        const std::uint64_t rep_seed = cfg.base_seed + static_cast<std::uint64_t>(r);
        VdpConfig vdp = cfg.vdp;
        vdp.seed = mix_seed(rep_seed, kStreamData);
        const PhaseData phases = generate_phase_data(vdp);

        if (want_slm) {
            slm_records.push_back(run_one(
                rep_seed, kStreamBankSlm, cfg.h_slm, cfg, phases,
                [](const RbfBankd& bank, const Datasetd& data, std::optional<double> tol) {
                    return fit_slm(bank, data, tol);
                },
                [](SlmParamsd params) {
                    return std::function<Vecd(const Vecd&)>(
                        [p = std::move(params)](const Vecd& x) { return eval_slm(p, x); });
                }));
        }
        if (want_elm) {
            elm_records.push_back(run_one(
                rep_seed, kStreamBankElm, cfg.h_elm, cfg, phases,
                [](const RbfBankd& bank, const Datasetd& data, std::optional<double> tol) {
                    return fit_elm(bank, data, tol);
                },
                [](ElmParamsd params) {
                    return std::function<Vecd(const Vecd&)>(
                        [p = std::move(params)](const Vecd& x) { return eval_elm(p, x); });
                }));
        }
    }

    if (want_slm) report.slm = finalize(std::move(slm_records));
    if (want_elm) report.elm = finalize(std::move(elm_records));
    return report;
}

const char* to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::Slm: return "slm";
        case ModelKind::Elm: return "elm";
        case ModelKind::Both: return "both";
    }
    throw ContractViolation("unknown model kind");
}

ModelKind model_kind_from_string(const std::string& s) {
    if (s == "slm") return ModelKind::Slm;
    if (s == "elm") return ModelKind::Elm;
    if (s == "both") return ModelKind::Both;
    throw ConfigError("unknown model kind: " + s);
}

}  // namespace slm
