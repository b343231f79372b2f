#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "slm/experiment.hpp"
#include "slm/training.hpp"

using namespace slm;

namespace {

VdpConfig tiny_vdp(std::uint64_t seed) {
    VdpConfig cfg;
    cfg.steps = 20;
    cfg.n_trajectories = 2;
    cfg.seed = seed;
    return cfg;
}

ExperimentConfig tiny_experiment() {
    ExperimentConfig cfg;
    cfg.repetitions = 2;
    cfg.h_slm = 4;
    cfg.h_elm = 8;
    cfg.vdp = tiny_vdp(0);
    cfg.base_seed = 17;
    return cfg;
}

}  // namespace

TEST_CASE("phase evaluation of the exact dynamics is zero") {
    const VdpConfig cfg = tiny_vdp(3);
    const PhaseData data = generate_phase_data(cfg);
    const auto exact = [&](const Vecd& x) -> Vecd {
        return vdp_step(Eigen::Vector2d(x(0), x(1)), cfg.lambda, cfg.dt);
    };
    CHECK(run_phase_eval(exact, data.learning.pairs) == 0.0);
    const SimEval sim = run_simulation_eval(exact, data.simulation);
    CHECK(sim.mse == 0.0);
    CHECK(sim.truncated_count == 0);
}

TEST_CASE("phase evaluation of the identity map matches the direct average") {
    const PhaseData data = generate_phase_data(tiny_vdp(4));
    const Datasetd& pairs = data.learning.pairs;
    double sse = 0.0;
    for (Index j = 0; j < pairs.size(); ++j)
        sse += (pairs.inputs.row(j) - pairs.targets.row(j)).squaredNorm();
    const double expected = sse / static_cast<double>(pairs.size());

    const double got = run_phase_eval([](const Vecd& x) { return x; }, pairs);
    CHECK(got == doctest::Approx(expected).epsilon(1e-15));
    CHECK(got > 0.0);
}

TEST_CASE("simulation evaluation of the identity map matches the direct average") {
    const PhaseData data = generate_phase_data(tiny_vdp(5));
    double sse = 0.0;
    Index count = 0;
    for (const Trajectory& t : data.simulation.trajectories) {
        for (Index s = 1; s < t.states.rows(); ++s) {
            sse += (t.states.row(0) - t.states.row(s)).squaredNorm();
            ++count;
        }
    }
    const SimEval sim = run_simulation_eval([](const Vecd& x) { return x; }, data.simulation);
    CHECK(sim.mse == doctest::Approx(sse / static_cast<double>(count)).epsilon(1e-14));
    CHECK(sim.truncated_count == 0);
}

TEST_CASE("simulation evaluation flags truncating models and keeps the prefix") {
    const PhaseData data = generate_phase_data(tiny_vdp(6));
    int calls = 0;
    const auto breaks_late = [&calls](const Vecd& x) -> Vecd {
        ++calls;
        Vecd y = x;
        if (calls % 7 == 0) y(0) = std::numeric_limits<double>::quiet_NaN();
        return y;
    };
    const SimEval sim = run_simulation_eval(breaks_late, data.simulation);
    CHECK(sim.truncated_count == 2);  // every trajectory dies within 7 calls
    CHECK(std::isfinite(sim.mse));
}

TEST_CASE("experiment config validation") {
    ExperimentConfig cfg = tiny_experiment();
    cfg.repetitions = 0;
    CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
    cfg = tiny_experiment();
    cfg.h_slm = 0;
    CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
    cfg = tiny_experiment();
    cfg.rank_tol = -0.5;
    CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
    cfg = tiny_experiment();
    cfg.vdp.dt = 0.0;
    CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
}

TEST_CASE("a small two-model run produces complete, sane records") {
    const ExperimentConfig cfg = tiny_experiment();
    const ExperimentReport report = run_experiment(cfg);
    REQUIRE(report.slm.has_value());
    REQUIRE(report.elm.has_value());
    for (const ModelResults* res : {&*report.slm, &*report.elm}) {
        REQUIRE(res->records.size() == 2);
        CHECK(res->failed_count == 0);
        for (std::size_t r = 0; r < res->records.size(); ++r) {
            const RepetitionRecord& rec = res->records[r];
            CHECK(rec.seed == cfg.base_seed + r);
            CHECK_FALSE(rec.fit_failed);
            CHECK(rec.regressor_rank > 0);
            CHECK(rec.mse_train >= 0.0);
            CHECK(std::isfinite(rec.mse_gen));
            CHECK(std::isfinite(rec.mse_sim));
            CHECK(rec.total_seconds >= rec.pinv_seconds);
        }
    }
}

TEST_CASE("model_kind selects which models run") {
    ExperimentConfig cfg = tiny_experiment();
    cfg.model_kind = ModelKind::Slm;
    ExperimentReport report = run_experiment(cfg);
    CHECK(report.slm.has_value());
    CHECK_FALSE(report.elm.has_value());

    cfg.model_kind = ModelKind::Elm;
    report = run_experiment(cfg);
    CHECK_FALSE(report.slm.has_value());
    CHECK(report.elm.has_value());
}

TEST_CASE("runs are deterministic apart from wall-clock fields") {
    const ExperimentConfig cfg = tiny_experiment();
    const ExperimentReport a = run_experiment(cfg);
    const ExperimentReport b = run_experiment(cfg);
    for (std::size_t r = 0; r < a.slm->records.size(); ++r) {
        CHECK(a.slm->records[r].seed == b.slm->records[r].seed);
        CHECK(a.slm->records[r].mse_train == b.slm->records[r].mse_train);
        CHECK(a.slm->records[r].mse_gen == b.slm->records[r].mse_gen);
        CHECK(a.slm->records[r].mse_sim == b.slm->records[r].mse_sim);
        CHECK(a.slm->records[r].regressor_rank == b.slm->records[r].regressor_rank);
        CHECK(a.elm->records[r].mse_train == b.elm->records[r].mse_train);
        CHECK(a.elm->records[r].mse_gen == b.elm->records[r].mse_gen);
        CHECK(a.elm->records[r].mse_sim == b.elm->records[r].mse_sim);
    }
    // A different base seed changes the draws.
    ExperimentConfig other = cfg;
    other.base_seed = cfg.base_seed + 1000;
    const ExperimentReport c = run_experiment(other);
    CHECK(a.slm->records[0].mse_train != c.slm->records[0].mse_train);
}

TEST_CASE("aggregates are the mean and population variance over successes") {
    std::vector<RepetitionRecord> records(3);
    records[0].mse_train = 1.0;
    records[1].mse_train = 2.0;
    records[1].fit_failed = true;  // excluded
    records[2].mse_train = 3.0;
    const Aggregate agg = aggregate_of(records, &RepetitionRecord::mse_train);
    CHECK(agg.mean == doctest::Approx(2.0));
    CHECK(agg.variance == doctest::Approx(1.0));  // population variance of {1, 3}

    const Aggregate all_failed = aggregate_of(
        std::vector<RepetitionRecord>(2, [] {
            RepetitionRecord r;
            r.fit_failed = true;
            return r;
        }()),
        &RepetitionRecord::mse_train);
    CHECK(all_failed.mean == 0.0);
    CHECK(all_failed.variance == 0.0);
}

TEST_CASE("a failing fit is recorded, not fatal") {
    ExperimentConfig cfg = tiny_experiment();
    cfg.repetitions = 2;
    // Valid distribution whose mass sits below the width floor: bank
    // generation throws inside the repetition, which must be absorbed.
    cfg.random_spec.width_dist = UniformDist{0.0, 1e-14};
    const ExperimentReport report = run_experiment(cfg);
    CHECK(report.slm->failed_count == 2);
    CHECK(report.elm->failed_count == 2);
    for (const RepetitionRecord& rec : report.slm->records) {
        CHECK(rec.fit_failed);
        CHECK_FALSE(rec.failure.empty());
    }
    CHECK(report.slm->mse_train.mean == 0.0);
}

TEST_CASE("model kind names round-trip") {
    CHECK(model_kind_from_string("slm") == ModelKind::Slm);
    CHECK(model_kind_from_string("elm") == ModelKind::Elm);
    CHECK(model_kind_from_string("both") == ModelKind::Both);
    CHECK(to_string(ModelKind::Both) == std::string("both"));
    CHECK_THROWS_AS(model_kind_from_string("svm"), ConfigError);
}
