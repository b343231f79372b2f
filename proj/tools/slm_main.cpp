#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "slm/checks.hpp"
#include "slm/experiment.hpp"
#include "slm/io.hpp"
#include "slm/training.hpp"
#include "slm/vanderpol.hpp"

namespace {

// Exit codes: 0 success, 1 internal error, 2 bad configuration, 3 bad or
// unreadable data, 4 numerical failure, 5 validation check failed.
enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kConfig = 2,
    kData = 3,
    kNumerical = 4,
    kCheckFailed = 5,
};

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    bool quick = false;
};

slm::ExperimentConfig load_config(const CommonOpts& opts) {
    slm::ExperimentConfig cfg;
    if (!opts.config_path.empty())
        cfg = slm::experiment_config_from_json(slm::read_json_file(opts.config_path));
    if (opts.quick) {
        cfg.repetitions = 3;
        cfg.vdp.steps = 150;
        cfg.vdp.n_trajectories = 4;
        cfg.h_slm = 20;
        cfg.h_elm = 60;
    }
    if (opts.seed) cfg.base_seed = *opts.seed;
    return cfg;
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "experiment config json");
    cmd->add_option("--seed", opts.seed, "seed override");
    cmd->add_flag("--quick", opts.quick, "small preset for fast runs");
}

int cmd_gen_data(const CommonOpts& opts, const std::string& out_path) {
    slm::ExperimentConfig cfg = load_config(opts);
    slm::VdpConfig vdp = cfg.vdp;
    vdp.seed = opts.seed.value_or(cfg.base_seed);
    const slm::PhaseData data = slm::generate_phase_data(vdp);
    slm::write_phase_csv_file(out_path, data);
    std::cout << "wrote " << out_path << ": 3 phases, " << vdp.n_trajectories
              << " trajectories each, " << data.learning.pairs.size() << " pairs per phase\n";
    return kOk;
}

int cmd_train(const CommonOpts& opts, const std::string& data_path, const std::string& kind,
              const std::string& out_path, const std::string& report_path,
              std::optional<slm::Index> h_override) {
    slm::ExperimentConfig cfg = load_config(opts);
    const slm::PhaseData data = slm::read_phase_csv_file(data_path);

    slm::RandomSpec spec = cfg.random_spec;
    spec.seed = opts.seed.value_or(cfg.base_seed);
    const slm::Index h = h_override.value_or(kind == "slm" ? cfg.h_slm : cfg.h_elm);
    const slm::RbfBankd bank = slm::generate_bank(spec, data.learning.pairs.dim_in(), h);

    nlohmann::json model_json;
    slm::FitReportd report;
    if (kind == "slm") {
        auto [params, rep] = slm::fit_slm(bank, data.learning.pairs, cfg.rank_tol);
        model_json = slm::model_to_json(params, &spec);
        report = rep;
    } else {
        auto [params, rep] = slm::fit_elm(bank, data.learning.pairs, cfg.rank_tol);
        model_json = slm::model_to_json(params, &spec);
        report = rep;
    }
    slm::write_json_file(out_path, model_json);

    const nlohmann::json report_json{
        {"model_kind", kind},           {"h", report.h},
        {"n", report.n},                {"m", report.m},
        {"num_samples", report.num_samples},
        {"train_mse", report.train_mse},
        {"train_sse", report.train_sse},
        {"build_seconds", report.build_seconds},
        {"solve_seconds", report.solve_seconds},
        {"regressor_rank", report.regressor_rank},
        {"sigma_max", report.sigma_max},
        {"sigma_min_retained", report.sigma_min_retained},
        {"seed", spec.seed},
        {"random_spec",
         nlohmann::json{{"center_dist", slm::dist_to_json(spec.center_dist)},
                        {"width_dist", slm::dist_to_json(spec.width_dist)},
                        {"seed", spec.seed}}}};
    if (!report_path.empty()) slm::write_json_file(report_path, report_json);

    std::cout << "trained " << kind << " (h=" << report.h << ") on " << report.num_samples
              << " pairs: train mse " << slm::format_double(report.train_mse) << ", rank "
              << report.regressor_rank << ", wrote " << out_path << "\n";
    return kOk;
}

int cmd_eval(const CommonOpts& opts, const std::string& data_path,
             const std::string& model_path, const std::string& out_path,
             const std::string& mode) {
    load_config(opts);  // evaluation is pure in its file inputs; still reject bad configs
    const slm::PhaseData data = slm::read_phase_csv_file(data_path);
    const slm::LoadedModel model = slm::model_from_json(slm::read_json_file(model_path));
    if (model.dim_in() != 2 || model.dim_out() != 2)
        throw slm::DataError("eval: model is not a 2d state map");

    const auto evaluator = model.evaluator();
    nlohmann::json out{{"mode", mode}, {"data_config", slm::vdp_config_to_json(data.config)}};
    if (mode != "rollout") {
        out["mse_train"] = slm::run_phase_eval(evaluator, data.learning.pairs);
        out["mse_gen"] = slm::run_phase_eval(evaluator, data.generalisation.pairs);
    }
    if (mode != "onestep") {
        const slm::SimEval sim = slm::run_simulation_eval(evaluator, data.simulation);
        out["mse_sim"] = sim.mse;
        out["sim_truncated_count"] = sim.truncated_count;
    }
    if (!out_path.empty()) slm::write_json_file(out_path, out);
    std::cout << out.dump(2) << "\n";
    return kOk;
}

int cmd_check(const CommonOpts& opts, const std::string& suite, std::optional<int> seeds,
              slm::Index pin_samples, slm::Index pin_dim, const std::string& out_path) {
    const std::uint64_t seed = opts.seed.value_or(1);
    if (suite != "interpolation" && (pin_samples > 0 || pin_dim > 0))
        throw slm::ConfigError("check: --N and --n apply to the interpolation suite only");
    const auto count = [&](int full, int quick) {
        return seeds.value_or(opts.quick ? quick : full);
    };

    std::ostringstream text;
    std::vector<slm::CheckResult> results;
    if (suite == "all") {
        if (seeds) {
            results.push_back(slm::check_rank(seed, *seeds));
            results.push_back(slm::check_interpolation(seed, *seeds));
            results.push_back(slm::check_equivalence(seed, *seeds));
            results.push_back(slm::check_distinct_norms_suite(seed, *seeds));
        } else {
            results = slm::run_all_checks(seed, opts.quick);
        }
    } else if (suite == "rank") {
        std::vector<slm::RankDiag> diags;
        results.push_back(slm::check_rank(seed, count(100, 20), &diags));
        for (const auto& d : diags)
            text << "  n=" << d.dim_in << " h=" << d.count_models << " N=" << d.n_samples
                 << "  rank " << d.got << "/" << d.expected
                 << (d.got == d.expected ? "" : "  deficient") << "\n";
    } else if (suite == "interpolation") {
        std::vector<slm::InterpolationDiag> diags;
        results.push_back(
            slm::check_interpolation(seed, count(50, 10), pin_dim, pin_samples, &diags));
        for (const auto& d : diags)
            text << "  n=" << d.dim_in << " h=" << d.count_models << " N=" << d.n_samples
                 << "  rank " << d.rank << "  cond " << slm::format_double(d.cond)
                 << "  rel residual " << slm::format_double(d.rel_residual) << "\n";
    } else if (suite == "equivalence") {
        results.push_back(slm::check_equivalence(seed, count(100, 20)));
    } else {
        results.push_back(slm::check_distinct_norms_suite(seed, count(1000, 100)));
    }

    bool all_passed = true;
    for (const auto& r : results) {
        text << (r.passed ? "PASS" : "FAIL") << "  " << r.name << ": " << r.detail << "\n";
        all_passed = all_passed && r.passed;
    }
    std::cout << text.str();
    if (!out_path.empty()) slm::write_text_file(out_path, text.str());
    return all_passed ? kOk : kCheckFailed;
}

int cmd_bench(const CommonOpts& opts, const std::string& out_dir) {
    const slm::ExperimentConfig cfg = load_config(opts);
    const slm::ExperimentReport report = slm::run_experiment(cfg);

    std::filesystem::create_directories(out_dir);
    const auto under = [&](const char* name) {
        return (std::filesystem::path(out_dir) / name).string();
    };
    slm::write_json_file(under("report.json"), slm::report_to_json(report));
    {
        std::ofstream os(under("records.csv"));
        if (!os) throw slm::DataError("cannot open for writing: " + under("records.csv"));
        slm::write_records_csv(os, report);
    }
    const std::string table = slm::format_summary_table(report);
    slm::write_text_file(under("summary.txt"), table);
    std::cout << table;
    return kOk;
}

int cmd_plot_data(const CommonOpts& opts, const std::string& data_path,
                  const std::string& model_path, const std::string& out_path) {
    load_config(opts);  // pure in its file inputs; still reject bad configs
    const slm::PhaseData data = slm::read_phase_csv_file(data_path);

    std::ofstream os(out_path);
    if (!os) throw slm::DataError("cannot open for writing: " + out_path);
    os << "# config " << slm::vdp_config_to_json(data.config).dump() << "\n";
    os << "section,index,step,x1,x2,width\n";
    const auto dump_phase = [&](const char* name, const slm::PhaseSet& phase) {
        for (std::size_t k = 0; k < phase.trajectories.size(); ++k) {
            const slm::Matd& states = phase.trajectories[k].states;
            for (slm::Index t = 0; t < states.rows(); ++t)
                os << name << ',' << k << ',' << t << ',' << slm::format_double(states(t, 0))
                   << ',' << slm::format_double(states(t, 1)) << ",\n";
        }
    };
    dump_phase("learning", data.learning);
    dump_phase("generalisation", data.generalisation);
    dump_phase("simulation", data.simulation);

    if (!model_path.empty()) {
        const slm::LoadedModel model = slm::model_from_json(slm::read_json_file(model_path));
        if (model.dim_in() != 2 || model.dim_out() != 2)
            throw slm::DataError("plot-data: model is not a 2d state map");
        const auto evaluator = model.evaluator();
        for (std::size_t k = 0; k < data.simulation.trajectories.size(); ++k) {
            const slm::Matd& truth = data.simulation.trajectories[k].states;
            const slm::RolloutResult rolled =
                slm::rollout(evaluator, truth.row(0).transpose(), truth.rows());
            for (slm::Index t = 0; t < rolled.states.rows(); ++t)
                os << "rollout," << k << ',' << t << ','
                   << slm::format_double(rolled.states(t, 0)) << ','
                   << slm::format_double(rolled.states(t, 1)) << ",\n";
        }
        const slm::RbfBankd& bank = model.slm ? model.slm->bank : model.elm->bank;
        for (slm::Index i = 0; i < bank.count_models(); ++i)
            os << "centers," << i << ",0," << slm::format_double(bank.centers(i, 0)) << ','
               << slm::format_double(bank.centers(i, 1)) << ','
               << slm::format_double(bank.widths(i)) << "\n";
    }
    if (!os) throw slm::DataError("write failed: " + out_path);
    std::cout << "wrote " << out_path << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"shuffled linear models: closed-form local-linear regression"};
    app.require_subcommand(1);

    CommonOpts gen_opts;
    std::string gen_out = "phases.csv";
    auto* gen = app.add_subcommand("gen-data", "generate three-phase trajectory data");
    add_common(gen, gen_opts);
    gen->add_option("--out", gen_out, "output csv path");

    CommonOpts train_opts;
    std::string train_data, train_kind = "slm", train_out = "model.json", train_report;
    std::optional<slm::Index> train_h;
    auto* train = app.add_subcommand("train", "fit a model on the learning phase");
    add_common(train, train_opts);
    train->add_option("--data", train_data, "phase csv from gen-data")->required();
    train->add_option("--model", train_kind, "slm or elm")
        ->check(CLI::IsMember({"slm", "elm"}));
    train->add_option("--out", train_out, "model json path");
    train->add_option("--report", train_report, "fit report json path");
    train->add_option("--hidden", train_h, "hidden model count override");

    CommonOpts eval_opts;
    std::string eval_data, eval_model, eval_out, eval_mode = "both";
    auto* eval = app.add_subcommand("eval", "evaluate a trained model on all phases");
    add_common(eval, eval_opts);
    eval->add_option("--data", eval_data, "phase csv")->required();
    eval->add_option("--model-file", eval_model, "model json")->required();
    eval->add_option("--out", eval_out, "metrics json path");
    eval->add_option("--mode", eval_mode, "onestep (paired one-step MSE), rollout, or both")
        ->check(CLI::IsMember({"onestep", "rollout", "both"}));

    CommonOpts check_opts;
    std::string check_suite = "all", check_out;
    std::optional<int> check_seeds;
    slm::Index check_pin_samples = 0, check_pin_dim = 0;
    auto* check = app.add_subcommand("check", "run the model-theoretic validation suites");
    add_common(check, check_opts);
    check->add_option("suite", check_suite, "which suite to run")
        ->check(CLI::IsMember({"rank", "interpolation", "equivalence", "distinct-norms", "all"}));
    check->add_option("--seeds", check_seeds, "seeded instances per suite");
    check->add_option("--N", check_pin_samples, "interpolation: pin the sample count");
    check->add_option("--n", check_pin_dim, "interpolation: pin the input dimension");
    check->add_option("--out", check_out, "also write the summary to this path");

    CommonOpts bench_opts;
    std::string bench_out = ".";
    auto* bench = app.add_subcommand("bench", "full repeated two-model comparison");
    add_common(bench, bench_opts);
    bench->add_option("--out", bench_out, "output directory");

    CommonOpts plot_opts;
    std::string plot_data, plot_model, plot_out = "plot.csv";
    auto* plot = app.add_subcommand("plot-data", "flatten phases (and a model) for plotting");
    add_common(plot, plot_opts);
    plot->add_option("--data", plot_data, "phase csv")->required();
    plot->add_option("--model-file", plot_model, "model json (adds rollouts and centers)");
    plot->add_option("--out", plot_out, "output csv path");

    std::string defaults_out;
    auto* config = app.add_subcommand("config", "configuration utilities");
    config->require_subcommand(1);
    auto* defaults =
        config->add_subcommand("print-defaults", "print the default experiment config as json");
    defaults->add_option("--out", defaults_out, "also write the json to this path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }

    try {
        if (gen->parsed()) return cmd_gen_data(gen_opts, gen_out);
        if (train->parsed())
            return cmd_train(train_opts, train_data, train_kind, train_out, train_report,
                             train_h);
        if (eval->parsed()) return cmd_eval(eval_opts, eval_data, eval_model, eval_out, eval_mode);
        if (check->parsed())
            return cmd_check(check_opts, check_suite, check_seeds, check_pin_samples,
                             check_pin_dim, check_out);
        if (bench->parsed()) return cmd_bench(bench_opts, bench_out);
        if (plot->parsed()) return cmd_plot_data(plot_opts, plot_data, plot_model, plot_out);
        if (config->parsed()) {
            const std::string text =
                slm::experiment_config_to_json(slm::ExperimentConfig{}).dump(2) + "\n";
            if (!defaults_out.empty()) slm::write_text_file(defaults_out, text);
            std::cout << text;
            return kOk;
        }
    } catch (const slm::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const slm::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kData;
    } catch (const slm::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kData;
    } catch (const slm::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kInternal;
}
