#include "slm/io.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

namespace slm {

namespace {

using nlohmann::json;

// Unknown-key rejection; config files raise ConfigError, model/data files
// raise DataError.
void require_keys(const json& obj, std::initializer_list<const char*> allowed,
                  const std::string& where, bool as_data_error = false) {
    const auto fail = [&](const std::string& msg) -> void {
        if (as_data_error) throw DataError(msg);
        throw ConfigError(msg);
    };
    if (!obj.is_object()) fail(where + ": expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool found = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                found = true;
                break;
            }
        if (!found) fail(where + ": unknown key '" + it.key() + "'");
    }
}

template <typename T>
T get_as(const json& obj, const char* key, const std::string& where) {
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(where + ": bad value for '" + key + "': " + e.what());
    }
}

template <typename T>
void set_if_present(const json& obj, const char* key, T& target, const std::string& where) {
    if (obj.contains(key)) target = get_as<T>(obj, key, where);
}

json matrix_to_json(const Matd& m) {
    json rows = json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matd matrix_from_json(const json& j, const std::string& where) {
    if (!j.is_array()) throw DataError(where + ": expected an array of rows");
    const Index rows = static_cast<Index>(j.size());
    if (rows == 0) return Matd(0, 0);
    if (!j[0].is_array()) throw DataError(where + ": rows must be arrays");
    const Index cols = static_cast<Index>(j[0].size());
    Matd out(rows, cols);
    for (Index r = 0; r < rows; ++r) {
        const auto& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols)
            throw DataError(where + ": ragged rows");
        for (Index c = 0; c < cols; ++c) {
            const auto& v = row[static_cast<std::size_t>(c)];
            if (!v.is_number()) throw DataError(where + ": non-numeric entry");
            out(r, c) = v.get<double>();
        }
    }
    return out;
}

json vector_to_json(const Vecd& v) {
    json arr = json::array();
    for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

Vecd vector_from_json(const json& j, const std::string& where) {
    if (!j.is_array()) throw DataError(where + ": expected an array");
    Vecd out(static_cast<Index>(j.size()));
    for (Index i = 0; i < out.size(); ++i) {
        const auto& v = j[static_cast<std::size_t>(i)];
        if (!v.is_number()) throw DataError(where + ": non-numeric entry");
        out(i) = v.get<double>();
    }
    return out;
}

json bank_to_json(const RbfBankd& bank) {
    return json{{"dim_in", bank.dim_in},
                {"seed", bank.seed},
                {"centers", matrix_to_json(bank.centers)},
                {"widths", vector_to_json(bank.widths)}};
}

RbfBankd bank_from_json(const json& j) {
    require_keys(j, {"dim_in", "seed", "centers", "widths"}, "model bank",
                 /*as_data_error=*/true);
    RbfBankd bank;
    try {
        bank.dim_in = j.at("dim_in").get<Index>();
        bank.seed = j.at("seed").get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw DataError(std::string("model bank: ") + e.what());
    }
    bank.centers = matrix_from_json(j.at("centers"), "model bank centers");
    bank.widths = vector_from_json(j.at("widths"), "model bank widths");
    if (bank.dim_in < 1 || bank.centers.cols() != bank.dim_in ||
        bank.centers.rows() != bank.widths.size())
        throw DataError("model bank: inconsistent shapes");
    if (!bank.centers.allFinite() || !bank.widths.allFinite() || (bank.widths.array() <= 0.0).any())
        throw DataError("model bank: centers must be finite and widths positive");
    return bank;
}

struct CsvRow {
    std::string phase;
    Index trajectory = 0;
    Index t = 0;
    double x1 = 0, x2 = 0, x1n = 0, x2n = 0;
};

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

Index parse_index(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        if (pos != s.size() || v < 0) throw DataError("");
        return static_cast<Index>(v);
    } catch (...) {
        throw DataError(std::string("phase csv: bad ") + what + " field '" + s + "'");
    }
}

constexpr const char* kPhaseCsvHeader = "phase,trajectory,t,x1,x2,x1_next,x2_next";

PhaseSet rebuild_phase(const std::vector<CsvRow>& rows, Index n_trajectories,
                       const std::string& phase_name) {
    std::vector<std::vector<const CsvRow*>> by_traj(static_cast<std::size_t>(n_trajectories));
    for (const CsvRow& r : rows) {
        if (r.trajectory >= n_trajectories)
            throw DataError("phase csv: trajectory index out of range in " + phase_name);
        auto& group = by_traj[static_cast<std::size_t>(r.trajectory)];
        if (r.t != static_cast<Index>(group.size()))
            throw DataError("phase csv: non-contiguous t sequence in " + phase_name);
        group.push_back(&r);
    }

    PhaseSet out;
    Index total_pairs = 0;
    for (const auto& group : by_traj) {
        if (group.empty()) throw DataError("phase csv: missing trajectory in " + phase_name);
        total_pairs += static_cast<Index>(group.size());
    }
    Matd inputs(total_pairs, 2), targets(total_pairs, 2);
    Index row = 0;
    for (const auto& group : by_traj) {
        const Index steps = static_cast<Index>(group.size()) + 1;
        Trajectory traj;
        traj.states.resize(steps, 2);
        for (Index t = 0; t + 1 < steps; ++t) {
            const CsvRow& r = *group[static_cast<std::size_t>(t)];
            traj.states(t, 0) = r.x1;
            traj.states(t, 1) = r.x2;
            if (t > 0) {
                const CsvRow& prev = *group[static_cast<std::size_t>(t - 1)];
                if (prev.x1n != r.x1 || prev.x2n != r.x2)
                    throw DataError("phase csv: broken transition chain in " + phase_name);
            }
            inputs(row, 0) = r.x1;
            inputs(row, 1) = r.x2;
            targets(row, 0) = r.x1n;
            targets(row, 1) = r.x2n;
            ++row;
        }
        const CsvRow& last = *group.back();
        traj.states(steps - 1, 0) = last.x1n;
        traj.states(steps - 1, 1) = last.x2n;
        traj.init = traj.states.row(0).transpose();
        out.trajectories.push_back(std::move(traj));
    }
    out.pairs = Datasetd(std::move(inputs), std::move(targets));
    return out;
}

void write_phase_rows(std::ostream& os, const PhaseSet& phase, const char* name) {
    for (std::size_t k = 0; k < phase.trajectories.size(); ++k) {
        const Matd& states = phase.trajectories[k].states;
        for (Index t = 0; t + 1 < states.rows(); ++t) {
            os << name << ',' << k << ',' << t << ',' << format_double(states(t, 0)) << ','
               << format_double(states(t, 1)) << ',' << format_double(states(t + 1, 0)) << ','
               << format_double(states(t + 1, 1)) << '\n';
        }
    }
}

json aggregate_to_json(const Aggregate& a) {
    return json{{"mean", a.mean}, {"variance", a.variance}};
}

json results_to_json(const ModelResults& r) {
    json records = json::array();
    for (std::size_t i = 0; i < r.records.size(); ++i) {
        const RepetitionRecord& rec = r.records[i];
        records.push_back(json{{"repetition", i},
                               {"seed", rec.seed},
                               {"total_seconds", rec.total_seconds},
                               {"pinv_seconds", rec.pinv_seconds},
                               {"mse_train", rec.mse_train},
                               {"mse_gen", rec.mse_gen},
                               {"mse_sim", rec.mse_sim},
                               {"regressor_rank", rec.regressor_rank},
                               {"sim_truncated", rec.sim_truncated},
                               {"fit_failed", rec.fit_failed},
                               {"failure", rec.failure}});
    }
    return json{{"aggregates",
                 json{{"total_seconds", aggregate_to_json(r.total_seconds)},
                      {"pinv_seconds", aggregate_to_json(r.pinv_seconds)},
                      {"mse_train", aggregate_to_json(r.mse_train)},
                      {"mse_gen", aggregate_to_json(r.mse_gen)},
                      {"mse_sim", aggregate_to_json(r.mse_sim)}}},
                {"failed_count", r.failed_count},
                {"records", std::move(records)}};
}

void append_records_csv(std::ostream& os, const char* model, const ModelResults& r) {
    for (std::size_t i = 0; i < r.records.size(); ++i) {
        const RepetitionRecord& rec = r.records[i];
        std::string failure = rec.failure;
        for (char& ch : failure)
            if (ch == ',' || ch == '\n') ch = ';';
        os << model << ',' << i << ',' << rec.seed << ',' << format_double(rec.total_seconds)
           << ',' << format_double(rec.pinv_seconds) << ',' << format_double(rec.mse_train) << ','
           << format_double(rec.mse_gen) << ',' << format_double(rec.mse_sim) << ','
           << rec.regressor_rank << ',' << (rec.sim_truncated ? 1 : 0) << ','
           << (rec.fit_failed ? 1 : 0) << ',' << failure << '\n';
    }
}

std::string mean_var_cell(const Aggregate& a) {
    std::ostringstream os;
    os << std::scientific << std::setprecision(4) << a.mean << " (" << a.variance << ")";
    return os.str();
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& s) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw DataError("");
        return v;
    } catch (...) {
        throw DataError("bad numeric field '" + s + "'");
    }
}

json dist_to_json(const CenterDist& d) {
    if (const auto* n = std::get_if<NormalDist>(&d))
        return json{{"type", "normal"}, {"mean", n->mean}, {"variance", n->variance}};
    const auto& u = std::get<UniformDist>(d);
    return json{{"type", "uniform"}, {"lo", u.lo}, {"hi", u.hi}};
}

json dist_to_json(const WidthDist& d) {
    if (const auto* u = std::get_if<UniformDist>(&d))
        return json{{"type", "uniform"}, {"lo", u->lo}, {"hi", u->hi}};
    const auto& e = std::get<ExponentialDist>(d);
    return json{{"type", "exponential"}, {"rate", e.rate}};
}

CenterDist center_dist_from_json(const json& j) {
    const std::string type = get_as<std::string>(j, "type", "distribution");
    if (type == "normal") {
        require_keys(j, {"type", "mean", "variance"}, "normal distribution");
        NormalDist d;
        set_if_present(j, "mean", d.mean, "normal distribution");
        set_if_present(j, "variance", d.variance, "normal distribution");
        validate(d);
        return d;
    }
    if (type == "uniform") {
        require_keys(j, {"type", "lo", "hi"}, "uniform distribution");
        UniformDist d;
        set_if_present(j, "lo", d.lo, "uniform distribution");
        set_if_present(j, "hi", d.hi, "uniform distribution");
        validate(d);
        return d;
    }
    throw ConfigError("center distribution must be 'normal' or 'uniform', got '" + type + "'");
}

WidthDist width_dist_from_json(const json& j) {
    const std::string type = get_as<std::string>(j, "type", "distribution");
    if (type == "uniform") {
        require_keys(j, {"type", "lo", "hi"}, "uniform distribution");
        UniformDist d;
        set_if_present(j, "lo", d.lo, "uniform distribution");
        set_if_present(j, "hi", d.hi, "uniform distribution");
        WidthDist out = d;
        validate(out);
        return out;
    }
    if (type == "exponential") {
        require_keys(j, {"type", "rate"}, "exponential distribution");
        ExponentialDist d;
        set_if_present(j, "rate", d.rate, "exponential distribution");
        validate(d);
        return d;
    }
    throw ConfigError("width distribution must be 'uniform' or 'exponential', got '" + type + "'");
}

Index LoadedModel::dim_in() const {
    if (slm) return slm->dim_in();
    if (elm) return elm->dim_in();
    throw ContractViolation("LoadedModel: empty");
}

Index LoadedModel::dim_out() const {
    if (slm) return slm->dim_out();
    if (elm) return elm->dim_out();
    throw ContractViolation("LoadedModel: empty");
}

std::function<Vecd(const Vecd&)> LoadedModel::evaluator() const {
    if (slm) {
        return [p = *slm](const Vecd& x) { return eval_slm(p, x); };
    }
    if (elm) {
        return [p = *elm](const Vecd& x) { return eval_elm(p, x); };
    }
    throw ContractViolation("LoadedModel: empty");
}

namespace {

json random_spec_to_json(const RandomSpec& spec) {
    return json{{"center_dist", dist_to_json(spec.center_dist)},
                {"width_dist", dist_to_json(spec.width_dist)},
                {"seed", spec.seed}};
}

}  // namespace

json model_to_json(const SlmParamsd& p, const RandomSpec* spec) {
    json j{{"format_version", 1},
           {"kind", "slm"},
           {"dim_in", p.dim_in()},
           {"dim_out", p.dim_out()},
           {"count_models", p.count_models()},
           {"prng", prng_name()},
           {"bank", bank_to_json(p.bank)},
           {"gamma", matrix_to_json(p.gamma)}};
    if (spec) j["random_spec"] = random_spec_to_json(*spec);
    return j;
}

json model_to_json(const ElmParamsd& p, const RandomSpec* spec) {
    json j{{"format_version", 1},
           {"kind", "elm"},
           {"dim_in", p.dim_in()},
           {"dim_out", p.dim_out()},
           {"count_models", p.count_models()},
           {"prng", prng_name()},
           {"bank", bank_to_json(p.bank)},
           {"b_matrix", matrix_to_json(p.b_matrix)}};
    if (spec) j["random_spec"] = random_spec_to_json(*spec);
    return j;
}

LoadedModel model_from_json(const json& j) {
    if (!j.is_object()) throw DataError("model file: expected a JSON object");
    if (!j.contains("format_version") || !j.at("format_version").is_number_integer() ||
        j.at("format_version").get<int>() != 1)
        throw DataError("model file: unsupported format_version");
    const std::string kind = j.value("kind", std::string());
    const char* weights_key = kind == "slm" ? "gamma" : "b_matrix";
    require_keys(
        j, {"format_version", "kind", "dim_in", "dim_out", "count_models", "prng", "bank",
            "random_spec", weights_key},
        "model file", /*as_data_error=*/true);
    for (const char* key : {"dim_in", "dim_out", "count_models", "bank"})
        if (!j.contains(key)) throw DataError(std::string("model file: missing '") + key + "'");

    const RbfBankd bank = bank_from_json(j.at("bank"));
    Index dim_in = 0, dim_out = 0, count_models = 0;
    try {
        dim_in = j.at("dim_in").get<Index>();
        dim_out = j.at("dim_out").get<Index>();
        count_models = j.at("count_models").get<Index>();
    } catch (const json::exception& e) {
        throw DataError(std::string("model file: ") + e.what());
    }
    if (bank.dim_in != dim_in || bank.count_models() != count_models)
        throw DataError("model file: bank shape disagrees with declared dimensions");

    LoadedModel out;
    if (kind == "slm") {
        if (!j.contains("gamma")) throw DataError("model file: missing 'gamma'");
        Matd gamma = matrix_from_json(j.at("gamma"), "model gamma");
        if (gamma.rows() != (dim_in + 1) * count_models || gamma.cols() != dim_out)
            throw DataError("model file: gamma must be (n+1)h x m");
        out.slm = SlmParamsd{bank, std::move(gamma)};
    } else if (kind == "elm") {
        if (!j.contains("b_matrix")) throw DataError("model file: missing 'b_matrix'");
        Matd b = matrix_from_json(j.at("b_matrix"), "model b_matrix");
        if (b.rows() != count_models || b.cols() != dim_out)
            throw DataError("model file: b_matrix must be h x m");
        out.elm = ElmParamsd{bank, std::move(b)};
    } else {
        throw DataError("model file: kind must be 'slm' or 'elm'");
    }
    return out;
}

json vdp_config_to_json(const VdpConfig& cfg) {
    return json{{"lambda", cfg.lambda},
                {"dt", cfg.dt},
                {"steps", cfg.steps},
                {"n_trajectories", cfg.n_trajectories},
                {"init_dist", dist_to_json(cfg.init_dist)},
                {"seed", cfg.seed}};
}

VdpConfig vdp_config_from_json(const json& j) {
    require_keys(j, {"lambda", "dt", "steps", "n_trajectories", "init_dist", "seed"},
                 "vdp config");
    VdpConfig cfg;
    set_if_present(j, "lambda", cfg.lambda, "vdp config");
    set_if_present(j, "dt", cfg.dt, "vdp config");
    set_if_present(j, "steps", cfg.steps, "vdp config");
    set_if_present(j, "n_trajectories", cfg.n_trajectories, "vdp config");
    set_if_present(j, "seed", cfg.seed, "vdp config");
    if (j.contains("init_dist")) cfg.init_dist = center_dist_from_json(j.at("init_dist"));
    cfg.validate_or_throw();
    return cfg;
}

json experiment_config_to_json(const ExperimentConfig& cfg) {
    json j{{"model_kind", to_string(cfg.model_kind)},
           {"h_slm", cfg.h_slm},
           {"h_elm", cfg.h_elm},
           {"center_dist", dist_to_json(cfg.random_spec.center_dist)},
           {"width_dist", dist_to_json(cfg.random_spec.width_dist)},
           {"repetitions", cfg.repetitions},
           {"base_seed", cfg.base_seed},
           {"vdp", vdp_config_to_json(cfg.vdp)}};
    j["rank_tol"] = cfg.rank_tol ? json(*cfg.rank_tol) : json(nullptr);
    return j;
}

ExperimentConfig experiment_config_from_json(const json& j) {
    require_keys(j,
                 {"model_kind", "h_slm", "h_elm", "center_dist", "width_dist", "repetitions",
                  "base_seed", "rank_tol", "vdp"},
                 "experiment config");
    ExperimentConfig cfg;
    if (j.contains("model_kind"))
        cfg.model_kind =
            model_kind_from_string(get_as<std::string>(j, "model_kind", "experiment config"));
    set_if_present(j, "h_slm", cfg.h_slm, "experiment config");
    set_if_present(j, "h_elm", cfg.h_elm, "experiment config");
    set_if_present(j, "repetitions", cfg.repetitions, "experiment config");
    set_if_present(j, "base_seed", cfg.base_seed, "experiment config");
    if (j.contains("center_dist"))
        cfg.random_spec.center_dist = center_dist_from_json(j.at("center_dist"));
    if (j.contains("width_dist"))
        cfg.random_spec.width_dist = width_dist_from_json(j.at("width_dist"));
    if (j.contains("rank_tol") && !j.at("rank_tol").is_null())
        cfg.rank_tol = get_as<double>(j, "rank_tol", "experiment config");
    if (j.contains("vdp")) cfg.vdp = vdp_config_from_json(j.at("vdp"));
    cfg.validate_or_throw();
    return cfg;
}

void write_phase_csv(std::ostream& os, const PhaseData& data) {
    os << "# config " << vdp_config_to_json(data.config).dump() << '\n';
    os << kPhaseCsvHeader << '\n';
    write_phase_rows(os, data.learning, "learning");
    write_phase_rows(os, data.generalisation, "generalisation");
    write_phase_rows(os, data.simulation, "simulation");
}

PhaseData read_phase_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("# config ", 0) != 0)
        throw DataError("phase csv: missing '# config' line");
    json cfg_json;
    try {
        cfg_json = json::parse(line.substr(9));
    } catch (const json::exception& e) {
        throw DataError(std::string("phase csv: bad config json: ") + e.what());
    }
    PhaseData out;
    try {
        out.config = vdp_config_from_json(cfg_json);
    } catch (const ConfigError& e) {
        throw DataError(std::string("phase csv: ") + e.what());
    }

    if (!std::getline(is, line) || line != kPhaseCsvHeader)
        throw DataError("phase csv: missing or wrong header line");

    std::vector<CsvRow> learning, generalisation, simulation;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 7) throw DataError("phase csv: expected 7 fields per row");
        CsvRow row;
        row.phase = fields[0];
        row.trajectory = parse_index(fields[1], "trajectory");
        row.t = parse_index(fields[2], "t");
        row.x1 = parse_double(fields[3]);
        row.x2 = parse_double(fields[4]);
        row.x1n = parse_double(fields[5]);
        row.x2n = parse_double(fields[6]);
        if (row.phase == "learning")
            learning.push_back(row);
        else if (row.phase == "generalisation")
            generalisation.push_back(row);
        else if (row.phase == "simulation")
            simulation.push_back(row);
        else
            throw DataError("phase csv: unknown phase '" + row.phase + "'");
    }

    out.learning = rebuild_phase(learning, out.config.n_trajectories, "learning");
    out.generalisation = rebuild_phase(generalisation, out.config.n_trajectories, "generalisation");
    out.simulation = rebuild_phase(simulation, out.config.n_trajectories, "simulation");

    const Index expect_pairs = out.config.n_trajectories * (out.config.steps - 1);
    for (const PhaseSet* phase : {&out.learning, &out.generalisation, &out.simulation})
        if (phase->pairs.size() != expect_pairs)
            throw DataError("phase csv: pair count disagrees with config");
    return out;
}

void write_phase_csv_file(const std::string& path, const PhaseData& data) {
    std::ofstream os(path);
    if (!os) throw DataError("cannot open for writing: " + path);
    write_phase_csv(os, data);
    if (!os) throw DataError("write failed: " + path);
}

PhaseData read_phase_csv_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open: " + path);
    return read_phase_csv(is);
}

json report_to_json(const ExperimentReport& report) {
    json models = json::object();
    if (report.slm) models["slm"] = results_to_json(*report.slm);
    if (report.elm) models["elm"] = results_to_json(*report.elm);
    return json{{"config", experiment_config_to_json(report.config)},
                {"prng", prng_name()},
                {"models", std::move(models)}};
}

void write_records_csv(std::ostream& os, const ExperimentReport& report) {
    os << "# config " << experiment_config_to_json(report.config).dump() << "\n";
    os << "model,repetition,seed,total_seconds,pinv_seconds,mse_train,mse_gen,mse_sim,"
          "regressor_rank,sim_truncated,fit_failed,failure\n";
    if (report.slm) append_records_csv(os, "slm", *report.slm);
    if (report.elm) append_records_csv(os, "elm", *report.elm);
}

std::string format_summary_table(const ExperimentReport& report) {
    struct RowSpec {
        const char* label;
        Aggregate ModelResults::*field;
    };
    const RowSpec rows[] = {
        {"training MSE", &ModelResults::mse_train},
        {"generalisation MSE", &ModelResults::mse_gen},
        {"simulation MSE", &ModelResults::mse_sim},
        {"pinv time [s]", &ModelResults::pinv_seconds},
        {"total time [s]", &ModelResults::total_seconds},
    };

    std::ostringstream os;
    os << "repetitions " << report.config.repetitions << ", base seed "
       << report.config.base_seed << ", h_slm " << report.config.h_slm << ", h_elm "
       << report.config.h_elm << ", " << report.config.vdp.steps << " steps at dt "
       << format_double(report.config.vdp.dt) << '\n';
    os << std::left << std::setw(22) << "metric";
    if (report.slm) os << std::setw(28) << "SLM";
    if (report.elm) os << std::setw(28) << "ELM";
    os << '\n';
    for (const RowSpec& row : rows) {
        os << std::left << std::setw(22) << row.label;
        if (report.slm) os << std::setw(28) << mean_var_cell((*report.slm).*row.field);
        if (report.elm) os << std::setw(28) << mean_var_cell((*report.elm).*row.field);
        os << '\n';
    }
    os << "values are mean (population variance) over successful repetitions\n";
    if (report.slm && report.slm->failed_count > 0)
        os << "slm: " << report.slm->failed_count << " repetitions failed\n";
    if (report.elm && report.elm->failed_count > 0)
        os << "elm: " << report.elm->failed_count << " repetitions failed\n";
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path);
    if (!os) throw DataError("cannot open for writing: " + path);
    os << content;
    if (!os) throw DataError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open: " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return buf.str();
}

void write_json_file(const std::string& path, const json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

json read_json_file(const std::string& path) {
    try {
        return json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw DataError("bad json in " + path + ": " + e.what());
    }
}

}  // namespace slm
