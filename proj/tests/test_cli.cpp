#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "slm/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kCli = SLM_CLI_PATH;

int run(const std::string& args) {
    const int status = std::system((kCli + " " + args + " > /dev/null 2>&1").c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

std::string run_capture(const std::string& args, const fs::path& dir) {
    const fs::path out = dir / "stdout.txt";
    const int status =
        std::system((kCli + " " + args + " > " + out.string() + " 2>/dev/null").c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    REQUIRE(WEXITSTATUS(status) == 0);
    return slm::read_text_file(out.string());
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("slm_cli_test_" + std::to_string(static_cast<long>(::getpid())));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const char* name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("gen-data, train, eval, and plot-data chain together") {
    TempDir tmp;
    const std::string phases = tmp.file("phases.csv");
    const std::string model = tmp.file("model.json");
    const std::string fit = tmp.file("fit.json");
    const std::string metrics = tmp.file("metrics.json");
    const std::string plot = tmp.file("plot.csv");

    REQUIRE(run("gen-data --quick --seed 3 --out " + phases) == 0);
    REQUIRE(fs::exists(phases));
    const slm::PhaseData data = slm::read_phase_csv_file(phases);
    CHECK(data.learning.pairs.size() == 4 * 149);  // quick preset: 4 trajectories, 150 steps

    REQUIRE(run("train --data " + phases + " --model slm --hidden 12 --seed 5 --out " + model +
                " --report " + fit) == 0);
    const json fit_json = slm::read_json_file(fit);
    CHECK(fit_json.at("model_kind") == "slm");
    CHECK(fit_json.at("h") == 12);
    CHECK(fit_json.at("train_mse").get<double>() >= 0.0);

    const json model_json = slm::read_json_file(model);
    CHECK(model_json.at("random_spec").at("seed") == 5);  // reproducibility echo
    const slm::LoadedModel loaded = slm::model_from_json(model_json);
    REQUIRE(loaded.slm.has_value());
    CHECK(loaded.slm->count_models() == 12);

    REQUIRE(run("eval --data " + phases + " --model-file " + model + " --out " + metrics) == 0);
    const json m = slm::read_json_file(metrics);
    CHECK(m.at("mode") == "both");
    CHECK(m.at("data_config").at("seed") == 3);
    CHECK(m.at("mse_train").get<double>() >= 0.0);
    CHECK(m.at("mse_gen").get<double>() >= 0.0);
    CHECK(m.at("mse_sim").get<double>() >= 0.0);

    REQUIRE(run("eval --data " + phases + " --model-file " + model + " --mode onestep --out " +
                metrics) == 0);
    const json m1 = slm::read_json_file(metrics);
    CHECK(m1.at("mode") == "onestep");
    CHECK(m1.contains("mse_gen"));
    CHECK(!m1.contains("mse_sim"));

    REQUIRE(run("eval --data " + phases + " --model-file " + model + " --mode rollout --out " +
                metrics) == 0);
    const json m2 = slm::read_json_file(metrics);
    CHECK(m2.contains("mse_sim"));
    CHECK(!m2.contains("mse_train"));

    REQUIRE(run("plot-data --data " + phases + " --model-file " + model + " --out " + plot) == 0);
    std::ifstream is(plot);
    std::string config_line, header;
    std::getline(is, config_line);
    std::getline(is, header);
    CHECK(config_line.rfind("# config ", 0) == 0);
    CHECK(header == "section,index,step,x1,x2,width");
    int centers = 0, rollouts = 0, truth = 0;
    for (std::string line; std::getline(is, line);) {
        if (line.rfind("centers,", 0) == 0) ++centers;
        if (line.rfind("rollout,", 0) == 0) ++rollouts;
        if (line.rfind("learning,", 0) == 0) ++truth;
    }
    CHECK(centers == 12);
    CHECK(truth == 4 * 150);
    CHECK(rollouts > 0);
}

TEST_CASE("training an elm through the cli works") {
    TempDir tmp;
    const std::string phases = tmp.file("phases.csv");
    const std::string model = tmp.file("elm.json");
    REQUIRE(run("gen-data --quick --seed 9 --out " + phases) == 0);
    REQUIRE(run("train --data " + phases + " --model elm --hidden 20 --seed 4 --out " + model) == 0);
    const slm::LoadedModel loaded = slm::model_from_json(slm::read_json_file(model));
    REQUIRE(loaded.elm.has_value());
    CHECK(loaded.elm->count_models() == 20);
}

TEST_CASE("retraining with the same seed reproduces the model file bytes") {
    TempDir tmp;
    const std::string phases = tmp.file("phases.csv");
    REQUIRE(run("gen-data --quick --seed 11 --out " + phases) == 0);
    const std::string a = tmp.file("a.json"), b = tmp.file("b.json");
    REQUIRE(run("train --data " + phases + " --hidden 8 --seed 6 --out " + a) == 0);
    REQUIRE(run("train --data " + phases + " --hidden 8 --seed 6 --out " + b) == 0);
    CHECK(slm::read_text_file(a) == slm::read_text_file(b));
    CHECK(run("train --data " + phases + " --hidden 0 --out " + a) == 2);
}

TEST_CASE("gen-data is byte-deterministic in the seed") {
    TempDir tmp;
    const std::string a = tmp.file("a.csv"), b = tmp.file("b.csv"), c = tmp.file("c.csv");
    REQUIRE(run("gen-data --quick --seed 7 --out " + a) == 0);
    REQUIRE(run("gen-data --quick --seed 7 --out " + b) == 0);
    REQUIRE(run("gen-data --quick --seed 8 --out " + c) == 0);
    CHECK(slm::read_text_file(a) == slm::read_text_file(b));
    CHECK(slm::read_text_file(a) != slm::read_text_file(c));
}

TEST_CASE("config print-defaults emits a parseable default config") {
    TempDir tmp;
    const std::string text = run_capture("config print-defaults", tmp.path);
    const json j = json::parse(text);
    CHECK(j.at("h_slm") == 100);
    CHECK(j.at("h_elm") == 300);
    CHECK(j.at("repetitions") == 100);
    CHECK(j.at("vdp").at("steps") == 1000);
    CHECK(j.at("vdp").at("dt") == 0.01);
    // The printed defaults re-parse into the same config.
    CHECK(slm::experiment_config_to_json(slm::experiment_config_from_json(j)) == j);
}

TEST_CASE("bad configuration exits with code 2") {
    TempDir tmp;
    const std::string cfg = tmp.file("bad.json");
    slm::write_text_file(cfg, R"({"vdp": {"dt": 0}})");
    CHECK(run("gen-data --config " + cfg + " --out " + tmp.file("x.csv")) == 2);

    slm::write_text_file(cfg, R"({"h_slmm": 4})");
    CHECK(run("bench --config " + cfg) == 2);

    CHECK(run("--no-such-flag") == 2);
    CHECK(run("") == 2);  // a subcommand is required
    CHECK(run("train --data nope.csv --model svm") == 2);
}

TEST_CASE("missing or broken data exits with code 3") {
    TempDir tmp;
    CHECK(run("eval --data " + tmp.file("absent.csv") + " --model-file " +
              tmp.file("absent.json")) == 3);
    CHECK(run("train --data " + tmp.file("absent.csv")) == 3);

    const std::string garbage = tmp.file("garbage.csv");
    slm::write_text_file(garbage, "not,a,phase,file\n");
    CHECK(run("train --data " + garbage) == 3);
}

TEST_CASE("check subcommand passes on the default seed") {
    TempDir tmp;
    const std::string text = run_capture("check --quick --seed 1", tmp.path);
    CHECK(text.find("PASS  rank") != std::string::npos);
    CHECK(text.find("PASS  interpolation") != std::string::npos);
    CHECK(text.find("PASS  equivalence") != std::string::npos);
    CHECK(text.find("PASS  distinct-norms") != std::string::npos);
    CHECK(text.find("FAIL") == std::string::npos);
}

TEST_CASE("check suites run individually with per-instance diagnostics") {
    TempDir tmp;
    const std::string rank = run_capture("check rank --seeds 5 --seed 1", tmp.path);
    CHECK(rank.find("PASS  rank: 5/5") != std::string::npos);
    CHECK(rank.find("rank ") != std::string::npos);  // per-instance lines

    const std::string interp =
        run_capture("check interpolation --N 12 --n 1 --seeds 5 --seed 1", tmp.path);
    CHECK(interp.find("PASS  interpolation: 5/5 exact") != std::string::npos);
    CHECK(interp.find("n=1 h=6 N=12") != std::string::npos);
    CHECK(interp.find("cond ") != std::string::npos);

    const std::string equiv = run_capture("check equivalence --quick --seed 1", tmp.path);
    CHECK(equiv.find("max relative deviation") != std::string::npos);

    CHECK(run("check rank --N 12") == 2);    // pins only apply to interpolation
    CHECK(run("check interpolation --N 7") == 2);  // not a multiple of n+1
    CHECK(run("check typo") == 2);
}

TEST_CASE("bench --quick writes report, records, and summary") {
    TempDir tmp;
    const std::string out = (tmp.path / "bench").string();
    REQUIRE(run("bench --quick --seed 2 --out " + out) == 0);
    const json report = slm::read_json_file(out + "/report.json");
    CHECK(report.at("models").at("slm").at("records").size() == 3);  // quick: 3 repetitions
    CHECK(report.at("models").at("elm").at("records").size() == 3);
    CHECK(report.at("config").at("h_slm") == 20);
    const std::string summary = slm::read_text_file(out + "/summary.txt");
    CHECK(summary.find("training MSE") != std::string::npos);
    const std::string records = slm::read_text_file(out + "/records.csv");
    CHECK(records.rfind("# config ", 0) == 0);
    CHECK(records.find("model,repetition,seed") != std::string::npos);
    CHECK(summary.find("base seed 2") != std::string::npos);
}
