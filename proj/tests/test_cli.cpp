#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "ultranet/report.hpp"

using namespace ultranet;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("ultranet_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

nlohmann::json load_json(const fs::path& p) {
    std::ifstream f(p);
    REQUIRE(f.good());
    nlohmann::json j;
    f >> j;
    return j;
}

int run_cli(const std::string& args) {
    std::string cmd = std::string(ULTRANET_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("config validation names the offending field") {
    ExperimentConfig c = stage_defaults("classify");
    c.s = 1.0;
    try {
        c.validate();
        FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("GevreyOrder") != std::string::npos);
        CHECK(std::string(e.what()).find("config.s") != std::string::npos);
    }

    c = stage_defaults("classify");
    c.grid_points = 1000;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = stage_defaults("classify");
    c.mollifier_r2 = 1e9;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = stage_defaults("classify");
    c.ladder_j_hi = c.ladder_j_lo + 1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("config json round trip") {
    ExperimentConfig c = stage_defaults("sigma");
    c.corpus.push_back(DistributionSpec::bump(0.3, 1.4, 2.0));
    nlohmann::json j = to_json(c);
    ExperimentConfig back = config_from_json(j);
    CHECK(to_json(back) == j);
}

TEST_CASE("net container round trip") {
    Grid grid(1, M_PI, 64);
    EpsilonLadder ladder = EpsilonLadder::geometric(1, 4);
    SampledNet net = net_from_closure(GevreyOrder(2.0), ladder, grid,
                                      [](double e, std::array<double, 2> x) {
                                          return Complex(std::sin(x[0]), e);
                                      });
    fs::path dir = fresh_dir("netio");
    std::string path = (dir / "net.unet").string();
    save_net(net, path);
    SampledNet back = load_net(path);
    CHECK(back.grid == net.grid);
    CHECK(back.ladder == net.ladder);
    for (std::size_t j = 0; j < net.slice_count(); ++j)
        for (int i = 0; i < grid.points(); ++i)
            CHECK(back.slices[j][i] == net.slices[j][i]);
}

TEST_CASE("classify pipeline runs and reports") {
    ExperimentConfig c = stage_defaults("classify");
    c.grid_points = 2048;  // keep the unit test quick
    c.ladder_j_hi = 7;
    fs::path dir = fresh_dir("classify");
    RunReport rep = run_pipeline(c, dir.string());
    CHECK(rep.pass);
    CHECK(fs::exists(dir / "report.json"));
    CHECK(fs::exists(dir / "classify" / "verdicts.csv"));
    CHECK(fs::exists(dir / "plots" / "indicator_curves.svg"));
    CHECK_FALSE(fs::exists(dir / "FAILED"));

    nlohmann::json doc = load_json(dir / "report.json");
    CHECK(doc["pass"] == true);
    CHECK(doc["stages"]["classify"]["nets"].size() == 3);

    SUBCASE("determinism modulo timings") {
        fs::path dir2 = fresh_dir("classify2");
        RunReport rep2 = run_pipeline(c, dir2.string());
        nlohmann::json a = rep.document;
        nlohmann::json b = rep2.document;
        a.erase("timings");
        b.erase("timings");
        CHECK(a == b);
    }
    SUBCASE("the echoed config reproduces the run") {
        ExperimentConfig echoed = config_from_json(doc["config"]);
        fs::path dir3 = fresh_dir("classify3");
        RunReport rep3 = run_pipeline(echoed, dir3.string());
        nlohmann::json a = rep.document;
        nlohmann::json b = rep3.document;
        a.erase("timings");
        b.erase("timings");
        CHECK(a == b);
    }
}

TEST_CASE("lemma pipeline is seeded and deterministic") {
    ExperimentConfig c = stage_defaults("lemma-trials");
    c.trials = 10;
    c.seed = 3;
    fs::path dir = fresh_dir("lemma");
    RunReport rep = run_pipeline(c, dir.string());
    CHECK(rep.pass);
    CHECK(rep.document["stages"]["lemma-trials"]["exact_matches"] == 10);
}

TEST_CASE("cli binary") {
    fs::path dir = fresh_dir("cli");
    SUBCASE("unknown flags exit nonzero with usage") {
        CHECK(run_cli("classify --definitely-not-a-flag 3") != 0);
    }
    SUBCASE("bad config values exit 1") {
        CHECK(run_cli("classify --s 1.0 --out-dir " + (dir / "bad").string()) == 1);
    }
    SUBCASE("lemma-trials subcommand succeeds") {
        CHECK(run_cli("lemma-trials --trials 5 --seed 7 --out-dir " +
                      (dir / "lemma").string()) == 0);
        CHECK(fs::exists(dir / "lemma" / "report.json"));
    }
    SUBCASE("classify subcommand succeeds and honors --spec") {
        CHECK(run_cli("classify --grid-n 4096 --ladder-jmax 7 --spec dirac --out-dir " +
                      (dir / "cls").string()) == 0);
        nlohmann::json doc = load_json(dir / "cls" / "report.json");
        bool found_dirac = false;
        for (const auto& n : doc["stages"]["classify"]["nets"])
            if (n["net"].get<std::string>().find("dirac") != std::string::npos) {
                found_dirac = true;
                CHECK(n["class"] == "moderate");
            }
        CHECK(found_dirac);
    }
}
