#include <CLI11.hpp>

#include <iostream>

#include "ultranet/report.hpp"

using namespace ultranet;

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir = "out";
    double s = 0.0;
    int grid_n = 0;
    int grid_dim = 0;
    int ladder_jmax = 0;
    int bins = 0;
    int trials = 0;
    long long seed = -1;
    std::string spec_name;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "JSON config file (stage defaults otherwise)");
    cmd->add_option("--out-dir", f.out_dir, "output directory");
    cmd->add_option("--s", f.s, "Gevrey order s > 1");
    cmd->add_option("--grid-n", f.grid_n, "grid points per axis (power of two)");
    cmd->add_option("--grid-dim", f.grid_dim, "grid dimension (1 or 2)");
    cmd->add_option("--ladder-jmax", f.ladder_jmax, "finest ladder exponent (eps = 2^-j)");
    cmd->add_option("--bins", f.bins, "direction bin count");
    cmd->add_option("--trials", f.trials, "trial count (lemma-trials)");
    cmd->add_option("--seed", f.seed, "random seed (lemma-trials)");
    cmd->add_option("--spec", f.spec_name,
                    "corpus override: dirac | heaviside | boundary_value_minus | "
                    "boundary_value_plus | line_delta_2d | gevrey_bump_function");
}

ExperimentConfig make_config(const std::string& stage, const CommonFlags& f) {
    ExperimentConfig c =
        f.config_path.empty() ? stage_defaults(stage) : load_config(f.config_path);
    c.pipeline = {stage};
    if (f.s > 0.0) c.s = f.s;
    if (f.grid_n > 0) c.grid_points = f.grid_n;
    if (f.grid_dim > 0) c.grid_dim = f.grid_dim;
    if (f.ladder_jmax > 0) c.ladder_j_hi = f.ladder_jmax;
    if (f.bins > 0) c.bins = f.bins;
    if (f.trials > 0) c.trials = f.trials;
    if (f.seed >= 0) c.seed = static_cast<unsigned>(f.seed);
    if (!f.spec_name.empty()) {
        DistributionSpec spec;
        spec.kind = distribution_kind_from_string(f.spec_name);
        if (spec.kind == DistributionKind::gevrey_bump_function) spec.width = 2.0;
        c.corpus = {spec};
        if (stage == "product-check") c.corpus.push_back(spec);
    }
    if (f.grid_dim == 2) {
        // sensible two-dimensional defaults when the caller only flips the dim
        if (f.grid_n == 0) c.grid_points = 512;
        if (f.bins == 0) c.bins = 16;
        if (c.mollifier_r2 >= Grid(2, c.grid_extent, c.grid_points).nyquist()) {
            c.mollifier_r1 = 3.0;
            c.mollifier_r2 = 12.0;
        }
    }
    c.validate();
    return c;
}

int run_stage(const std::string& stage, const CommonFlags& f) {
    ExperimentConfig c = make_config(stage, f);
    RunReport report = run_pipeline(c, f.out_dir);
    std::cout << (report.pass ? "PASS" : "FAIL") << "  report: " << f.out_dir
              << "/report.json\n";
    return report.pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ultranet: epsilon-indexed net calculus with spectral wavefront estimation"};
    app.require_subcommand(1);

    std::map<std::string, CommonFlags> flags;
    std::string run_config;
    std::string run_out = "out";

    CLI::App* run_cmd = app.add_subcommand("run", "execute the pipeline of a config file");
    run_cmd->add_option("--config", run_config, "JSON config file")->required();
    run_cmd->add_option("--out-dir", run_out, "output directory");

    for (const std::string& stage : known_stages()) {
        std::string help = "run the " + stage + " stage";
        CLI::App* cmd = app.add_subcommand(stage, help);
        add_common(cmd, flags[stage]);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);  // prints usage; nonzero on bad flags
    }

    try {
        if (run_cmd->parsed()) {
            ExperimentConfig c = load_config(run_config);
            if (c.pipeline.empty())
                throw ConfigError("config.pipeline: empty; nothing to run");
            RunReport report = run_pipeline(c, run_out);
            std::cout << (report.pass ? "PASS" : "FAIL") << "  report: " << run_out
                      << "/report.json\n";
            return report.pass ? 0 : 2;
        }
        for (const std::string& stage : known_stages())
            if (app.get_subcommand(stage)->parsed()) return run_stage(stage, flags[stage]);
        std::cerr << "no subcommand selected\n";
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
