#include "ultranet/config.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace ultranet {

using nlohmann::json;

void ExperimentConfig::validate() const {
    if (!(s > 1.0)) throw ConfigError("config.s: GevreyOrder requires s > 1");
    if (!(ladder_base > 1.0)) throw ConfigError("config.ladder.base: must exceed 1");
    if (ladder_j_lo < 1) throw ConfigError("config.ladder.j_lo: epsilon must stay below 1");
    if (ladder_j_hi < ladder_j_lo + 3)
        throw ConfigError("config.ladder.j_hi: EpsilonLadder needs at least 4 entries");
    if (grid_dim != 1 && grid_dim != 2) throw ConfigError("config.grid.dim: must be 1 or 2");
    if (!(grid_extent > 0.0)) throw ConfigError("config.grid.extent: must be positive");
    if (grid_points < 16 || (grid_points & (grid_points - 1)) != 0)
        throw ConfigError("config.grid.points: must be a power of two >= 16");
    if (!(0.0 < mollifier_r1 && mollifier_r1 < mollifier_r2))
        throw ConfigError("config.mollifier: GevreyBump requires 0 < r1 < r2");
    Grid g(grid_dim, grid_extent, grid_points);
    if (!(mollifier_r2 < g.nyquist()))
        throw ConfigError("config.mollifier.r2: reaches the grid Nyquist frequency");
    if (grid_dim == 1 ? bins != 2 : (bins < 4 || bins % 2 != 0))
        throw ConfigError("config.bins: DirectionBins wants 2 (1d) or an even count (2d)");
    if (!(kappa_reg > 0.0)) throw ConfigError("config.thresholds.kappa_reg: must be positive");
    if (!(rho_max > 0.0)) throw ConfigError("config.thresholds.rho_max: must be positive");
    if (!(k_min > 0.0)) throw ConfigError("config.thresholds.k_min: must be positive");
    if (!(noise_floor > 0.0 && noise_floor < 1.0))
        throw ConfigError("config.thresholds.noise_floor: must lie in (0,1)");
    if (!(fit_r_min_steps >= 1.0)) throw ConfigError("config.fit.r_min_steps: must be >= 1");
    if (!(fit_r_max_nyquist_frac > 0.0 && fit_r_max_nyquist_frac <= 1.0))
        throw ConfigError("config.fit.r_max_nyquist_frac: must lie in (0,1]");
    if (fit_shells_per_octave < 1 || fit_shells_per_octave > 16)
        throw ConfigError("config.fit.shells_per_octave: must lie in 1..16");
    if (alpha_max < 0 || alpha_max > 8) throw ConfigError("config.alpha_max: must lie in 0..8");
    if (trials < 1) throw ConfigError("config.trials: must be positive");
    ladder();  // throws when the compatibility rule empties the ladder
}

EpsilonLadder ExperimentConfig::ladder() const {
    Grid g = grid();
    std::vector<double> v;
    for (int j = ladder_j_lo; j <= ladder_j_hi; ++j) {
        double eps = std::pow(ladder_base, -j);
        if (eps < 4.0 * g.spacing()) break;
        v.push_back(eps);
    }
    if (v.size() < 4)
        throw ConfigError("config.ladder: fewer than 4 entries survive the compatibility rule "
                          "eps >= 4 spacing");
    return EpsilonLadder(std::move(v));
}

FitOptions ExperimentConfig::fit_options() const {
    FitOptions o;
    o.r_min_steps = fit_r_min_steps;
    o.r_max_nyquist_frac = fit_r_max_nyquist_frac;
    o.shells_per_octave = fit_shells_per_octave;
    o.noise_floor_rel = noise_floor;
    o.kappa_reg = kappa_reg;
    o.rho_max = rho_max;
    o.min_samples = fit_min_samples;
    return o;
}

GrowthOptions ExperimentConfig::growth_options() const {
    GrowthOptions o;
    o.k_min = k_min;
    o.residual_cap = residual_cap;
    return o;
}

LocalizerOptions ExperimentConfig::localizer_options() const {
    return LocalizerOptions{};
}

json spec_to_json(const DistributionSpec& spec) {
    json j;
    j["kind"] = to_string(spec.kind);
    j["location"] = {spec.location[0], spec.location[1]};
    if (spec.kind == DistributionKind::line_delta_2d) j["axis"] = spec.axis;
    if (spec.kind == DistributionKind::gevrey_bump_function) {
        j["width"] = spec.width;
        j["amplitude"] = spec.amplitude;
    }
    if (spec.kind == DistributionKind::finite_linear_combination) {
        json terms = json::array();
        for (const auto& [c, child] : spec.terms)
            terms.push_back({{"re", c.real()}, {"im", c.imag()}, {"spec", spec_to_json(child)}});
        j["terms"] = terms;
    }
    return j;
}

DistributionSpec spec_from_json(const json& j) {
    DistributionSpec spec;
    if (!j.contains("kind")) throw ConfigError("corpus entry: missing 'kind'");
    spec.kind = distribution_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("location")) {
        auto loc = j.at("location");
        spec.location[0] = loc.size() > 0 ? loc[0].get<double>() : 0.0;
        spec.location[1] = loc.size() > 1 ? loc[1].get<double>() : 0.0;
    }
    spec.axis = j.value("axis", 0);
    spec.width = j.value("width", 1.5);
    spec.amplitude = j.value("amplitude", 1.0);
    if (spec.kind == DistributionKind::finite_linear_combination) {
        if (!j.contains("terms")) throw ConfigError("corpus entry: combination without 'terms'");
        for (const auto& t : j.at("terms"))
            spec.terms.emplace_back(Complex(t.value("re", 1.0), t.value("im", 0.0)),
                                    spec_from_json(t.at("spec")));
    }
    return spec;
}

json to_json(const ExperimentConfig& c) {
    json j;
    j["schema"] = kConfigSchema;
    j["s"] = c.s;
    j["ladder"] = {{"base", c.ladder_base}, {"j_lo", c.ladder_j_lo}, {"j_hi", c.ladder_j_hi}};
    j["grid"] = {{"dim", c.grid_dim}, {"extent", c.grid_extent}, {"points", c.grid_points}};
    j["mollifier"] = {{"r1", c.mollifier_r1}, {"r2", c.mollifier_r2}, {"sigma", c.mollifier_sigma}};
    j["bins"] = c.bins;
    j["thresholds"] = {{"kappa_reg", c.kappa_reg},
                       {"rho_max", c.rho_max},
                       {"k_min", c.k_min},
                       {"residual_cap", c.residual_cap},
                       {"noise_floor", c.noise_floor}};
    j["fit"] = {{"r_min_steps", c.fit_r_min_steps},
                {"r_max_nyquist_frac", c.fit_r_max_nyquist_frac},
                {"shells_per_octave", c.fit_shells_per_octave},
                {"min_samples", c.fit_min_samples}};
    j["alpha_max"] = c.alpha_max;
    j["seed"] = c.seed;
    j["trials"] = c.trials;
    json corpus = json::array();
    for (const auto& spec : c.corpus) corpus.push_back(spec_to_json(spec));
    j["corpus"] = corpus;
    j["pipeline"] = c.pipeline;
    return j;
}

ExperimentConfig config_from_json(const json& j) {
    if (j.value("schema", kConfigSchema) != kConfigSchema)
        throw ConfigError("config.schema: unsupported schema version");
    ExperimentConfig c;
    c.s = j.value("s", c.s);
    if (j.contains("ladder")) {
        const auto& l = j.at("ladder");
        c.ladder_base = l.value("base", c.ladder_base);
        c.ladder_j_lo = l.value("j_lo", c.ladder_j_lo);
        c.ladder_j_hi = l.value("j_hi", c.ladder_j_hi);
    }
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        c.grid_dim = g.value("dim", c.grid_dim);
        c.grid_extent = g.value("extent", c.grid_extent);
        c.grid_points = g.value("points", c.grid_points);
    }
    if (j.contains("mollifier")) {
        const auto& m = j.at("mollifier");
        c.mollifier_r1 = m.value("r1", c.mollifier_r1);
        c.mollifier_r2 = m.value("r2", c.mollifier_r2);
        c.mollifier_sigma = m.value("sigma", c.mollifier_sigma);
    }
    c.bins = j.value("bins", c.bins);
    if (j.contains("thresholds")) {
        const auto& t = j.at("thresholds");
        c.kappa_reg = t.value("kappa_reg", c.kappa_reg);
        c.rho_max = t.value("rho_max", c.rho_max);
        c.k_min = t.value("k_min", c.k_min);
        c.residual_cap = t.value("residual_cap", c.residual_cap);
        c.noise_floor = t.value("noise_floor", c.noise_floor);
    }
    if (j.contains("fit")) {
        const auto& f = j.at("fit");
        c.fit_r_min_steps = f.value("r_min_steps", c.fit_r_min_steps);
        c.fit_r_max_nyquist_frac = f.value("r_max_nyquist_frac", c.fit_r_max_nyquist_frac);
        c.fit_shells_per_octave = f.value("shells_per_octave", c.fit_shells_per_octave);
        c.fit_min_samples = f.value("min_samples", c.fit_min_samples);
    }
    c.alpha_max = j.value("alpha_max", c.alpha_max);
    c.seed = j.value("seed", c.seed);
    c.trials = j.value("trials", c.trials);
    if (j.contains("corpus"))
        for (const auto& e : j.at("corpus")) c.corpus.push_back(spec_from_json(e));
    if (j.contains("pipeline"))
        c.pipeline = j.at("pipeline").get<std::vector<std::string>>();
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("config parse error: " + std::string(e.what()));
    }
    return config_from_json(j);
}

}  // namespace ultranet
