#pragma once

#include <nlohmann/json_fwd.hpp>

#include "ultranet/embedding.hpp"
#include "ultranet/microlocal.hpp"
#include "ultranet/product.hpp"

namespace ultranet {

inline constexpr const char* kToolVersion = "ultranet 0.1.0";
inline constexpr int kConfigSchema = 1;

/// Everything one experiment run needs; validated against the module
/// preconditions before any computation.
struct ExperimentConfig {
    double s = 2.0;
    double ladder_base = 2.0;
    int ladder_j_lo = 1;
    int ladder_j_hi = 6;
    int grid_dim = 1;
    double grid_extent = M_PI;
    int grid_points = 4096;
    double mollifier_r1 = 6.0;
    double mollifier_r2 = 48.0;
    double mollifier_sigma = 2.0;
    int bins = 2;
    // thresholds
    double kappa_reg = 0.5;
    double rho_max = 1.0;
    double k_min = 3.0;
    double residual_cap = 0.5;
    double noise_floor = 1e-14;
    // fit window
    double fit_r_min_steps = 8.0;
    double fit_r_max_nyquist_frac = 0.5;
    int fit_shells_per_octave = 2;
    int fit_min_samples = 30;
    int alpha_max = 2;
    unsigned seed = 7;
    int trials = 100;
    std::vector<DistributionSpec> corpus;
    std::vector<std::string> pipeline;

    /// Throws ConfigError naming the offending field.
    void validate() const;

    Grid grid() const { return Grid(grid_dim, grid_extent, grid_points); }
    GevreyOrder order() const { return GevreyOrder(s); }
    /// Ladder truncated by the grid compatibility rule eps >= 4 spacing.
    EpsilonLadder ladder() const;
    FitOptions fit_options() const;
    GrowthOptions growth_options() const;
    LocalizerOptions localizer_options() const;
};

nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

nlohmann::json spec_to_json(const DistributionSpec& spec);
DistributionSpec spec_from_json(const nlohmann::json& j);

}  // namespace ultranet
