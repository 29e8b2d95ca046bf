#pragma once

#include <map>

#include <nlohmann/json.hpp>

#include "ultranet/config.hpp"

namespace ultranet {

/// One pipeline stage's outputs: a JSON summary for report.json, CSV/SVG
/// artifacts keyed by file name, and the conjunction of its checks.
struct StageOutputs {
    nlohmann::json summary;
    bool pass = true;
    std::map<std::string, std::string> csv;
    std::map<std::string, std::string> svg;
};

StageOutputs run_classify_stage(const ExperimentConfig& config);
StageOutputs run_mollifier_stage(const ExperimentConfig& config);
StageOutputs run_embed_stage(const ExperimentConfig& config);
StageOutputs run_sigma_stage(const ExperimentConfig& config);
StageOutputs run_wavefront_stage(const ExperimentConfig& config);
StageOutputs run_product_stage(const ExperimentConfig& config);
StageOutputs run_lemma_stage(const ExperimentConfig& config);

/// Known stage names in their canonical order.
const std::vector<std::string>& known_stages();

/// Per-stage tuned default configurations (documented in the README).
ExperimentConfig stage_defaults(const std::string& stage);

struct RunReport {
    nlohmann::json document;
    bool pass = true;
};

/// Execute config.pipeline, write report.json, per-stage CSV files and SVG
/// plots under out_dir. Partial outputs are flushed with a FAILED marker when
/// a stage throws.
RunReport run_pipeline(const ExperimentConfig& config, const std::string& out_dir);

/// Self-describing binary container for one net: a JSON header line followed
/// by little-endian re/im doubles, row-major per ladder entry.
void save_net(const SampledNet& net, const std::string& path);
SampledNet load_net(const std::string& path);

/// Minimal self-contained SVG plotting used for the report artifacts.
std::string svg_line_plot(const std::string& title,
                          const std::vector<std::pair<std::string,
                                                      std::vector<std::pair<double, double>>>>&
                              series);
std::string svg_cell_map(const std::string& title, const WavefrontEstimate& wf);

}  // namespace ultranet
