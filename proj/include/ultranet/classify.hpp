#pragma once

#include "ultranet/sampled_net.hpp"

namespace ultranet {

enum class GrowthClass { negligible, moderate, non_moderate };

const char* to_string(GrowthClass c);

/// Classification of one net together with the fitted growth constants.
///
/// indicator_series holds (eps, G(eps)) for alpha = 0 with
/// G(eps) = eps^{1/(2s-1)} ln sup |f_eps|; a sup of zero is encoded as -inf.
struct GrowthVerdict {
    GrowthClass cls = GrowthClass::moderate;
    /// Max over alpha of the least-squares slope of ln sup |d^a f_eps| against
    /// eps^{-1/(2s-1)}, clamped at zero.
    double fitted_k = 0.0;
    /// ln C offset of the worst-alpha fit.
    double fitted_C = 0.0;
    /// Worst residual (rms, log units) over the per-alpha growth fits.
    double fit_residual = 0.0;
    std::vector<std::pair<double, double>> indicator_series;
};

struct GrowthOptions {
    /// Decision thresholds; see the classifier notes in classify.cpp.
    double k_min = 3.0;
    double residual_cap = 0.5;
};

/// Indicator series G(eps) = eps^{1/(2s-1)} ln sup_region |d^alpha f_eps|.
/// The sup is the max over grid sites inside the region.
std::vector<std::pair<double, double>> growth_indicator(const SampledNet& net,
                                                        const MultiIndex& alpha,
                                                        const Box& region, int alpha_cap = 8);

/// Moderate / negligible / non-moderate decision over all |alpha| <= alpha_max.
GrowthVerdict classify_net(const SampledNet& net, int alpha_max, const Box& region,
                           const GrowthOptions& opts = {});

/// Same decision for a scalar net (single-point region, alpha = 0).
GrowthVerdict classify_scalar(const GeneralizedScalar& x, const GrowthOptions& opts = {});

/// The negligibility surrogate applied to a raw sup series: strictly
/// decreasing indicator on the last third of the ladder, final value below
/// -k_min. Zero sups count as "below everything".
bool negligible_sup_series(const GevreyOrder& order, const EpsilonLadder& ladder,
                           const std::vector<double>& sups, double k_min);

}  // namespace ultranet
