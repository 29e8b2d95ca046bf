#include "ultranet/classify.hpp"

#include <algorithm>
#include <limits>

#include "ultranet/least_squares.hpp"

namespace ultranet {

// Decision rules
// --------------
// The defining bounds quantify over every k > 0 (null nets) or some k > 0
// (moderate nets), neither of which is finitely checkable. The classifier uses
// falsifiable surrogates on the ladder:
//
//  * negligible: for every alpha, the indicator series
//    G(eps) = eps^a ln sup |d^a f_eps| is strictly decreasing on the last
//    third of the ladder and its final value is below -k_min. A sup of zero
//    is the -inf sentinel and counts as "below everything".
//
//  * moderate: for every alpha, ln sup |d^a f_eps| is fitted against
//    {1, eps^{-a}, ln(1/eps)}, and the rms residual must stay within
//    residual_cap log units. The ln(1/eps) regressor absorbs polynomial
//    growth in 1/eps, which the bounds dominate; growth genuinely faster than
//    exp(k eps^{-a}) (for example exp(eps^{-1}) at s = 2) cannot be matched by
//    this concave-plus-linear family over a geometric ladder and blows the
//    residual cap.
//
// fitted_k is the eps^{-a} coefficient of the worst-growing alpha, clamped at
// zero.

const char* to_string(GrowthClass c) {
    switch (c) {
        case GrowthClass::negligible: return "negligible";
        case GrowthClass::moderate: return "moderate";
        case GrowthClass::non_moderate: return "non_moderate";
    }
    return "?";
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double sup_over_region(const SampledNet& net, std::size_t slice, const Box& region) {
    const int n = net.grid.points();
    double sup = 0.0;
    bool any = false;
    for (int iy = 0; iy < (net.grid.dim() == 2 ? n : 1); ++iy)
        for (int ix = 0; ix < n; ++ix) {
            std::array<double, 2> x{net.grid.coord(ix),
                                    net.grid.dim() == 2 ? net.grid.coord(iy) : 0.0};
            if (!region.contains(net.grid.dim(), x)) continue;
            any = true;
            sup = std::max(sup, std::abs(net.slices[slice][net.grid.site(ix, iy)]));
        }
    if (!any) throw Error("region contains no grid sites");
    return sup;
}

std::vector<std::pair<double, double>> indicator_from_sups(const GevreyOrder& order,
                                                           const EpsilonLadder& ladder,
                                                           const std::vector<double>& sups) {
    std::vector<std::pair<double, double>> series;
    series.reserve(sups.size());
    for (std::size_t j = 0; j < sups.size(); ++j) {
        double g = sups[j] == 0.0 ? kNegInf
                                  : std::pow(ladder[j], order.eps_exponent()) * std::log(sups[j]);
        series.emplace_back(ladder[j], g);
    }
    return series;
}

// Strictly decreasing on the last third, -inf entries allowed at the tail.
bool negligible_series(const std::vector<std::pair<double, double>>& series, double k_min) {
    const std::size_t n = series.size();
    const std::size_t start = (2 * n) / 3;
    for (std::size_t i = start + 1; i < n; ++i) {
        double prev = series[i - 1].second;
        double cur = series[i].second;
        if (prev == kNegInf && cur == kNegInf) continue;  // flat at exact zero
        if (!(cur < prev)) return false;
    }
    return series.back().second < -k_min;
}

struct GrowthFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;
    bool ok = false;
};

GrowthFit fit_log_growth(const GevreyOrder& order, const EpsilonLadder& ladder,
                         const std::vector<double>& sups) {
    std::vector<double> ones, x, lx, y;
    for (std::size_t j = 0; j < sups.size(); ++j) {
        if (sups[j] == 0.0) continue;
        ones.push_back(1.0);
        x.push_back(std::pow(ladder[j], -order.eps_exponent()));
        lx.push_back(std::log(1.0 / ladder[j]));
        y.push_back(std::log(sups[j]));
    }
    GrowthFit f;
    if (y.size() < 4) return f;  // not enough finite points for the 3-term fit
    auto coef = least_squares({ones, x, lx}, y, &f.residual);
    f.intercept = coef[0];
    f.slope = coef[1];
    f.ok = true;
    return f;
}

GrowthVerdict classify_from_sups(const GevreyOrder& order, const EpsilonLadder& ladder,
                                 const std::vector<std::vector<double>>& sups_per_alpha,
                                 const GrowthOptions& opts) {
    GrowthVerdict verdict;
    verdict.indicator_series = indicator_from_sups(order, ladder, sups_per_alpha.front());

    bool all_negligible = true;
    bool all_moderate = true;
    double worst_slope = -std::numeric_limits<double>::infinity();
    double worst_residual = 0.0;
    double worst_intercept = 0.0;

    for (const auto& sups : sups_per_alpha) {
        auto series = indicator_from_sups(order, ladder, sups);
        if (!negligible_series(series, opts.k_min)) all_negligible = false;

        bool all_zero = std::all_of(sups.begin(), sups.end(), [](double s) { return s == 0.0; });
        if (all_zero) continue;  // identically zero derivative: trivially fine

        GrowthFit fit = fit_log_growth(order, ladder, sups);
        if (!fit.ok || fit.residual > opts.residual_cap) all_moderate = false;
        if (fit.ok && fit.slope > worst_slope) {
            worst_slope = fit.slope;
            worst_intercept = fit.intercept;
        }
        worst_residual = std::max(worst_residual, fit.residual);
    }

    verdict.fitted_k = std::max(0.0, worst_slope == -std::numeric_limits<double>::infinity()
                                         ? 0.0
                                         : worst_slope);
    verdict.fitted_C = worst_intercept;
    verdict.fit_residual = worst_residual;
    verdict.cls = all_negligible ? GrowthClass::negligible
                                 : (all_moderate ? GrowthClass::moderate
                                                 : GrowthClass::non_moderate);
    return verdict;
}

}  // namespace

std::vector<std::pair<double, double>> growth_indicator(const SampledNet& net,
                                                        const MultiIndex& alpha,
                                                        const Box& region, int alpha_cap) {
    if (multi_order(alpha) > alpha_cap)
        throw UnsupportedOrderError("growth_indicator: |alpha| exceeds the configured cap");
    if (region.empty(net.grid.dim())) throw Error("growth_indicator: empty region");
    net.validate();
    SampledNet d = spectral_derivative(net, alpha);
    std::vector<double> sups(d.slice_count());
    for (std::size_t j = 0; j < d.slice_count(); ++j) sups[j] = sup_over_region(d, j, region);
    return indicator_from_sups(net.order, net.ladder, sups);
}

GrowthVerdict classify_net(const SampledNet& net, int alpha_max, const Box& region,
                           const GrowthOptions& opts) {
    if (net.ladder.size() < 4) throw PreconditionError("classify_net: ladder too short");
    if (region.empty(net.grid.dim())) throw Error("classify_net: empty region");
    net.validate();

    std::vector<std::vector<double>> sups_per_alpha;
    for (const MultiIndex& alpha : multi_indices_up_to(net.grid.dim(), alpha_max)) {
        SampledNet d = spectral_derivative(net, alpha);
        std::vector<double> sups(d.slice_count());
        for (std::size_t j = 0; j < d.slice_count(); ++j) sups[j] = sup_over_region(d, j, region);
        sups_per_alpha.push_back(std::move(sups));
    }
    return classify_from_sups(net.order, net.ladder, sups_per_alpha, opts);
}

bool negligible_sup_series(const GevreyOrder& order, const EpsilonLadder& ladder,
                           const std::vector<double>& sups, double k_min) {
    return negligible_series(indicator_from_sups(order, ladder, sups), k_min);
}

GrowthVerdict classify_scalar(const GeneralizedScalar& x, const GrowthOptions& opts) {
    if (x.values.size() != x.ladder.size())
        throw InvalidNetError("classify_scalar: value count does not match ladder");
    std::vector<double> sups;
    for (const Complex& v : x.values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw InvalidNetError("classify_scalar: non-finite value");
        sups.push_back(std::abs(v));
    }
    return classify_from_sups(x.order, x.ladder, {sups}, opts);
}

}  // namespace ultranet
