#pragma once

#include <map>

#include "ultranet/classify.hpp"
#include "ultranet/mollifier.hpp"

namespace ultranet {

/// Spatial Gevrey window: 1 for |r| <= plateau, 0 for |r| >= support, glued
/// transition between. Used for localizers, compact test functions and the
/// heaviside cutoffs.
double gevrey_window(double r, double plateau, double support, double s, double sigma = 2.0);

/// Compactly supported Gevrey bump exp(1 - 1/(1 - u^2)), u = (x-x0)/w,
/// normalized to peak amplitude `amplitude` at x0.
double gevrey_bump_value(double x, double x0, double width, double amplitude = 1.0);

enum class DistributionKind {
    dirac,
    heaviside,
    boundary_value_minus,  // 1/(x - x0 - i eps)
    boundary_value_plus,   // 1/(x - x0 + i eps)
    line_delta_2d,         // delta along one axis
    gevrey_bump_function,
    finite_linear_combination,
};

const char* to_string(DistributionKind k);
DistributionKind distribution_kind_from_string(const std::string& name);

/// Textual description of a classical object to embed; the parameter set used
/// depends on the kind.
struct DistributionSpec {
    DistributionKind kind = DistributionKind::dirac;
    std::array<double, 2> location{0.0, 0.0};
    /// For line_delta_2d: the axis the line runs along (0 = x-axis).
    int axis = 0;
    /// For gevrey_bump_function.
    double width = 1.5;
    double amplitude = 1.0;
    /// For finite_linear_combination.
    std::vector<std::pair<Complex, DistributionSpec>> terms;

    static DistributionSpec dirac_at(double x, double y = 0.0) {
        DistributionSpec s;
        s.kind = DistributionKind::dirac;
        s.location = {x, y};
        return s;
    }
    static DistributionSpec bump(double x0, double width, double amplitude = 1.0) {
        DistributionSpec s;
        s.kind = DistributionKind::gevrey_bump_function;
        s.location = {x0, 0.0};
        s.width = width;
        s.amplitude = amplitude;
        return s;
    }
};

/// How the boundary-value kinds are realized: `analytic` uses the closed-form
/// periodized slices; `mollified` builds the convolution with the mollifier
/// net in frequency space. The two agree on every microlocal verdict.
enum class BoundaryValueStyle { analytic, mollified };

/// Constant-in-eps injection of a smooth function given by grid samples.
SampledNet canonical_embed(const GevreyOrder& order, const EpsilonLadder& ladder,
                           const Grid& grid, const std::vector<Complex>& f,
                           std::optional<Box> support_box = std::nullopt);

/// Convolution embedding T -> (T * phi_eps) restricted to the grid.
SampledNet embed_distribution(const DistributionSpec& spec, const MollifierNet& mnet,
                              BoundaryValueStyle bv_style = BoundaryValueStyle::analytic);

/// Classification of the difference net f - f * phi_eps, plus the fitted
/// per-alpha prefactor pattern of its negligibility rates.
struct MollificationReport {
    GrowthVerdict verdict;
    std::vector<std::pair<MultiIndex, std::vector<std::pair<double, double>>>> per_alpha_series;
    /// Fitted log-prefactor slope over |alpha| (the log C of the pattern
    /// C^{|alpha|+1} alpha!^s) and its relative misfit.
    double prefactor_log_c = 0.0;
    double prefactor_rel_misfit = 0.0;
};

MollificationReport mollification_error(const std::vector<Complex>& f,
                                        std::optional<Box> support_box,
                                        const MollifierNet& mnet, int alpha_max = 2,
                                        const GrowthOptions& opts = {});

/// Commutativity check of the two embeddings on a compactly supported bump:
/// canonical minus mollified must classify negligible.
struct DiagramReport {
    bool commutes = false;
    GrowthVerdict verdict;
};

DiagramReport diagram_check(const std::vector<Complex>& f, std::optional<Box> support_box,
                            const MollifierNet& mnet, int alpha_max = 2,
                            const GrowthOptions& opts = {});

/// Infinite-order operator sum a_gamma d^gamma truncated at |gamma| <=
/// gamma_max, with the Gevrey coefficient bound |a_gamma| <= c h^{|gamma|} /
/// (gamma!)^s enforced at construction.
class UltradiffOperator {
public:
    UltradiffOperator(const GevreyOrder& order, std::map<MultiIndex, Complex> coeffs, double c,
                      double h);

    /// Operator with coefficients exactly at the bound, a_gamma =
    /// c h^{|gamma|} / (gamma!)^s.
    static UltradiffOperator gevrey_exponential(const GevreyOrder& order, int dim, double c,
                                                double h, int gamma_max);
    static UltradiffOperator identity(const GevreyOrder& order);

    const std::map<MultiIndex, Complex>& coeffs() const { return coeffs_; }
    const GevreyOrder& order() const { return order_; }
    double bound_c() const { return c_; }
    double bound_h() const { return h_; }
    int gamma_max() const { return gamma_max_; }

private:
    GevreyOrder order_;
    std::map<MultiIndex, Complex> coeffs_;
    double c_;
    double h_;
    int gamma_max_;
};

/// Slice-wise spectral application of the operator. Appends the truncation
/// tail estimate (from the coefficient bound and the slice bandwidth) to the
/// result's notes.
SampledNet apply_ultradiff(const UltradiffOperator& op, const SampledNet& net);

}  // namespace ultranet
