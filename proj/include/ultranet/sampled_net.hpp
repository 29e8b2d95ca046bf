#pragma once

#include <functional>
#include <optional>

#include "ultranet/types.hpp"

namespace ultranet {

/// One representative of a generalized ultradistribution: an eps-indexed
/// family of grid-sampled slices. Immutable after construction; all
/// operations return new values.
struct SampledNet {
    GevreyOrder order;
    EpsilonLadder ladder;
    Grid grid;
    /// One slice per ladder entry, each of grid.site_count() samples.
    std::vector<std::vector<Complex>> slices;
    std::optional<Box> support_box;
    /// Non-fatal diagnostics attached by operations (wraparound etc).
    std::vector<std::string> notes;

    std::size_t slice_count() const { return slices.size(); }

    /// Throws InvalidNetError if any sample is non-finite, and checks the
    /// support box claim when one is present.
    void validate() const;
};

/// Scalar net: one complex value per ladder entry.
struct GeneralizedScalar {
    GevreyOrder order;
    EpsilonLadder ladder;
    std::vector<Complex> values;
};

/// Sample fn(eps, x) on every (eps, site). For dim 1 the second coordinate is 0.
SampledNet net_from_closure(const GevreyOrder& order, const EpsilonLadder& ladder,
                            const Grid& grid,
                            const std::function<Complex(double, std::array<double, 2>)>& fn,
                            std::optional<Box> support_box = std::nullopt);

/// Throws IncompatibilityError unless grid, ladder and order all match.
void require_compatible(const SampledNet& a, const SampledNet& b);

SampledNet net_add(const SampledNet& a, const SampledNet& b);
SampledNet net_sub(const SampledNet& a, const SampledNet& b);
/// Pointwise product per slice; support box is the intersection when both
/// factors carry one.
SampledNet net_mul(const SampledNet& a, const SampledNet& b);
SampledNet net_scale(const SampledNet& a, Complex c);
/// Multiply slice j by weight[j] (used for eps-dependent rescalings).
SampledNet net_scale_per_eps(const SampledNet& a, const std::vector<Complex>& weight);

/// Derivative realized in frequency space, exact for band-limited slices.
/// Records a wraparound note when the support box comes within 8 spacings of
/// the periodic boundary.
SampledNet spectral_derivative(const SampledNet& net, const MultiIndex& alpha);

}  // namespace ultranet
