#pragma once

#include <set>

#include "ultranet/embedding.hpp"
#include "ultranet/spectrum.hpp"

namespace ultranet {

/// A set of direction bins (a discretized cone in R^m \ {0}), stored sorted.
class ConeSet {
public:
    ConeSet() = default;
    ConeSet(const DirectionBins& bins, std::vector<int> members);

    int bin_count() const { return bin_count_; }
    int dim() const { return dim_; }
    const std::vector<int>& members() const { return members_; }
    bool empty() const { return members_.empty(); }
    bool contains(int b) const;

    ConeSet unite(const ConeSet& o) const;
    ConeSet intersect(const ConeSet& o) const;
    /// Widen by k neighbouring bins on each side (2d); the 1d sign bins have
    /// no neighbours, so dilation is the identity there.
    ConeSet dilate(int k) const;
    bool subset_of(const ConeSet& o, int dilation_tolerance = 0) const;
    bool operator==(const ConeSet& o) const {
        return bin_count_ == o.bin_count_ && members_ == o.members_;
    }

private:
    int dim_ = 1;
    int bin_count_ = 2;
    std::vector<int> members_;
};

/// Global singular cone: the bins whose decay fit fails the regularity
/// criterion (vacuous bins are regular).
ConeSet sigma_cone(const SampledNet& net, const DirectionBins& bins, const FitOptions& opts = {});
ConeSet sigma_cone_of_spectrum(const NetSpectrum& spec, const GevreyOrder& order,
                               const DirectionBins& bins, const FitOptions& opts,
                               std::vector<DecayFit>* fits_out = nullptr);

struct LocalizerOptions {
    /// Support width (diameter) of the scale-0 window in grid spacings;
    /// 0 = automatic from the grid.
    int base_support_spacings = 0;
    double scale_factor = 3.0;
    /// Scales stop once the support width falls below this many spacings.
    int min_support_spacings = 16;
    /// plateau radius / support radius (the localizer family shape: 1 on
    /// B(0,r), supported in B(0,2r)).
    double plateau_ratio = 0.5;
    double glue_sigma = 3.0;
    int cell_spacings = 8;
    /// Windowed data below this fraction of the net's global max is treated
    /// as vacuous without fitting.
    double activity_floor = 1e-13;
    /// Localized fits run on few shells; the global 30-sample rule is relaxed
    /// to this floor for the per-scale fits.
    int min_samples_local = 12;
    /// Negligibility threshold of the windowed-content pre-test: windows
    /// whose relative sup series passes the negligible rule see the zero
    /// class and contribute an empty cone.
    double content_k_min = 2.0;
    /// A shrunken window can only exhibit its own spectral decay rate; the
    /// regularity threshold of a localized fit is capped at this fraction of
    /// the window's measured rate.
    double window_rate_fraction = 0.8;
    /// Scales whose window rate falls below this multiple of kappa_reg
    /// cannot certify directions: they only localize (their verdict is
    /// either "content negligible here" or "no directional information").
    double usable_rate_factor = 1.2;
};

struct LocalizedSigma {
    ConeSet cone;
    /// Per-scale cones, largest window first (index = scale j).
    std::vector<ConeSet> per_scale;
    std::vector<int> scales_used;
    /// Per-bin fits of the direction-resolving scale (empty when none ran).
    std::vector<DecayFit> fits;
    /// Scales whose cone is not contained in the previous one within one bin.
    int nested_violations = 0;
};

/// Intersection over localizer scales of the windowed singular cones at x0.
LocalizedSigma sigma_localized(const SampledNet& net, const std::array<double, 2>& x0,
                               const DirectionBins& bins, const FitOptions& fopts = {},
                               const LocalizerOptions& lopts = {});

struct WavefrontPair {
    std::array<int, 2> cell{0, 0};
    int bin = 0;
    double k2 = 0.0;
    double residual = 0.0;
};

struct WavefrontEstimate {
    Grid grid{1, 1.0, 16};
    int bin_count = 2;
    int cell_spacings = 8;
    std::array<int, 2> cell_counts{0, 0};
    std::vector<WavefrontPair> pairs;  // sorted by (cell, bin)
    std::vector<std::array<int, 2>> singular_cells;
    std::vector<int> scales_used;
    /// Positional uncertainty of the estimate in cells: the direction-
    /// resolving window radius. Set inclusions dilate by this amount.
    int resolution_cells = 1;
    int nested_violations = 0;

    bool has_pair(const std::array<int, 2>& cell, int bin) const;
    std::array<double, 2> cell_center(const std::array<int, 2>& cell) const;
    /// Pair-set inclusion up to the given cell/bin dilation (1d bins exact).
    bool subset_of(const WavefrontEstimate& o, int cell_dilation, int bin_dilation) const;
    std::string csv() const;
};

/// Cells whose localized singular cone is nonempty.
std::vector<std::array<int, 2>> sing_supp(const SampledNet& net, const DirectionBins& bins,
                                          const FitOptions& fopts = {},
                                          const LocalizerOptions& lopts = {});

/// Wavefront estimate: { (cell, bin) : bin in sigma_localized(cell center) }.
/// Its cell projection is the singular-support estimate of the same run.
WavefrontEstimate wavefront(const SampledNet& net, const DirectionBins& bins,
                            const FitOptions& fopts = {}, const LocalizerOptions& lopts = {});

struct WfPropertyReport {
    bool derivative_inclusion = false;
    bool factor_inclusion = false;
    WavefrontEstimate wf_net;
    WavefrontEstimate wf_derivative;
    WavefrontEstimate wf_product;
    std::vector<std::string> violations;
};

/// Derivative and regular-factor wavefront inclusions, each up to one
/// bin/cell dilation. The factor must pass the regularity test.
WfPropertyReport check_wf_properties(const SampledNet& net, const MultiIndex& alpha,
                                     const SampledNet& regular_factor, const DirectionBins& bins,
                                     const FitOptions& fopts = {},
                                     const LocalizerOptions& lopts = {});

}  // namespace ultranet
