#pragma once

#include <random>

#include "ultranet/microlocal.hpp"

namespace ultranet {

struct ConeSumOptions {
    int directions_per_bin = 8;
    /// Magnitude ratios 2^{-range}..2^{+range}, `per_octave` samples per
    /// octave. The default grid is dense enough that a swept sum cannot skip
    /// a bin at B = 64.
    double ratio_range_octaves = 4.0;
    int ratios_per_octave = 8;
    double cancel_tol = 1e-9;
};

/// Direction-sampled Minkowski sum of two bin-cones.
struct ConePair {
    bool sum_defined = true;
    ConeSet sum;
    ConeSet closure_union;  // sum u A u B whenever sum_defined
};

ConePair cone_sum(const ConeSet& a, const ConeSet& b, const DirectionBins& bins,
                  const ConeSumOptions& opts = {});

/// Independent densely-sampled closure of A + B re-binned, with the limit
/// directions represented by A and B themselves. Used as the brute-force
/// reference for the closure identity.
ConeSet brute_force_closure(const ConeSet& a, const ConeSet& b, const DirectionBins& bins,
                            int directions_per_bin = 16, int ratios_per_octave = 16,
                            double ratio_range_octaves = 4.0);

/// Random nonempty cone made of 1..max_arcs contiguous bin runs.
ConeSet random_cone(std::mt19937& rng, const DirectionBins& bins, int max_arcs = 2,
                    int max_arc_width = 10);

struct LemmaTrialStats {
    int trials = 0;
    int sum_defined = 0;
    int exact_matches = 0;
    std::vector<int> failed_trials;
};

/// Seeded random cone pairs with defined sums; counts exact bin-set equality
/// of the closure formula against the brute-force closure.
LemmaTrialStats lemma_closure_trials(int trials, unsigned seed, const DirectionBins& bins,
                                     const ConeSumOptions& opts = {});

struct WfSumResult {
    /// The sum set {(x, xi+eta)} over shared cells.
    std::vector<WavefrontPair> pairs;
    bool hypothesis_ok = true;
    /// Cells where the sum degenerates (opposite directions cancel).
    std::vector<std::array<int, 2>> violating_cells;
};

WfSumResult wf_sum(const WavefrontEstimate& wf_f, const WavefrontEstimate& wf_g,
                   const DirectionBins& bins, const ConeSumOptions& opts = {});

struct HormanderReport {
    WavefrontEstimate wf_f;
    WavefrontEstimate wf_g;
    WavefrontEstimate wf_fg;
    /// (WF f + WF g) u WF f u WF g.
    WavefrontEstimate allowed;
    bool hypothesis_ok = false;
    bool applicable = false;     // hypothesis holds, inclusion asserted
    bool inclusion_ok = false;   // meaningful only when applicable
    std::vector<std::string> notes;
    std::string to_json() const;
};

/// Product wavefront inclusion: WF(fg) within one bin/cell dilation of the
/// allowed set whenever the no-cancellation hypothesis holds; otherwise the
/// report flags non-applicability and asserts nothing.
HormanderReport hormander_check(const SampledNet& f, const SampledNet& g,
                                const DirectionBins& bins, const FitOptions& fopts = {},
                                const LocalizerOptions& lopts = {},
                                const ConeSumOptions& copts = {});

struct SeparationResult {
    bool ok = false;
    ConeSet gamma1;
    ConeSet gamma2;
    int dilation = 0;
    int witness_bin = -1;  // violating bin on failure
};

/// Open conic neighbourhoods Gamma1 of A and Gamma2 of B with
/// Gamma1 + Gamma2 inside Gamma, grown greedily by whole bins.
SeparationResult cone_separation(const ConeSet& a, const ConeSet& b, const ConeSet& gamma,
                                 const DirectionBins& bins, const ConeSumOptions& opts = {});

}  // namespace ultranet
