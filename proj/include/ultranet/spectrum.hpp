#pragma once

#include "ultranet/sampled_net.hpp"

namespace ultranet {

/// Frequency-side view of a net: one spectrum per ladder entry, DFT index
/// order, with the provenance of any window that was applied first.
struct NetSpectrum {
    GevreyOrder order;
    EpsilonLadder ladder;
    Grid grid;
    std::vector<std::vector<Complex>> spectra;
    struct Provenance {
        bool windowed = false;
        std::array<double, 2> center{0.0, 0.0};
        double scale = 0.0;
    } provenance;
};

NetSpectrum fourier_net(const SampledNet& net);
SampledNet inverse_fourier_net(const NetSpectrum& spec);

/// Per-slice relative Parseval defect, max over the ladder.
double parseval_defect(const SampledNet& net, const NetSpectrum& spec);

/// Partition of the directions into B bins: signs in 1d (B = 2), equal
/// angular sectors in 2d (B even). The bin of -xi is the antipodal bin.
class DirectionBins {
public:
    DirectionBins(int dim, int count);

    int dim() const { return dim_; }
    int count() const { return count_; }
    int bin_of(double kx, double ky = 0.0) const;
    int antipodal(int b) const { return dim_ == 1 ? 1 - b : (b + count_ / 2) % count_; }
    /// Center angle of a 2d bin (radians); +-pi/2 stand in for the 1d signs.
    double bin_angle(int b) const;
    /// Unit directions strictly inside bin b.
    std::vector<std::array<double, 2>> directions_in_bin(int b, int per_bin) const;

private:
    int dim_;
    int count_;
};

struct FitOptions {
    /// Radial window in units of the frequency step (pi/L).
    double r_min_steps = 8.0;
    /// Upper edge as a fraction of the Nyquist frequency.
    double r_max_nyquist_frac = 0.5;
    int shells_per_octave = 2;
    double noise_floor_rel = 1e-14;
    double kappa_reg = 0.5;
    double rho_max = 1.0;
    int min_samples = 30;
};

/// Fitted coefficients of log|f_eps^(xi)| ~ c0 + k1 eps^{-1/(2s-1)}
/// - k2 |xi|^{1/s} over one direction bin.
struct DecayFit {
    int bin = 0;
    double c0 = 0.0;
    double k1 = 0.0;  // clamped at 0
    double k2 = 0.0;
    double residual_rms = 0.0;
    int sample_count = 0;
    int excluded_count = 0;
    /// All samples in the bin sat at the per-slice noise floor.
    bool vacuous = false;

    bool regular(const FitOptions& opts) const {
        return vacuous || (k2 >= opts.kappa_reg && residual_rms <= opts.rho_max);
    }
};

/// Shell-max least squares over the radial window; samples below the
/// per-slice noise floor are excluded and counted. Throws
/// UnderdeterminedFitError when fewer than min_samples usable triples remain
/// in a non-vacuous bin.
DecayFit fit_decay(const NetSpectrum& spec, const DirectionBins& bins, int bin,
                   const GevreyOrder& order, const FitOptions& opts = {});

struct RegularityReport {
    bool regular = false;
    std::vector<DecayFit> fits;
};

/// True iff every bin carries the exponential decay witness.
RegularityReport regularity_test(const SampledNet& net, const DirectionBins& bins,
                                 const FitOptions& opts = {});

/// Check of the compact-support growth bound: the |xi|^{1/s} coefficient of
/// the pooled (all-direction) shell fit must be small, growth entering only
/// through eps.
struct SupportBoundReport {
    bool pass = false;
    double xi_coefficient = 0.0;
    double k1 = 0.0;
    double residual_rms = 0.0;
    int sample_count = 0;
};

/// Embedded kinds whose Gevrey tails preclude a literal sample-support box
/// (dirac, line deltas) pass the support of the underlying distribution as
/// `assume_support` instead.
SupportBoundReport compact_support_bound_check(const SampledNet& net, const FitOptions& opts = {},
                                               std::optional<Box> assume_support = std::nullopt);

/// CSV rows "bin,c0,k1,k2,residual_rms,samples" for a list of fits.
std::string decay_fits_csv(const std::vector<DecayFit>& fits);

}  // namespace ultranet
