#pragma once

#include "ultranet/sampled_net.hpp"

namespace ultranet {

/// Gevrey gluing function h(t) = exp(-sigma t^{-1/(s-1)}) for t > 0, else 0.
double gevrey_glue(double t, double s, double sigma);

/// Smooth step from 1 (u <= 0) to 0 (u >= 1) built from the gluing function;
/// equals 1/2 at u = 1/2 by symmetry.
double gevrey_down_step(double u, double s, double sigma);

/// Radial frequency cutoff: 1 on [0, r1], 0 beyond r2, Gevrey transition
/// between. One-dimensional profile; higher dimensions take tensor products.
class GevreyBump {
public:
    GevreyBump(const GevreyOrder& order, double r1, double r2, const Grid& freq_grid,
               double sigma = 16.0);

    double operator()(double rho) const;

    const GevreyOrder& order() const { return order_; }
    double r1() const { return r1_; }
    double r2() const { return r2_; }
    double sigma() const { return sigma_; }
    const Grid& grid() const { return grid_; }
    /// Profile sampled on the grid's frequency lattice, DFT index order.
    const std::vector<double>& samples() const { return samples_; }

private:
    GevreyOrder order_;
    double r1_;
    double r2_;
    double sigma_;
    Grid grid_;
    std::vector<double> samples_;
};

struct MollifierOptions {
    int moment_max = 5;
    std::vector<double> seminorm_b = {1.0, 2.0};
    int seminorm_alpha_max = 8;
    int seminorm_beta_max = 8;
    double mass_tol = 1e-8;
    double moment_tol = 1e-6;
};

/// The unit-mass mollifier phi = inverse transform of the frequency cutoff,
/// with all higher moments vanishing by the flatness of the plateau.
struct Mollifier {
    GevreyBump bump;
    Grid grid;  // spatial grid (dim may exceed the bump's 1d profile)
    /// phi sampled on the spatial grid (real part of the inverse transform).
    std::vector<double> phi;
    /// phi interpolated at the origin (the grid is offset off zero).
    double peak = 0.0;
    std::vector<std::pair<MultiIndex, double>> moment_residuals;
    std::vector<std::pair<double, double>> seminorm_estimates;
};

/// Build phi on the spatial grid dual to the bump's frequency lattice.
/// Throws ConstructionError when a moment residual exceeds its tolerance.
Mollifier build_mollifier(const GevreyBump& bump, const Grid& spatial_grid,
                          const MollifierOptions& opts = {});

/// Truncated Gevrey seminorm estimate: sup over |alpha| <= trunc_alpha,
/// |beta| <= trunc_beta of int |x|^{|beta|} |d^alpha phi| dx
/// / (b^{|alpha+beta|} (alpha! beta!)^s). Monotone nonincreasing in b.
double seminorm_estimate(const Mollifier& phi, double b, int trunc_alpha = 8,
                         int trunc_beta = 8);

/// Scaled net phi_eps = eps^{-m} phi(./eps). Spectral convolution against a
/// band-limited factor works on the full ladder through hat(); materialized
/// slices of phi_eps itself exist only where the scaled cutoff stays below
/// the Nyquist frequency (slice_ladder).
struct MollifierNet {
    Mollifier base;
    EpsilonLadder ladder;        // as requested
    EpsilonLadder slice_ladder;  // entries with materialized slices
    Grid grid;
    std::vector<std::vector<Complex>> slices;
    /// Per-slice interpolation at the origin; sup of the slice.
    std::vector<double> peaks;
    /// Per-slice mass (integral over the torus).
    std::vector<double> masses;
    std::vector<std::string> notes;

    /// View the slices as a SampledNet of the base order.
    SampledNet as_net() const;

    /// 1d frequency response of the scaled mollifier at scale eps.
    double hat(double eps, double rho) const { return base.bump(eps * rho); }
};

/// Ladder entries whose scaled cutoff reaches the Nyquist frequency get no
/// materialized slice; the truncation is recorded in the notes.
MollifierNet mollifier_net(const Mollifier& phi, const EpsilonLadder& ladder, const Grid& grid);

}  // namespace ultranet
