#include "ultranet/mollifier.hpp"

#include <algorithm>
#include <numeric>

#include "ultranet/fft.hpp"

namespace ultranet {

double gevrey_glue(double t, double s, double sigma) {
    if (t <= 0.0) return 0.0;
    return std::exp(-sigma * std::pow(t, -1.0 / (s - 1.0)));
}

double gevrey_down_step(double u, double s, double sigma) {
    if (u <= 0.0) return 1.0;
    if (u >= 1.0) return 0.0;
    double a = gevrey_glue(1.0 - u, s, sigma);
    double b = gevrey_glue(u, s, sigma);
    return a / (a + b);
}

GevreyBump::GevreyBump(const GevreyOrder& order, double r1, double r2, const Grid& freq_grid,
                       double sigma)
    : order_(order), r1_(r1), r2_(r2), sigma_(sigma), grid_(freq_grid) {
    if (!(0.0 < r1 && r1 < r2)) throw ConfigError("GevreyBump: need 0 < r1 < r2");
    if (!(sigma > 0.0)) throw ConfigError("GevreyBump: need sigma > 0");
    if (r2 >= freq_grid.nyquist())
        throw AliasingError("GevreyBump: r2 = " + std::to_string(r2) +
                            " reaches the Nyquist frequency " +
                            std::to_string(freq_grid.nyquist()));
    samples_.resize(freq_grid.points());
    for (int m = 0; m < freq_grid.points(); ++m)
        samples_[m] = (*this)(std::abs(freq_grid.freq(m)));
}

double GevreyBump::operator()(double rho) const {
    rho = std::abs(rho);
    if (rho <= r1_) return 1.0;
    if (rho >= r2_) return 0.0;
    return gevrey_down_step((rho - r1_) / (r2_ - r1_), order_.s(), sigma_);
}

namespace {

// 1d inverse transform of a frequency profile given in DFT index order.
std::vector<double> profile_to_samples(const Grid& axis, const std::vector<double>& profile,
                                       double* imag_residue = nullptr) {
    std::vector<Complex> hat(profile.begin(), profile.end()), out;
    fft::inverse(axis, hat, out);
    std::vector<double> re(out.size());
    double max_abs = 0.0, max_im = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        re[i] = out[i].real();
        max_abs = std::max(max_abs, std::abs(out[i]));
        max_im = std::max(max_im, std::abs(out[i].imag()));
    }
    if (imag_residue) *imag_residue = max_abs > 0 ? max_im / max_abs : 0.0;
    return re;
}

Grid axis_of(const Grid& g) { return Grid(1, g.extent(), g.points()); }

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// Integrals I(a, b) = int |x|^b |d^a phi| dx for a <= amax, b <= bmax,
// derivatives taken spectrally.
std::vector<std::vector<double>> derivative_weight_integrals(const Mollifier& phi, int amax,
                                                             int bmax);

}  // namespace

Mollifier build_mollifier(const GevreyBump& bump, const Grid& spatial_grid,
                          const MollifierOptions& opts) {
    if (!(bump.grid() == spatial_grid))
        throw IncompatibilityError("build_mollifier: bump and spatial grid are not Fourier duals");

    const Grid axis = axis_of(spatial_grid);
    double imag_residue = 0.0;
    std::vector<double> phi1 = profile_to_samples(axis, bump.samples(), &imag_residue);
    if (imag_residue > 1e-12)
        throw ConstructionError("build_mollifier: unexpected imaginary residue " +
                                std::to_string(imag_residue));

    Mollifier m{bump, spatial_grid, {}, 0.0, {}, {}};
    const int n = spatial_grid.points();
    if (spatial_grid.dim() == 1) {
        m.phi = phi1;
    } else {
        m.phi.resize(spatial_grid.site_count());
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) m.phi[spatial_grid.site(ix, iy)] = phi1[ix] * phi1[iy];
    }

    // Spectral interpolation at the origin: mean of the frequency profile.
    double peak1 = std::accumulate(bump.samples().begin(), bump.samples().end(), 0.0) /
                   (2.0 * spatial_grid.extent());
    m.peak = spatial_grid.dim() == 1 ? peak1 : peak1 * peak1;

    // Axis moments by grid quadrature; the site layout is symmetric under
    // x -> -x so odd moments cancel exactly.
    const double h = axis.spacing();
    std::vector<double> axis_moment(opts.moment_max + 1, 0.0);
    for (int a = 0; a <= opts.moment_max; ++a) {
        double sum = 0.0;
        for (int i = 0; i < n; ++i) sum += std::pow(axis.coord(i), a) * phi1[i];
        axis_moment[a] = sum * h;
    }

    for (const MultiIndex& alpha : multi_indices_up_to(spatial_grid.dim(), opts.moment_max)) {
        double mom = axis_moment[alpha[0]] * (spatial_grid.dim() == 2 ? axis_moment[alpha[1]] : 1.0);
        double residual = multi_order(alpha) == 0 ? std::abs(mom - 1.0) : std::abs(mom);
        m.moment_residuals.emplace_back(alpha, residual);
        double tol = multi_order(alpha) == 0 ? opts.mass_tol : opts.moment_tol;
        if (residual > tol)
            throw ConstructionError("build_mollifier: moment residual " +
                                    std::to_string(residual) + " at alpha = (" +
                                    std::to_string(alpha[0]) + "," + std::to_string(alpha[1]) +
                                    ") exceeds tolerance");
    }

    for (double b : opts.seminorm_b)
        m.seminorm_estimates.emplace_back(
            b, seminorm_estimate(m, b, opts.seminorm_alpha_max, opts.seminorm_beta_max));
    return m;
}

namespace {

std::vector<std::vector<double>> derivative_weight_integrals(const Mollifier& phi, int amax,
                                                             int bmax) {
    const Grid& g = phi.grid;
    const int n = g.points();
    const double cell = std::pow(g.spacing(), g.dim());

    // |x|^b weights per site.
    std::vector<std::vector<double>> weight(bmax + 1);
    for (int b = 0; b <= bmax; ++b) weight[b].resize(g.site_count());
    for (int iy = 0; iy < (g.dim() == 2 ? n : 1); ++iy)
        for (int ix = 0; ix < n; ++ix) {
            double x = g.coord(ix);
            double y = g.dim() == 2 ? g.coord(iy) : 0.0;
            double r = std::sqrt(x * x + y * y);
            double p = 1.0;
            for (int b = 0; b <= bmax; ++b) {
                weight[b][g.site(ix, iy)] = p;
                p *= r;
            }
        }

    SampledNet base{phi.bump.order(), EpsilonLadder({0.9, 0.8, 0.7, 0.6}), g, {}, std::nullopt, {}};
    base.slices.assign(1, std::vector<Complex>(phi.phi.begin(), phi.phi.end()));
    // A single-slice carrier for the derivative machinery; the ladder is inert.
    base.slices.resize(base.ladder.size(), base.slices[0]);

    auto alphas = multi_indices_up_to(g.dim(), amax);
    std::vector<std::vector<double>> integral(alphas.size(), std::vector<double>(bmax + 1, 0.0));
    for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
        SampledNet d = spectral_derivative(base, alphas[ai]);
        for (int b = 0; b <= bmax; ++b) {
            double sum = 0.0;
            for (std::size_t i = 0; i < g.site_count(); ++i)
                sum += weight[b][i] * std::abs(d.slices[0][i]);
            integral[ai][b] = sum * cell;
        }
    }
    return integral;
}

}  // namespace

double seminorm_estimate(const Mollifier& phi, double b, int trunc_alpha, int trunc_beta) {
    if (!(b > 0.0)) throw ConfigError("seminorm_estimate: need b > 0");
    const double s = phi.bump.order().s();
    auto alphas = multi_indices_up_to(phi.grid.dim(), trunc_alpha);
    auto betas = multi_indices_up_to(phi.grid.dim(), trunc_beta);
    auto integrals = derivative_weight_integrals(phi, trunc_alpha, trunc_beta);

    double sup = 0.0;
    for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
        double afac = std::pow(factorial(alphas[ai][0]) * factorial(alphas[ai][1]), s);
        for (const MultiIndex& beta : betas) {
            double bfac = std::pow(factorial(beta[0]) * factorial(beta[1]), s);
            double denom = std::pow(b, multi_order(alphas[ai]) + multi_order(beta)) * afac * bfac;
            sup = std::max(sup, integrals[ai][multi_order(beta)] / denom);
        }
    }
    return sup;
}

MollifierNet mollifier_net(const Mollifier& phi, const EpsilonLadder& ladder, const Grid& grid) {
    if (!(phi.grid == grid))
        throw IncompatibilityError("mollifier_net: mollifier built for a different grid");

    std::vector<double> kept;
    for (double eps : ladder.values()) {
        if (phi.bump.r2() / eps <= grid.nyquist()) kept.push_back(eps);
    }
    if (kept.size() < 4)
        throw IncompatibilityError("mollifier_net: fewer than 4 ladder entries resolve the "
                                   "scaled cutoff on this grid");
    MollifierNet net{phi, ladder, EpsilonLadder(kept), grid, {}, {}, {}, {}};
    if (kept.size() != ladder.size())
        net.notes.push_back("mollifier_net: slices truncated to " + std::to_string(kept.size()) +
                            " entries by the Nyquist compatibility rule");

    const Grid axis = axis_of(grid);
    const int n = grid.points();
    for (double eps : net.slice_ladder.values()) {
        std::vector<double> profile(n);
        for (int m = 0; m < n; ++m) profile[m] = phi.bump(eps * std::abs(axis.freq(m)));
        std::vector<double> slice1 = profile_to_samples(axis, profile);
        double peak1 = std::accumulate(profile.begin(), profile.end(), 0.0) / (2.0 * grid.extent());
        double mass1 = std::accumulate(slice1.begin(), slice1.end(), 0.0) * axis.spacing();

        std::vector<Complex> slice(grid.site_count());
        if (grid.dim() == 1) {
            for (int i = 0; i < n; ++i) slice[i] = slice1[i];
        } else {
            for (int iy = 0; iy < n; ++iy)
                for (int ix = 0; ix < n; ++ix) slice[grid.site(ix, iy)] = slice1[ix] * slice1[iy];
        }
        net.slices.push_back(std::move(slice));
        net.peaks.push_back(grid.dim() == 1 ? peak1 : peak1 * peak1);
        net.masses.push_back(grid.dim() == 1 ? mass1 : mass1 * mass1);
    }
    return net;
}

SampledNet MollifierNet::as_net() const {
    SampledNet net{base.bump.order(), slice_ladder, grid, slices, std::nullopt, notes};
    return net;
}

}  // namespace ultranet
