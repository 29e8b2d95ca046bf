#include "ultranet/spectrum.hpp"

#include <algorithm>
#include <sstream>

#include "ultranet/fft.hpp"
#include "ultranet/least_squares.hpp"
#include "ultranet/parallel.hpp"

namespace ultranet {

NetSpectrum fourier_net(const SampledNet& net) {
    NetSpectrum spec{net.order, net.ladder, net.grid, {}, {}};
    spec.spectra.resize(net.slices.size());
    parallel_for(net.slices.size(), [&](std::size_t j) {
        fft::forward(net.grid, net.slices[j], spec.spectra[j]);
    });
    return spec;
}

SampledNet inverse_fourier_net(const NetSpectrum& spec) {
    SampledNet net{spec.order, spec.ladder, spec.grid, {}, std::nullopt, {}};
    net.slices.resize(spec.spectra.size());
    parallel_for(spec.spectra.size(), [&](std::size_t j) {
        fft::inverse(spec.grid, spec.spectra[j], net.slices[j]);
    });
    return net;
}

double parseval_defect(const SampledNet& net, const NetSpectrum& spec) {
    // h sum |f|^2 = (2L)^{-m} sum |fhat|^2 for our transform pair.
    const double cell = std::pow(net.grid.spacing(), net.grid.dim());
    const double dual = std::pow(2.0 * net.grid.extent(), -net.grid.dim());
    double worst = 0.0;
    for (std::size_t j = 0; j < net.slices.size(); ++j) {
        double es = 0.0, ef = 0.0;
        for (const Complex& z : net.slices[j]) es += std::norm(z);
        for (const Complex& z : spec.spectra[j]) ef += std::norm(z);
        es *= cell;
        ef *= dual;
        double denom = std::max(es, ef);
        if (denom > 0.0) worst = std::max(worst, std::abs(es - ef) / denom);
    }
    return worst;
}

DirectionBins::DirectionBins(int dim, int count) : dim_(dim), count_(count) {
    if (dim == 1) {
        if (count != 2) throw ConfigError("DirectionBins: 1d uses exactly 2 sign bins");
    } else if (dim == 2) {
        if (count < 4 || count % 2 != 0)
            throw ConfigError("DirectionBins: 2d bin count must be even and >= 4");
    } else {
        throw ConfigError("DirectionBins: dim must be 1 or 2");
    }
}

int DirectionBins::bin_of(double kx, double ky) const {
    if (dim_ == 1) return kx > 0.0 ? 0 : 1;
    double theta = std::atan2(ky, kx);
    if (theta < 0.0) theta += 2.0 * M_PI;
    int b = static_cast<int>(theta / (2.0 * M_PI / count_));
    return b >= count_ ? count_ - 1 : b;
}

double DirectionBins::bin_angle(int b) const {
    if (dim_ == 1) return b == 0 ? M_PI / 2.0 : -M_PI / 2.0;
    return (b + 0.5) * 2.0 * M_PI / count_;
}

std::vector<std::array<double, 2>> DirectionBins::directions_in_bin(int b, int per_bin) const {
    std::vector<std::array<double, 2>> dirs;
    if (dim_ == 1) {
        dirs.assign(1, {b == 0 ? 1.0 : -1.0, 0.0});
        return dirs;
    }
    const double width = 2.0 * M_PI / count_;
    for (int i = 0; i < per_bin; ++i) {
        double theta = (b + (i + 0.5) / per_bin) * width;
        dirs.push_back({std::cos(theta), std::sin(theta)});
    }
    return dirs;
}

namespace {

struct ShellLayout {
    double r_min;
    double r_max;
    double spo;
    int shell_count;

    int shell_of(double r) const {
        if (r < r_min || r > r_max) return -1;
        int s = static_cast<int>(std::log2(r / r_min) * spo);
        return std::min(s, shell_count - 1);
    }
};

ShellLayout make_shells(const Grid& grid, const FitOptions& opts) {
    ShellLayout l{};
    l.r_min = opts.r_min_steps * grid.freq_step();
    l.r_max = opts.r_max_nyquist_frac * grid.nyquist();
    if (l.r_max <= l.r_min)
        throw ConfigError("fit window is empty: r_max <= r_min on this grid");
    l.spo = opts.shells_per_octave;
    l.shell_count = static_cast<int>(std::log2(l.r_max / l.r_min) * l.spo) + 1;
    return l;
}

struct FitSamples {
    std::vector<double> x;     // eps^{-1/(2s-1)}
    std::vector<double> lx;    // ln(1/eps), absorbs polynomial prefactors
    std::vector<double> rho;   // |xi|^{1/s}
    std::vector<double> y;     // ln shell max
    int excluded = 0;
    bool any_above_floor = false;
};

// Shell-max aggregation emulating the sup in the defining bounds: one sample
// per (eps, shell), taken at the frequency attaining the max.
FitSamples collect_samples(const NetSpectrum& spec, const GevreyOrder& order,
                           const FitOptions& opts,
                           const std::function<bool(double, double)>& in_region) {
    const Grid& grid = spec.grid;
    const int n = grid.points();
    ShellLayout shells = make_shells(grid, opts);

    FitSamples out;
    for (std::size_t j = 0; j < spec.spectra.size(); ++j) {
        double slice_max = 0.0;
        for (const Complex& z : spec.spectra[j]) slice_max = std::max(slice_max, std::abs(z));
        if (slice_max == 0.0) continue;
        const double floor = opts.noise_floor_rel * slice_max;

        std::vector<double> shell_best(shells.shell_count, 0.0);
        std::vector<double> shell_r(shells.shell_count, 0.0);
        for (int my = 0; my < (grid.dim() == 2 ? n : 1); ++my)
            for (int mx = 0; mx < n; ++mx) {
                double kx = grid.freq(mx);
                double ky = grid.dim() == 2 ? grid.freq(my) : 0.0;
                double r = std::hypot(kx, ky);
                int s = shells.shell_of(r);
                if (s < 0 || !in_region(kx, ky)) continue;
                double mag = std::abs(spec.spectra[j][grid.site(mx, my)]);
                if (mag > shell_best[s]) {
                    shell_best[s] = mag;
                    shell_r[s] = r;
                }
            }
        double x = std::pow(spec.ladder[j], -order.eps_exponent());
        double lx = std::log(1.0 / spec.ladder[j]);
        for (int s = 0; s < shells.shell_count; ++s) {
            if (shell_best[s] == 0.0) continue;  // shell empty in this bin
            if (shell_best[s] < floor) {
                ++out.excluded;
                continue;
            }
            out.any_above_floor = true;
            out.x.push_back(x);
            out.lx.push_back(lx);
            out.rho.push_back(std::pow(shell_r[s], order.freq_exponent()));
            out.y.push_back(std::log(shell_best[s]));
        }
    }
    return out;
}

}  // namespace

DecayFit fit_decay(const NetSpectrum& spec, const DirectionBins& bins, int bin,
                   const GevreyOrder& order, const FitOptions& opts) {
    if (bins.dim() != spec.grid.dim())
        throw IncompatibilityError("fit_decay: bins dimension does not match the spectrum");
    FitSamples samples = collect_samples(
        spec, order, opts, [&](double kx, double ky) { return bins.bin_of(kx, ky) == bin; });

    DecayFit fit;
    fit.bin = bin;
    fit.excluded_count = samples.excluded;
    fit.sample_count = static_cast<int>(samples.y.size());
    if (!samples.any_above_floor) {
        fit.vacuous = true;  // the bound holds by emptiness
        return fit;
    }
    if (fit.sample_count < opts.min_samples)
        throw UnderdeterminedFitError("fit_decay: only " + std::to_string(fit.sample_count) +
                                      " usable samples in bin " + std::to_string(bin));

    // The ln(1/eps) column absorbs polynomial prefactors in eps (both
    // growth and decay), which the exponential bound dominates; k1 stays the
    // eps^{-1/(2s-1)} coefficient and is clamped at zero.
    std::vector<double> ones(samples.y.size(), 1.0);
    double resid = 0.0;
    auto coef = least_squares({ones, samples.x, samples.lx, samples.rho}, samples.y, &resid);
    if (coef[1] < 0.0) {
        coef = least_squares({ones, samples.lx, samples.rho}, samples.y, &resid);
        fit.c0 = coef[0];
        fit.k1 = 0.0;
        fit.k2 = -coef[2];
    } else {
        fit.c0 = coef[0];
        fit.k1 = coef[1];
        fit.k2 = -coef[3];
    }
    fit.residual_rms = resid;
    return fit;
}

RegularityReport regularity_test(const SampledNet& net, const DirectionBins& bins,
                                 const FitOptions& opts) {
    NetSpectrum spec = fourier_net(net);
    RegularityReport report;
    report.regular = true;
    for (int b = 0; b < bins.count(); ++b) {
        DecayFit fit = fit_decay(spec, bins, b, net.order, opts);
        if (!fit.regular(opts)) report.regular = false;
        report.fits.push_back(fit);
    }
    return report;
}

SupportBoundReport compact_support_bound_check(const SampledNet& net, const FitOptions& opts,
                                               std::optional<Box> assume_support) {
    if (!net.support_box && !assume_support)
        throw PreconditionError("compact_support_bound_check: net carries no support box");
    NetSpectrum spec = fourier_net(net);
    FitSamples samples =
        collect_samples(spec, net.order, opts, [](double, double) { return true; });

    SupportBoundReport report;
    report.sample_count = static_cast<int>(samples.y.size());
    if (!samples.any_above_floor) {
        report.pass = true;
        return report;
    }
    if (report.sample_count < opts.min_samples)
        throw UnderdeterminedFitError("compact_support_bound_check: too few samples");
    std::vector<double> ones(samples.y.size(), 1.0);
    double resid = 0.0;
    auto coef = least_squares({ones, samples.x, samples.lx, samples.rho}, samples.y, &resid);
    report.xi_coefficient = coef[3];
    report.k1 = coef[1];
    report.residual_rms = resid;
    report.pass = coef[3] <= 0.1 && resid <= 2.0 * opts.rho_max;
    return report;
}

std::string decay_fits_csv(const std::vector<DecayFit>& fits) {
    std::ostringstream os;
    os << "bin,c0,k1,k2,residual_rms,samples,excluded,vacuous\n";
    for (const DecayFit& f : fits)
        os << f.bin << ',' << f.c0 << ',' << f.k1 << ',' << f.k2 << ',' << f.residual_rms << ','
           << f.sample_count << ',' << f.excluded_count << ',' << (f.vacuous ? 1 : 0) << '\n';
    return os.str();
}

}  // namespace ultranet
