#include "ultranet/microlocal.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "ultranet/fft.hpp"
#include "ultranet/least_squares.hpp"
#include "ultranet/parallel.hpp"

namespace ultranet {

ConeSet::ConeSet(const DirectionBins& bins, std::vector<int> members)
    : dim_(bins.dim()), bin_count_(bins.count()), members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    for (int b : members_)
        if (b < 0 || b >= bin_count_) throw ConfigError("ConeSet: bin index out of range");
}

bool ConeSet::contains(int b) const {
    return std::binary_search(members_.begin(), members_.end(), b);
}

ConeSet ConeSet::unite(const ConeSet& o) const {
    ConeSet r = *this;
    r.members_.insert(r.members_.end(), o.members_.begin(), o.members_.end());
    std::sort(r.members_.begin(), r.members_.end());
    r.members_.erase(std::unique(r.members_.begin(), r.members_.end()), r.members_.end());
    return r;
}

ConeSet ConeSet::intersect(const ConeSet& o) const {
    ConeSet r = *this;
    r.members_.clear();
    std::set_intersection(members_.begin(), members_.end(), o.members_.begin(), o.members_.end(),
                          std::back_inserter(r.members_));
    return r;
}

ConeSet ConeSet::dilate(int k) const {
    if (dim_ == 1 || k <= 0) return *this;
    ConeSet r = *this;
    std::vector<int> grown;
    for (int b : members_)
        for (int d = -k; d <= k; ++d) grown.push_back(((b + d) % bin_count_ + bin_count_) % bin_count_);
    std::sort(grown.begin(), grown.end());
    grown.erase(std::unique(grown.begin(), grown.end()), grown.end());
    r.members_ = std::move(grown);
    return r;
}

bool ConeSet::subset_of(const ConeSet& o, int dilation_tolerance) const {
    ConeSet target = o.dilate(dilation_tolerance);
    for (int b : members_)
        if (!target.contains(b)) return false;
    return true;
}

ConeSet sigma_cone_of_spectrum(const NetSpectrum& spec, const GevreyOrder& order,
                               const DirectionBins& bins, const FitOptions& opts,
                               std::vector<DecayFit>* fits_out) {
    std::vector<int> members;
    for (int b = 0; b < bins.count(); ++b) {
        DecayFit fit = fit_decay(spec, bins, b, order, opts);
        if (!fit.regular(opts)) members.push_back(b);
        if (fits_out) fits_out->push_back(fit);
    }
    return ConeSet(bins, std::move(members));
}

ConeSet sigma_cone(const SampledNet& net, const DirectionBins& bins, const FitOptions& opts) {
    NetSpectrum spec = fourier_net(net);
    return sigma_cone_of_spectrum(spec, net.order, bins, opts);
}

namespace {

int next_pow2(int v) {
    int p = 16;
    while (p < v) p *= 2;
    return p;
}

struct LocalizerScales {
    std::vector<double> support_radii;  // physical, largest first
    /// Measured spectral decay rate of the bare window at each scale.
    std::vector<double> window_rates;
};

LocalizerScales make_scales(const Grid& grid, const LocalizerOptions& lopts) {
    const double h = grid.spacing();
    int base = lopts.base_support_spacings;
    // Directional resolution needs physically wide windows; spatial
    // resolution needs narrow ones. The default ladder starts near a fifth
    // of the domain and divides by the scale factor down to the width floor.
    if (base <= 0) base = std::max(grid.points() / 5, 9 * lopts.min_support_spacings);
    LocalizerScales s;
    double r = base * h / 2.0;  // radius from the support width
    while (2.0 * r >= lopts.min_support_spacings * h * (1.0 - 1e-9)) {
        s.support_radii.push_back(r);
        r /= lopts.scale_factor;
    }
    if (s.support_radii.empty())
        throw ConfigError("localizer: base window below the minimum support");
    return s;
}

double wrapped_delta(double a, double b, double period) {
    double d = a - b;
    while (d < -period / 2) d += period;
    while (d >= period / 2) d -= period;
    return d;
}

// Extract the window-weighted samples around x0 onto a power-of-two subgrid;
// the window vanishes before the subgrid edge so the restriction is periodic.
struct WindowedSlice {
    Grid grid;
    std::vector<Complex> samples;
    double max_abs = 0.0;
};

WindowedSlice window_slice(const SampledNet& net, std::size_t j, const std::array<double, 2>& x0,
                           double support_radius, const LocalizerOptions& lopts) {
    const Grid& g = net.grid;
    const int n = g.points();
    const double h = g.spacing();
    const double period = 2.0 * g.extent();
    // One-dimensional windowed spectra stay on the full lattice (dense rings
    // keep the shell maxima honest); two-dimensional ones zoom into the
    // smallest power-of-two box covering the window, where annuli still hold
    // plenty of lattice points.
    int s = g.dim() == 1
                ? n
                : std::min(next_pow2(2 * static_cast<int>(std::ceil(support_radius / h)) + 8), n);
    Grid sub(g.dim(), s * h / 2.0, s);

    const double plateau = lopts.plateau_ratio * support_radius;
    const double order_s = net.order.s();

    WindowedSlice out{sub, std::vector<Complex>(sub.site_count()), 0.0};
    std::array<int, 2> i0{0, 0};
    for (int d = 0; d < g.dim(); ++d)
        i0[d] = static_cast<int>(std::floor((x0[d] + g.extent()) / h - 0.5 + 0.5));

    for (int sy = 0; sy < (g.dim() == 2 ? s : 1); ++sy)
        for (int sx = 0; sx < s; ++sx) {
            int ix = ((i0[0] + sx - s / 2) % n + n) % n;
            int iy = g.dim() == 2 ? ((i0[1] + sy - s / 2) % n + n) % n : 0;
            double dx = wrapped_delta(g.coord(ix), x0[0], period);
            double w = gevrey_window(dx, plateau, support_radius, order_s, lopts.glue_sigma);
            if (g.dim() == 2) {
                double dy = wrapped_delta(g.coord(iy), x0[1], period);
                w *= gevrey_window(dy, plateau, support_radius, order_s, lopts.glue_sigma);
            }
            Complex v = w * net.slices[j][g.site(ix, iy)];
            out.samples[out.grid.site(sx, sy)] = v;
            out.max_abs = std::max(out.max_abs, std::abs(v));
        }
    return out;
}

double net_max_abs(const SampledNet& net) {
    double m = 0.0;
    for (const auto& s : net.slices)
        for (const Complex& z : s) m = std::max(m, std::abs(z));
    return m;
}

// Fit options for a subgrid spectrum: keep the radial window physical.
FitOptions subgrid_options(const FitOptions& fopts, const Grid& base, const Grid& sub,
                           const LocalizerOptions& lopts) {
    FitOptions o = fopts;
    o.r_min_steps = fopts.r_min_steps * base.freq_step() / sub.freq_step();
    o.r_max_nyquist_frac = fopts.r_max_nyquist_frac;  // Nyquist is shared
    o.min_samples = std::min(fopts.min_samples, lopts.min_samples_local);
    return o;
}

// Spectral decay rate of the bare window at one scale: slope of the
// shell-max log magnitudes against |xi|^{1/s}. This is the fastest decay a
// fit through that window can exhibit.
double measure_window_rate(const Grid& grid, const GevreyOrder& order, double support_radius,
                           const FitOptions& fopts, const LocalizerOptions& lopts) {
    SampledNet one{order, EpsilonLadder({0.9, 0.8, 0.7, 0.6}), grid, {}, std::nullopt, {}};
    one.slices.assign(1, std::vector<Complex>(grid.site_count(), Complex(1.0)));
    std::array<double, 2> center{grid.coord(grid.points() / 2),
                                 grid.dim() == 2 ? grid.coord(grid.points() / 2) : 0.0};
    WindowedSlice w = window_slice(one, 0, center, support_radius, lopts);
    std::vector<Complex> hat;
    fft::forward(w.grid, w.samples, hat);

    FitOptions sopts = subgrid_options(fopts, grid, w.grid, lopts);
    const Grid& sub = w.grid;
    const double r_min = sopts.r_min_steps * sub.freq_step();
    const double r_max = sopts.r_max_nyquist_frac * sub.nyquist();
    const int n = sub.points();
    double peak = 0.0;
    for (const Complex& z : hat) peak = std::max(peak, std::abs(z));
    std::map<int, std::pair<double, double>> shell_best;  // shell -> (mag, r)
    for (int my = 0; my < (sub.dim() == 2 ? n : 1); ++my)
        for (int mx = 0; mx < n; ++mx) {
            double r = std::hypot(sub.freq(mx), sub.dim() == 2 ? sub.freq(my) : 0.0);
            if (r < r_min || r > r_max) continue;
            int shell = static_cast<int>(std::log2(r / r_min) * sopts.shells_per_octave);
            double mag = std::abs(hat[sub.site(mx, my)]);
            auto& best = shell_best[shell];
            if (mag > best.first) best = {mag, r};
        }
    std::vector<double> ones, rho, y;
    for (const auto& [shell, best] : shell_best) {
        if (best.first < fopts.noise_floor_rel * peak) continue;
        ones.push_back(1.0);
        rho.push_back(std::pow(best.second, order.freq_exponent()));
        y.push_back(std::log(best.first));
    }
    if (y.size() < 3) return fopts.kappa_reg;  // window too small to measure
    auto coef = least_squares({ones, rho}, y);
    return std::max(0.0, -coef[1]);
}

struct LocalizerContext {
    LocalizerScales scales;
    double global_max = 0.0;
    std::vector<double> parent_slice_max;
    /// Unwindowed cone of the whole net. On the torus the constant cutoff is
    /// a member of the localizer family, and every localized cone nests
    /// inside the global one, so it always joins the intersection.
    ConeSet global_cone;
    std::vector<DecayFit> global_fits;
};

LocalizerContext make_localizer_context(const SampledNet& net, const DirectionBins& bins,
                                        const FitOptions& fopts, const LocalizerOptions& lopts) {
    LocalizerContext ctx;
    ctx.scales = make_scales(net.grid, lopts);
    for (const auto& s : net.slices) {
        double m = 0.0;
        for (const Complex& z : s) m = std::max(m, std::abs(z));
        ctx.parent_slice_max.push_back(m);
        ctx.global_max = std::max(ctx.global_max, m);
    }
    for (double r : ctx.scales.support_radii)
        ctx.scales.window_rates.push_back(
            measure_window_rate(net.grid, net.order, r, fopts, lopts));
    NetSpectrum spec = fourier_net(net);
    std::vector<int> members;
    for (int b = 0; b < bins.count(); ++b) {
        try {
            DecayFit fit = fit_decay(spec, bins, b, net.order, fopts);
            if (!fit.regular(fopts)) members.push_back(b);
            ctx.global_fits.push_back(fit);
        } catch (const UnderdeterminedFitError&) {
            members.push_back(b);  // too little data to certify the bin regular
            DecayFit placeholder;
            placeholder.bin = b;
            ctx.global_fits.push_back(placeholder);
        }
    }
    ctx.global_cone = ConeSet(bins, std::move(members));
    return ctx;
}

struct ScaleResult {
    ConeSet cone;
    /// Content at the noise level or negligible relative to the parent.
    bool quiet = false;
    /// The window rate supports directional verdicts at this scale.
    bool resolving = true;
    std::vector<DecayFit> fits;
};

ScaleResult sigma_at_scale(const SampledNet& net, const std::array<double, 2>& x0,
                           std::size_t scale, const LocalizerContext& ctx,
                           const DirectionBins& bins, const FitOptions& fopts,
                           const LocalizerOptions& lopts) {
    const double support_radius = ctx.scales.support_radii[scale];
    const bool resolving =
        ctx.scales.window_rates[scale] >= lopts.usable_rate_factor * fopts.kappa_reg;

    NetSpectrum spec{net.order, net.ladder, net.grid, {}, {}};
    double max_abs = 0.0;
    Grid sub = net.grid;
    std::vector<double> rel_sups;
    for (std::size_t j = 0; j < net.slices.size(); ++j) {
        WindowedSlice w = window_slice(net, j, x0, support_radius, lopts);
        sub = w.grid;
        max_abs = std::max(max_abs, w.max_abs);
        // windowed content at the per-slice roundoff floor reads as zero
        bool dust = w.max_abs <= lopts.activity_floor * ctx.parent_slice_max[j];
        rel_sups.push_back(!dust && ctx.parent_slice_max[j] > 0.0
                               ? w.max_abs / ctx.parent_slice_max[j]
                               : 0.0);
        if (resolving) {
            std::vector<Complex> hat;
            fft::forward(w.grid, w.samples, hat);
            spec.spectra.push_back(std::move(hat));
        }
    }
    if (max_abs <= lopts.activity_floor * ctx.global_max)
        return {ConeSet(bins, {}), true, resolving};
    // The windowed content may be a null net relative to the parent
    // representative; the zero class is regular, so the cone is empty.
    if (negligible_sup_series(net.order, net.ladder, rel_sups, lopts.content_k_min))
        return {ConeSet(bins, {}), true, resolving};

    if (!resolving) {
        // Too rough a window to certify any direction: the scale localizes
        // (quiet above) but excludes nothing.
        std::vector<int> all(bins.count());
        for (int b = 0; b < bins.count(); ++b) all[b] = b;
        return {ConeSet(bins, all), false, false};
    }

    spec.grid = sub;
    spec.provenance = {true, x0, support_radius};
    FitOptions sopts = subgrid_options(fopts, net.grid, sub, lopts);
    sopts.kappa_reg = std::min(fopts.kappa_reg,
                               lopts.window_rate_fraction * ctx.scales.window_rates[scale]);
    ScaleResult res;
    res.quiet = false;
    res.resolving = true;
    res.cone = sigma_cone_of_spectrum(spec, net.order, bins, sopts, &res.fits);
    return res;
}

}  // namespace

namespace {

LocalizedSigma sigma_localized_with(const SampledNet& net, const std::array<double, 2>& x0,
                                    const DirectionBins& bins, const FitOptions& fopts,
                                    const LocalizerOptions& lopts, const LocalizerContext& ctx) {
    for (int d = 0; d < net.grid.dim(); ++d)
        if (x0[d] <= -net.grid.extent() || x0[d] >= net.grid.extent())
            throw PreconditionError("sigma_localized: x0 outside the grid interior");

    const std::size_t n_scales = ctx.scales.support_radii.size();
    LocalizedSigma out;
    out.fits = ctx.global_fits;
    // The global cone bounds every localized cone. An empty one or a quiet
    // smallest window short-circuits the remaining scales.
    out.cone = ctx.global_cone;
    if (out.cone.empty()) {
        out.per_scale.assign(n_scales, ConeSet(bins, {}));
        for (std::size_t j = 0; j < n_scales; ++j) out.scales_used.push_back(static_cast<int>(j));
        return out;
    }
    ScaleResult smallest = sigma_at_scale(net, x0, n_scales - 1, ctx, bins, fopts, lopts);
    out.cone = out.cone.intersect(smallest.cone);
    if (out.cone.empty()) {
        out.per_scale.assign(n_scales, ConeSet(bins, {}));
        out.per_scale.back() = smallest.cone;
        for (std::size_t j = 0; j < n_scales; ++j) out.scales_used.push_back(static_cast<int>(j));
        return out;
    }

    out.per_scale.resize(n_scales);
    out.per_scale.back() = smallest.cone;
    std::vector<bool> resolving(n_scales, false);
    resolving[n_scales - 1] = smallest.resolving && !smallest.quiet;
    for (std::size_t j = 0; j + 1 < n_scales; ++j) {
        ScaleResult r = sigma_at_scale(net, x0, j, ctx, bins, fopts, lopts);
        out.per_scale[j] = r.cone;
        resolving[j] = r.resolving && !r.quiet;
        if (!r.fits.empty()) out.fits = r.fits;  // largest resolving scale wins
        out.cone = out.cone.intersect(r.cone);
        if (out.cone.empty()) break;
    }
    for (std::size_t j = 0; j < n_scales; ++j) out.scales_used.push_back(static_cast<int>(j));
    // Nested decrease is meaningful between direction-resolving scales only.
    for (std::size_t j = 0; j + 1 < out.per_scale.size(); ++j)
        if (resolving[j] && resolving[j + 1] &&
            !out.per_scale[j + 1].subset_of(out.per_scale[j], 1))
            ++out.nested_violations;
    return out;
}

}  // namespace

LocalizedSigma sigma_localized(const SampledNet& net, const std::array<double, 2>& x0,
                               const DirectionBins& bins, const FitOptions& fopts,
                               const LocalizerOptions& lopts) {
    LocalizerContext ctx = make_localizer_context(net, bins, fopts, lopts);
    return sigma_localized_with(net, x0, bins, fopts, lopts, ctx);
}

bool WavefrontEstimate::has_pair(const std::array<int, 2>& cell, int bin) const {
    for (const auto& p : pairs)
        if (p.cell == cell && p.bin == bin) return true;
    return false;
}

std::array<double, 2> WavefrontEstimate::cell_center(const std::array<int, 2>& cell) const {
    std::array<double, 2> c{0.0, 0.0};
    for (int d = 0; d < grid.dim(); ++d)
        c[d] = -grid.extent() + (cell[d] + 0.5) * cell_spacings * grid.spacing();
    return c;
}

bool WavefrontEstimate::subset_of(const WavefrontEstimate& o, int cell_dilation,
                                  int bin_dilation) const {
    for (const auto& p : pairs) {
        bool covered = false;
        for (const auto& q : o.pairs) {
            bool cell_ok = true;
            for (int d = 0; d < grid.dim(); ++d)
                if (std::abs(p.cell[d] - q.cell[d]) > cell_dilation) cell_ok = false;
            if (!cell_ok) continue;
            int diff = std::abs(p.bin - q.bin);
            if (grid.dim() == 2) diff = std::min(diff, bin_count - diff);
            else if (diff != 0) continue;  // sign bins have no neighbours
            if (diff <= (grid.dim() == 2 ? bin_dilation : 0)) {
                covered = true;
                break;
            }
        }
        if (!covered) return false;
    }
    return true;
}

std::string WavefrontEstimate::csv() const {
    std::ostringstream os;
    os << (grid.dim() == 2 ? "cell_x,cell_y,bin_index,bin_angle,verdict,k2,residual\n"
                           : "cell_x,bin_index,bin_angle,verdict,k2,residual\n");
    DirectionBins bins(grid.dim(), bin_count);
    for (const auto& p : pairs) {
        os << p.cell[0] << ',';
        if (grid.dim() == 2) os << p.cell[1] << ',';
        os << p.bin << ',' << bins.bin_angle(p.bin) << ",singular," << p.k2 << ',' << p.residual
           << '\n';
    }
    return os.str();
}

WavefrontEstimate wavefront(const SampledNet& net, const DirectionBins& bins,
                            const FitOptions& fopts, const LocalizerOptions& lopts) {
    const Grid& g = net.grid;
    WavefrontEstimate wf{g, bins.count(), lopts.cell_spacings, {0, 0}, {}, {}, {}, 0};
    int cells_per_axis = g.points() / lopts.cell_spacings;
    wf.cell_counts = {cells_per_axis, g.dim() == 2 ? cells_per_axis : 1};

    LocalizerContext ctx = make_localizer_context(net, bins, fopts, lopts);
    for (std::size_t j = 0; j < ctx.scales.support_radii.size(); ++j)
        wf.scales_used.push_back(static_cast<int>(j));
    wf.resolution_cells = std::max(
        1, static_cast<int>(std::ceil(ctx.scales.support_radii.front() /
                                      (lopts.cell_spacings * g.spacing()))));
    const double global_max = ctx.global_max;
    const double prescreen_radius = ctx.scales.support_radii.front();

    std::size_t total = static_cast<std::size_t>(wf.cell_counts[0]) * wf.cell_counts[1];
    std::vector<std::vector<WavefrontPair>> per_cell(total);
    std::vector<int> violations(total, 0);

    if (ctx.global_cone.empty()) return wf;  // regular everywhere

    parallel_for(total, [&](std::size_t idx) {
        std::array<int, 2> cell{static_cast<int>(idx) % wf.cell_counts[0],
                                static_cast<int>(idx) / wf.cell_counts[0]};
        std::array<double, 2> center = wf.cell_center(cell);

        // Activity prescreen on the largest window: all-quiet cells are
        // vacuous at every scale.
        bool active = false;
        const double h = g.spacing();
        int reach = static_cast<int>(prescreen_radius / h) + 1;
        std::array<int, 2> i0{0, 0};
        for (int d = 0; d < g.dim(); ++d)
            i0[d] = static_cast<int>(std::floor((center[d] + g.extent()) / h));
        for (int dy = (g.dim() == 2 ? -reach : 0); dy <= (g.dim() == 2 ? reach : 0) && !active;
             dy += 2)
            for (int dx = -reach; dx <= reach && !active; dx += 2) {
                int ix = ((i0[0] + dx) % g.points() + g.points()) % g.points();
                int iy = g.dim() == 2 ? ((i0[1] + dy) % g.points() + g.points()) % g.points() : 0;
                for (std::size_t j = 0; j < net.slices.size(); ++j)
                    if (std::abs(net.slices[j][g.site(ix, iy)]) >
                        lopts.activity_floor * global_max) {
                        active = true;
                        break;
                    }
            }
        if (!active) return;

        LocalizedSigma sig = sigma_localized_with(net, center, bins, fopts, lopts, ctx);
        violations[idx] = sig.nested_violations;
        if (sig.cone.empty()) return;

        for (int b : sig.cone.members()) {
            WavefrontPair p;
            p.cell = cell;
            p.bin = b;
            for (const DecayFit& f : sig.fits)
                if (f.bin == b) {
                    p.k2 = f.k2;
                    p.residual = f.residual_rms;
                }
            per_cell[idx].push_back(p);
        }
    });

    for (std::size_t idx = 0; idx < total; ++idx) {
        wf.nested_violations += violations[idx];
        if (per_cell[idx].empty()) continue;
        std::array<int, 2> cell{static_cast<int>(idx) % wf.cell_counts[0],
                                static_cast<int>(idx) / wf.cell_counts[0]};
        wf.singular_cells.push_back(cell);
        for (auto& p : per_cell[idx]) wf.pairs.push_back(p);
    }
    return wf;
}

std::vector<std::array<int, 2>> sing_supp(const SampledNet& net, const DirectionBins& bins,
                                          const FitOptions& fopts, const LocalizerOptions& lopts) {
    return wavefront(net, bins, fopts, lopts).singular_cells;
}

WfPropertyReport check_wf_properties(const SampledNet& net, const MultiIndex& alpha,
                                     const SampledNet& regular_factor, const DirectionBins& bins,
                                     const FitOptions& fopts, const LocalizerOptions& lopts) {
    RegularityReport reg = regularity_test(regular_factor, bins, fopts);
    if (!reg.regular)
        throw PreconditionError("check_wf_properties: the factor fails the regularity test");

    WfPropertyReport report;
    report.wf_net = wavefront(net, bins, fopts, lopts);
    report.wf_derivative = wavefront(spectral_derivative(net, alpha), bins, fopts, lopts);
    report.wf_product = wavefront(net_mul(regular_factor, net), bins, fopts, lopts);

    // Inclusions hold up to the estimator's positional resolution and one bin.
    int dil = report.wf_net.resolution_cells;
    report.derivative_inclusion = report.wf_derivative.subset_of(report.wf_net, dil, 1);
    report.factor_inclusion = report.wf_product.subset_of(report.wf_net, dil, 1);
    if (!report.derivative_inclusion)
        report.violations.push_back("derivative wavefront escapes the one-bin/one-cell dilation");
    if (!report.factor_inclusion)
        report.violations.push_back("regular-factor wavefront escapes the dilation");
    return report;
}

}  // namespace ultranet
