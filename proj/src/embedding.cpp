#include "ultranet/embedding.hpp"

#include <algorithm>

#include "ultranet/fft.hpp"
#include "ultranet/least_squares.hpp"
#include "ultranet/parallel.hpp"

namespace ultranet {

double gevrey_window(double r, double plateau, double support, double s, double sigma) {
    r = std::abs(r);
    if (r <= plateau) return 1.0;
    if (r >= support) return 0.0;
    return gevrey_down_step((r - plateau) / (support - plateau), s, sigma);
}

double gevrey_bump_value(double x, double x0, double width, double amplitude) {
    double u = (x - x0) / width;
    if (std::abs(u) >= 1.0) return 0.0;
    return amplitude * std::exp(1.0 - 1.0 / (1.0 - u * u));
}

const char* to_string(DistributionKind k) {
    switch (k) {
        case DistributionKind::dirac: return "dirac";
        case DistributionKind::heaviside: return "heaviside";
        case DistributionKind::boundary_value_minus: return "boundary_value_minus";
        case DistributionKind::boundary_value_plus: return "boundary_value_plus";
        case DistributionKind::line_delta_2d: return "line_delta_2d";
        case DistributionKind::gevrey_bump_function: return "gevrey_bump_function";
        case DistributionKind::finite_linear_combination: return "finite_linear_combination";
    }
    return "?";
}

DistributionKind distribution_kind_from_string(const std::string& name) {
    for (DistributionKind k :
         {DistributionKind::dirac, DistributionKind::heaviside,
          DistributionKind::boundary_value_minus, DistributionKind::boundary_value_plus,
          DistributionKind::line_delta_2d, DistributionKind::gevrey_bump_function,
          DistributionKind::finite_linear_combination})
        if (name == to_string(k)) return k;
    throw ConfigError("unknown distribution kind '" + name + "'");
}

SampledNet canonical_embed(const GevreyOrder& order, const EpsilonLadder& ladder,
                           const Grid& grid, const std::vector<Complex>& f,
                           std::optional<Box> support_box) {
    if (f.size() != grid.site_count())
        throw IncompatibilityError("canonical_embed: sample count does not match grid");
    SampledNet net{order, ladder, grid, {}, std::move(support_box), {}};
    net.slices.assign(ladder.size(), f);
    net.validate();
    return net;
}

namespace {

// Effective radius of the mollifier: the distance containing all but 1e-9 of
// the mass of |phi| along an axis. Used for boundary-margin checks.
double mollifier_reach(const Mollifier& m) {
    const Grid axis(1, m.grid.extent(), m.grid.points());
    std::vector<double> phi1(axis.points());
    // recover the axis profile from the first row in 2d
    for (int i = 0; i < axis.points(); ++i)
        phi1[i] = std::abs(m.grid.dim() == 1 ? m.phi[i] : m.phi[m.grid.site(i, m.grid.points() / 2)]);
    double total = 0.0;
    for (double v : phi1) total += v;
    double acc = 0.0;
    int lo = 0;
    int hi = axis.points() - 1;
    while (lo < hi && acc < 1e-9 * total) {
        acc += std::min(phi1[lo], phi1[hi]);
        ++lo;
        --hi;
    }
    return std::abs(axis.coord(lo));
}

void require_interior(const Grid& grid, const std::array<double, 2>& x, double margin,
                      const char* what) {
    for (int d = 0; d < grid.dim(); ++d)
        if (x[d] - margin < -grid.extent() || x[d] + margin > grid.extent())
            throw WraparoundError(std::string(what) +
                                  ": support too close to the periodic boundary");
}

// Scaled mollifier axis spectrum with a translation phase, DFT index order.
std::vector<Complex> shifted_axis_profile(const MollifierNet& mnet, const Grid& axis, double eps,
                                          double x0) {
    std::vector<Complex> profile(axis.points());
    for (int m = 0; m < axis.points(); ++m) {
        double xi = axis.freq(m);
        profile[m] = mnet.hat(eps, xi) * std::exp(Complex(0.0, x0 * xi));
    }
    return profile;
}

std::vector<Complex> dirac_slice_1d(const MollifierNet& mnet, const Grid& axis, double eps,
                                    double x0) {
    std::vector<Complex> hat = shifted_axis_profile(mnet, axis, eps, x0), out;
    fft::inverse(axis, hat, out);
    return out;
}

EpsilonLadder materializable_ladder(const MollifierNet& mnet, std::vector<std::string>* notes) {
    // Slices of phi_eps exist only where the scaled cutoff stays below Nyquist.
    if (mnet.slice_ladder.size() != mnet.ladder.size() && notes)
        notes->push_back("embed_distribution: ladder truncated by the Nyquist rule");
    return mnet.slice_ladder;
}

SampledNet embed_impl(const DistributionSpec& spec, const MollifierNet& mnet,
                      BoundaryValueStyle bv_style) {
    const Grid& grid = mnet.grid;
    const Grid axis(1, grid.extent(), grid.points());
    const GevreyOrder order = mnet.base.bump.order();
    const int n = grid.points();

    switch (spec.kind) {
        case DistributionKind::dirac: {
            std::vector<std::string> notes;
            EpsilonLadder ladder = materializable_ladder(mnet, &notes);
            require_interior(grid, spec.location, mollifier_reach(mnet.base) * ladder.coarsest(),
                             "dirac");
            SampledNet net{order, ladder, grid, {}, std::nullopt, std::move(notes)};
            net.slices.resize(ladder.size());
            parallel_for(ladder.size(), [&](std::size_t j) {
                double eps = ladder[j];
                std::vector<Complex> sx = dirac_slice_1d(mnet, axis, eps, spec.location[0]);
                if (grid.dim() == 1) {
                    net.slices[j] = std::move(sx);
                } else {
                    std::vector<Complex> sy = dirac_slice_1d(mnet, axis, eps, spec.location[1]);
                    net.slices[j].resize(grid.site_count());
                    for (int iy = 0; iy < n; ++iy)
                        for (int ix = 0; ix < n; ++ix)
                            net.slices[j][grid.site(ix, iy)] = sx[ix] * sy[iy];
                }
            });
            return net;
        }

        case DistributionKind::heaviside: {
            if (grid.dim() != 1)
                throw PreconditionError("heaviside embedding is one-dimensional");
            std::vector<std::string> notes;
            EpsilonLadder ladder = materializable_ladder(mnet, &notes);
            require_interior(grid, spec.location, mollifier_reach(mnet.base) * ladder.coarsest(),
                             "heaviside");
            SampledNet net{order, ladder, grid, {}, std::nullopt, std::move(notes)};
            net.slices.resize(ladder.size());
            const double h = grid.spacing();
            for (std::size_t j = 0; j < ladder.size(); ++j) {
                std::vector<Complex> d = dirac_slice_1d(mnet, axis, ladder[j], spec.location[0]);
                net.slices[j].resize(n);
                Complex acc = 0.0;
                for (int i = 0; i < n; ++i) {
                    acc += d[i] * h;
                    net.slices[j][i] = acc;
                }
            }
            net.notes.push_back("heaviside: periodic representative jumps at the domain edge");
            return net;
        }

        case DistributionKind::boundary_value_minus:
        case DistributionKind::boundary_value_plus: {
            if (grid.dim() != 1)
                throw PreconditionError("boundary-value embedding is one-dimensional");
            const double sign = spec.kind == DistributionKind::boundary_value_minus ? -1.0 : 1.0;
            if (bv_style == BoundaryValueStyle::analytic) {
                // Periodization of 1/(x - x0 -+ i eps) over the torus:
                // (pi/2L) cot(pi (x - x0 -+ i eps) / 2L).
                const double L = grid.extent();
                return net_from_closure(order, mnet.ladder, grid,
                                        [&](double eps, std::array<double, 2> x) {
                                            Complex z(x[0] - spec.location[0], sign * eps);
                                            Complex w = M_PI * z / (2.0 * L);
                                            return M_PI / (2.0 * L) * std::cos(w) / std::sin(w);
                                        });
            }
            // Mollified: spectrum 2 pi i H(+-xi) e^{-eps|xi|} never existed;
            // the distributional transform is 2 pi i H(-+sign xi), smoothed by
            // the scaled cutoff.
            SampledNet net{order, mnet.ladder, grid, {}, std::nullopt, {}};
            net.slices.resize(mnet.ladder.size());
            parallel_for(mnet.ladder.size(), [&](std::size_t j) {
                double eps = mnet.ladder[j];
                std::vector<Complex> hat(n);
                for (int m = 0; m < n; ++m) {
                    double xi = axis.freq(m);
                    double heavi = sign < 0 ? (xi > 0 ? 1.0 : (xi == 0.0 ? 0.5 : 0.0))
                                            : (xi < 0 ? 1.0 : (xi == 0.0 ? 0.5 : 0.0));
                    Complex coeff = Complex(0.0, -2.0 * M_PI * sign) * heavi * mnet.hat(eps, xi);
                    hat[m] = coeff * std::exp(Complex(0.0, spec.location[0] * xi));
                }
                fft::inverse(axis, hat, net.slices[j]);
            });
            return net;
        }

        case DistributionKind::line_delta_2d: {
            if (grid.dim() != 2)
                throw PreconditionError("line_delta_2d requires a two-dimensional grid");
            std::vector<std::string> notes;
            EpsilonLadder ladder = materializable_ladder(mnet, &notes);
            const int across = spec.axis == 0 ? 1 : 0;
            require_interior(Grid(1, grid.extent(), grid.points()),
                             {spec.location[across], 0.0},
                             mollifier_reach(mnet.base) * ladder.coarsest(), "line_delta_2d");
            SampledNet net{order, ladder, grid, {}, std::nullopt, std::move(notes)};
            net.slices.resize(ladder.size());
            for (std::size_t j = 0; j < ladder.size(); ++j) {
                std::vector<Complex> prof =
                    dirac_slice_1d(mnet, axis, ladder[j], spec.location[across]);
                net.slices[j].resize(grid.site_count());
                for (int iy = 0; iy < n; ++iy)
                    for (int ix = 0; ix < n; ++ix)
                        net.slices[j][grid.site(ix, iy)] = prof[spec.axis == 0 ? iy : ix];
            }
            return net;
        }

        case DistributionKind::gevrey_bump_function: {
            // Embed the bump as a density: slices are the spectral convolution
            // with the scaled mollifier (no Nyquist restriction; the factor is
            // band-limited).
            std::vector<Complex> f(grid.site_count());
            for (int iy = 0; iy < (grid.dim() == 2 ? n : 1); ++iy)
                for (int ix = 0; ix < n; ++ix) {
                    double v = gevrey_bump_value(grid.coord(ix), spec.location[0], spec.width,
                                                 spec.amplitude);
                    if (grid.dim() == 2)
                        v *= gevrey_bump_value(grid.coord(iy), spec.location[1], spec.width, 1.0);
                    f[grid.site(ix, iy)] = v;
                }
            require_interior(grid, spec.location, spec.width + 8 * grid.spacing(),
                             "gevrey_bump_function");
            SampledNet net{order, mnet.ladder, grid, {}, std::nullopt, {}};
            net.slices.resize(mnet.ladder.size());
            std::vector<Complex> fhat;
            fft::forward(grid, f, fhat);
            parallel_for(mnet.ladder.size(), [&](std::size_t j) {
                double eps = mnet.ladder[j];
                std::vector<Complex> hat(grid.site_count());
                if (grid.dim() == 1) {
                    for (int m = 0; m < n; ++m) hat[m] = fhat[m] * mnet.hat(eps, axis.freq(m));
                } else {
                    for (int my = 0; my < n; ++my)
                        for (int mx = 0; mx < n; ++mx)
                            hat[grid.site(mx, my)] = fhat[grid.site(mx, my)] *
                                                     mnet.hat(eps, axis.freq(mx)) *
                                                     mnet.hat(eps, axis.freq(my));
                }
                fft::inverse(grid, hat, net.slices[j]);
            });
            return net;
        }

        case DistributionKind::finite_linear_combination: {
            if (spec.terms.empty())
                throw PreconditionError("finite_linear_combination: no terms");
            SampledNet acc = net_scale(embed_impl(spec.terms[0].second, mnet, bv_style),
                                       spec.terms[0].first);
            for (std::size_t t = 1; t < spec.terms.size(); ++t) {
                SampledNet part = net_scale(embed_impl(spec.terms[t].second, mnet, bv_style),
                                            spec.terms[t].first);
                acc = net_add(acc, part);
            }
            return acc;
        }
    }
    throw Error("embed_distribution: unreachable");
}

}  // namespace

SampledNet embed_distribution(const DistributionSpec& spec, const MollifierNet& mnet,
                              BoundaryValueStyle bv_style) {
    return embed_impl(spec, mnet, bv_style);
}

MollificationReport mollification_error(const std::vector<Complex>& f,
                                        std::optional<Box> support_box, const MollifierNet& mnet,
                                        int alpha_max, const GrowthOptions& opts) {
    const Grid& grid = mnet.grid;
    if (f.size() != grid.site_count())
        throw IncompatibilityError("mollification_error: sample count does not match grid");
    const Grid axis(1, grid.extent(), grid.points());
    const int n = grid.points();

    std::vector<Complex> fhat;
    fft::forward(grid, std::vector<Complex>(f), fhat);

    SampledNet diff{mnet.base.bump.order(), mnet.ladder, grid, {}, std::nullopt, {}};
    diff.slices.resize(mnet.ladder.size());
    parallel_for(mnet.ladder.size(), [&](std::size_t j) {
        double eps = mnet.ladder[j];
        std::vector<Complex> hat(grid.site_count());
        if (grid.dim() == 1) {
            for (int m = 0; m < n; ++m) hat[m] = fhat[m] * (mnet.hat(eps, axis.freq(m)) - 1.0);
        } else {
            for (int my = 0; my < n; ++my)
                for (int mx = 0; mx < n; ++mx)
                    hat[grid.site(mx, my)] =
                        fhat[grid.site(mx, my)] *
                        (mnet.hat(eps, axis.freq(mx)) * mnet.hat(eps, axis.freq(my)) - 1.0);
        }
        fft::inverse(grid, hat, diff.slices[j]);
    });

    (void)support_box;  // the difference spreads beyond the original support
    Box region = Box::whole(grid);

    MollificationReport report;
    report.verdict = classify_net(diff, alpha_max, region, opts);

    // Per-alpha series and the prefactor pattern: intercepts of the
    // per-alpha decay against the common exponential trend grow like
    // |alpha| ln C + s ln(alpha!).
    std::vector<double> order_of, intercept;
    for (const MultiIndex& alpha : multi_indices_up_to(grid.dim(), alpha_max)) {
        auto series = growth_indicator(diff, alpha, region);
        report.per_alpha_series.emplace_back(alpha, series);
        // ln sup at the finest usable rung, shifted by the alpha=0 trend.
        double lnsup = series.back().second *
                       std::pow(mnet.ladder.values().back(), -diff.order.eps_exponent());
        order_of.push_back(static_cast<double>(multi_order(alpha)));
        intercept.push_back(lnsup);
    }
    if (order_of.size() >= 2) {
        const double s = diff.order.s();
        // Remove the factorial part, then fit ln-prefactor ~ |alpha| ln C.
        std::vector<double> ones(order_of.size(), 1.0), y(order_of.size());
        for (std::size_t i = 0; i < order_of.size(); ++i) {
            double lfac = std::lgamma(order_of[i] + 1.0);
            y[i] = intercept[i] - s * lfac;
        }
        double resid = 0.0;
        auto coef = least_squares({ones, order_of}, y, &resid);
        report.prefactor_log_c = coef[1];
        double spread = std::abs(y.back() - y.front()) + 1e-12;
        report.prefactor_rel_misfit = resid / spread;
    }
    return report;
}

DiagramReport diagram_check(const std::vector<Complex>& f, std::optional<Box> support_box,
                            const MollifierNet& mnet, int alpha_max, const GrowthOptions& opts) {
    // canonical_embed(f) - (f * phi_eps) is exactly the mollification error.
    MollificationReport m = mollification_error(f, std::move(support_box), mnet, alpha_max, opts);
    return DiagramReport{m.verdict.cls == GrowthClass::negligible, m.verdict};
}

UltradiffOperator::UltradiffOperator(const GevreyOrder& order, std::map<MultiIndex, Complex> coeffs,
                                     double c, double h)
    : order_(order), coeffs_(std::move(coeffs)), c_(c), h_(h), gamma_max_(0) {
    if (!(c > 0.0) || !(h > 0.0))
        throw ConfigError("UltradiffOperator: bound parameters must be positive");
    auto fac = [](int k) {
        double f = 1.0;
        for (int i = 2; i <= k; ++i) f *= i;
        return f;
    };
    for (const auto& [gamma, a] : coeffs_) {
        if (gamma[0] < 0 || gamma[1] < 0)
            throw ConfigError("UltradiffOperator: negative multi-index");
        gamma_max_ = std::max(gamma_max_, multi_order(gamma));
        double bound = c * std::pow(h, multi_order(gamma)) /
                       std::pow(fac(gamma[0]) * fac(gamma[1]), order_.s());
        if (std::abs(a) > bound * (1.0 + 1e-12))
            throw ConstructionError("UltradiffOperator: coefficient at (" +
                                    std::to_string(gamma[0]) + "," + std::to_string(gamma[1]) +
                                    ") violates the Gevrey bound");
    }
}

UltradiffOperator UltradiffOperator::gevrey_exponential(const GevreyOrder& order, int dim,
                                                        double c, double h, int gamma_max) {
    std::map<MultiIndex, Complex> coeffs;
    auto fac = [](int k) {
        double f = 1.0;
        for (int i = 2; i <= k; ++i) f *= i;
        return f;
    };
    for (const MultiIndex& gamma : multi_indices_up_to(dim, gamma_max))
        coeffs[gamma] = c * std::pow(h, multi_order(gamma)) /
                        std::pow(fac(gamma[0]) * fac(gamma[1]), order.s());
    return UltradiffOperator(order, std::move(coeffs), c, h);
}

UltradiffOperator UltradiffOperator::identity(const GevreyOrder& order) {
    return UltradiffOperator(order, {{MultiIndex{0, 0}, Complex(1.0)}}, 1.0, 0.5);
}

SampledNet apply_ultradiff(const UltradiffOperator& op, const SampledNet& net) {
    if (!(op.order() == net.order))
        throw IncompatibilityError("apply_ultradiff: operator and net orders differ");
    const Grid& grid = net.grid;
    const int n = grid.points();

    SampledNet out = net;
    double bandwidth = 0.0;
    parallel_for(net.slices.size(), [&](std::size_t j) {
        std::vector<Complex> hat;
        fft::forward(grid, net.slices[j], hat);
        std::vector<Complex> acc(hat.size(), Complex(0.0));
        for (int my = 0; my < (grid.dim() == 2 ? n : 1); ++my)
            for (int mx = 0; mx < n; ++mx) {
                std::size_t idx = grid.site(mx, my);
                double xx = grid.freq(mx);
                double yy = grid.dim() == 2 ? grid.freq(my) : 0.0;
                Complex mult = 0.0;
                for (const auto& [gamma, a] : op.coeffs())
                    mult += a * std::pow(Complex(0.0, -xx), gamma[0]) *
                            (grid.dim() == 2 ? std::pow(Complex(0.0, -yy), gamma[1]) : 1.0);
                acc[idx] = hat[idx] * mult;
            }
        fft::inverse(grid, acc, out.slices[j]);
    });

    // Effective bandwidth for the truncation-tail estimate.
    for (const auto& s : net.slices) {
        std::vector<Complex> hat;
        fft::forward(grid, s, hat);
        double mx = 0.0;
        for (const auto& z : hat) mx = std::max(mx, std::abs(z));
        for (int my = 0; my < (grid.dim() == 2 ? n : 1); ++my)
            for (int m = 0; m < n; ++m) {
                std::size_t idx = grid.site(m, my);
                if (std::abs(hat[idx]) > 1e-14 * mx) {
                    double r = std::hypot(grid.freq(m), grid.dim() == 2 ? grid.freq(my) : 0.0);
                    bandwidth = std::max(bandwidth, r);
                }
            }
        break;  // the coarsest slice bounds the family for our corpora
    }
    int g1 = op.gamma_max() + 1;
    double lg = std::lgamma(g1 + 1.0);
    double tail = op.bound_c() *
                  std::exp(g1 * std::log(std::max(op.bound_h() * bandwidth, 1e-300)) -
                           op.order().s() * lg);
    out.notes.push_back("apply_ultradiff: truncation tail estimate " + std::to_string(tail));
    return out;
}

}  // namespace ultranet
