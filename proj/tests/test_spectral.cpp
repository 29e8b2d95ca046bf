#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "ultranet/embedding.hpp"
#include "ultranet/fft.hpp"
#include "ultranet/spectrum.hpp"

using namespace ultranet;

namespace {

const GevreyOrder kS2{2.0};

struct SpectralFixture {
    Grid grid{1, M_PI, 8192};
    EpsilonLadder ladder = EpsilonLadder::geometric(1, 6);
    MollifierNet mnet = make_mnet();

    MollifierNet make_mnet() {
        GevreyBump bump(kS2, 6.0, 48.0, grid, 2.0);
        MollifierOptions opts;
        opts.seminorm_b = {};
        return mollifier_net(build_mollifier(bump, grid, opts), ladder, grid);
    }

    SampledNet bump_net(double w, double x0 = 0.0) const {
        std::vector<Complex> f(grid.site_count());
        for (int i = 0; i < grid.points(); ++i)
            f[i] = gevrey_bump_value(grid.coord(i), x0, w);
        return canonical_embed(kS2, ladder, grid, f, Box::interval(x0 - w, x0 + w));
    }

    SampledNet bvm() const {
        DistributionSpec spec;
        spec.kind = DistributionKind::boundary_value_minus;
        return embed_distribution(spec, mnet);
    }

    // Regularity-test window that keeps the scaled-mollifier plateau in view
    // for every ladder entry (dirac data is then plateau-pure).
    FitOptions tuned_opts() const {
        FitOptions o;
        o.r_min_steps = 8;
        o.r_max_nyquist_frac = 45.0 / grid.nyquist();
        o.shells_per_octave = 3;
        return o;
    }
};

}  // namespace

TEST_CASE("fourier net round trip and parseval") {
    SpectralFixture fx;
    SampledNet net = fx.bump_net(2.0);
    NetSpectrum spec = fourier_net(net);
    SampledNet back = inverse_fourier_net(spec);
    double err = 0.0;
    for (std::size_t j = 0; j < net.slice_count(); ++j)
        for (std::size_t i = 0; i < net.slices[j].size(); i += 37)
            err = std::max(err, std::abs(back.slices[j][i] - net.slices[j][i]));
    CHECK(err <= 1e-10);
    CHECK(parseval_defect(net, spec) <= 1e-8);
}

TEST_CASE("dirac spectrum sits on the scaled plateau") {
    SpectralFixture fx;
    SampledNet dirac = embed_distribution(DistributionSpec::dirac_at(0.0), fx.mnet);
    NetSpectrum spec = fourier_net(dirac);
    for (std::size_t j = 0; j < spec.spectra.size(); ++j) {
        double eps = spec.ladder[j];
        for (int m = 0; m < fx.grid.points(); ++m) {
            double xi = std::abs(fx.grid.freq(m));
            if (xi <= 6.0 / eps)
                CHECK(std::abs(std::abs(spec.spectra[j][m]) - 1.0) <= 1e-6);
        }
    }
}

TEST_CASE("constant net concentrates at zero frequency") {
    SpectralFixture fx;
    std::vector<Complex> one(fx.grid.site_count(), Complex(1.0));
    NetSpectrum spec = fourier_net(canonical_embed(kS2, fx.ladder, fx.grid, one));
    for (int m = 0; m < fx.grid.points(); ++m) {
        if (fx.grid.freq_index(m) == 0)
            CHECK(std::abs(spec.spectra[0][m]) == doctest::Approx(2 * M_PI));
        else
            CHECK(std::abs(spec.spectra[0][m]) <= 1e-9 * 2 * M_PI);
    }
}

TEST_CASE("boundary value spectra are one-sided") {
    SpectralFixture fx;
    SampledNet bv = fx.bvm();
    NetSpectrum spec = fourier_net(bv);
    for (std::size_t j = 0; j < spec.spectra.size(); ++j) {
        double pos = 0.0, neg = 0.0;
        for (int m = 0; m < fx.grid.points(); ++m) {
            double xi = fx.grid.freq(m);
            if (xi > 0) pos += std::abs(spec.spectra[j][m]);
            if (xi < 0) neg += std::abs(spec.spectra[j][m]);
        }
        CHECK(neg <= 1e-6 * pos);
    }

    SUBCASE("agrees with the double-resolution oracle") {
        double eps = spec.ladder[2];
        auto fine_hat = oracles::double_resolution_spectrum(
            fx.grid, [&](std::array<double, 2> x) {
                Complex w = Complex(x[0], -eps) / 2.0;
                return 0.5 * std::cos(w) / std::sin(w);
            });
        double peak = 0.0;
        for (int k = 1; k < fx.grid.points() / 2; ++k)
            peak = std::max(peak, std::abs(spec.spectra[2][k]));
        for (int k = 1; k <= 512; k *= 2) {
            Complex coarse = spec.spectra[2][k];
            Complex refined = fine_hat[k];
            CHECK(std::abs(coarse - refined) <= 1e-8 * peak);
        }
    }
}

TEST_CASE("decay fits separate regular from singular") {
    SpectralFixture fx;
    DirectionBins bins(1, 2);
    FitOptions tuned = fx.tuned_opts();
    EpsilonLadder dirac_ladder = EpsilonLadder::geometric(3, 6);
    MollifierNet mnet36 = mollifier_net(fx.mnet.base, dirac_ladder, fx.grid);

    SUBCASE("dirac has no decay witness") {
        SampledNet dirac = embed_distribution(DistributionSpec::dirac_at(0.0), mnet36);
        NetSpectrum spec = fourier_net(dirac);
        for (int b = 0; b < 2; ++b) {
            DecayFit fit = fit_decay(spec, bins, b, kS2, tuned);
            CHECK(fit.k2 <= 0.05);
            CHECK(fit.sample_count >= 30);
        }
        CHECK_FALSE(regularity_test(dirac, bins, tuned).regular);
    }
    SUBCASE("gevrey bump carries the witness, against the direct-slope oracle") {
        SampledNet net = fx.bump_net(2.0);
        NetSpectrum spec = fourier_net(net);
        DecayFit fit = fit_decay(spec, bins, 0, kS2, tuned);
        CHECK(fit.k2 >= 0.5);
        CHECK(fit.k1 == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(fit.residual_rms <= 1.0);
        CHECK(regularity_test(net, bins, tuned).regular);

        // oracle: two-shell slope of the band-max envelope of one slice
        auto band_max = [&](double lo) {
            double m = 0.0;
            for (int k = 0; k < fx.grid.points(); ++k) {
                double xi = fx.grid.freq(k);
                if (xi >= lo && xi < 1.3 * lo)
                    m = std::max(m, std::abs(spec.spectra[0][k]));
            }
            return m;
        };
        double oracle = (std::log(band_max(9.0)) - std::log(band_max(36.0))) /
                        (std::sqrt(36.0) - std::sqrt(9.0));
        CHECK(fit.k2 == doctest::Approx(oracle).epsilon(0.25));
    }
    SUBCASE("vacuous bins count as regular") {
        NetSpectrum spec = fourier_net(fx.bvm());
        DecayFit neg = fit_decay(spec, bins, 1, kS2, FitOptions{});
        CHECK(neg.vacuous);
        CHECK(neg.regular(FitOptions{}));
        CHECK(neg.sample_count == 0);
    }
    SUBCASE("too few samples is an error") {
        SampledNet net = fx.bump_net(2.0);
        NetSpectrum spec = fourier_net(net);
        FitOptions narrow;
        narrow.r_min_steps = 8;
        narrow.r_max_nyquist_frac = 12.0 / fx.grid.nyquist();
        narrow.shells_per_octave = 1;
        CHECK_THROWS_AS(fit_decay(spec, bins, 0, kS2, narrow), UnderdeterminedFitError);
    }
}

TEST_CASE("regularity of the mollified step fails like 1/|xi|") {
    Grid grid(1, M_PI, 4096);
    EpsilonLadder ladder = EpsilonLadder::geometric(1, 6);
    GevreyBump bump(kS2, 6.0, 48.0, grid, 2.0);
    MollifierOptions mopts;
    mopts.seminorm_b = {};
    MollifierNet mnet = mollifier_net(build_mollifier(bump, grid, mopts), ladder, grid);
    DirectionBins bins(1, 2);

    DistributionSpec hs;
    hs.kind = DistributionKind::heaviside;
    SampledNet hv = embed_distribution(hs, mnet);
    std::vector<Complex> cut(grid.site_count());
    for (int i = 0; i < grid.points(); ++i)
        cut[i] = gevrey_window(grid.coord(i), 1.0, 2.2, 2.0, 2.0);
    SampledNet hvcut = net_mul(hv, canonical_embed(kS2, hv.ladder, grid, cut));

    RegularityReport rep = regularity_test(hvcut, bins, FitOptions{});
    CHECK_FALSE(rep.regular);
    for (const auto& fit : rep.fits) CHECK_FALSE(fit.regular(FitOptions{}));

    // oracle: a synthetic 1/|xi| spectrum fails the same way
    std::vector<Complex> alg(grid.site_count());
    for (int m = 0; m < grid.points(); ++m) {
        double xi = std::abs(grid.freq(m));
        alg[m] = 1.0 / std::max(xi, 1.0);
    }
    std::vector<Complex> f;
    fft::inverse(grid, alg, f);
    SampledNet algnet = canonical_embed(kS2, hv.ladder, grid, f);
    RegularityReport alg_rep = regularity_test(algnet, bins, FitOptions{});
    CHECK_FALSE(alg_rep.regular);
    CHECK(std::abs(alg_rep.fits[0].k2 - rep.fits[0].k2) <= 0.35);
}

TEST_CASE("antipodal symmetry for real nets") {
    SpectralFixture fx;
    SampledNet net = fx.bump_net(1.5, 0.3);
    NetSpectrum spec = fourier_net(net);
    DirectionBins bins(1, 2);
    DecayFit plus = fit_decay(spec, bins, 0, kS2, FitOptions{});
    DecayFit minus = fit_decay(spec, bins, 1, kS2, FitOptions{});
    CHECK(plus.k2 == doctest::Approx(minus.k2).epsilon(1e-3));
    CHECK(plus.residual_rms == doctest::Approx(minus.residual_rms).epsilon(1e-3));
}

TEST_CASE("shrinking the window keeps stable regular verdicts") {
    SpectralFixture fx;
    SampledNet net = fx.bump_net(2.0);
    DirectionBins bins(1, 2);
    RegularityReport base = regularity_test(net, bins, FitOptions{});
    REQUIRE(base.regular);
    for (const auto& f : base.fits) REQUIRE(f.residual_rms <= 0.5);  // rho_max / 2

    FitOptions shrunk;
    shrunk.r_min_steps = 16;
    shrunk.r_max_nyquist_frac = 0.25;
    CHECK(regularity_test(net, bins, shrunk).regular);
}

TEST_CASE("model identifiability under exponential rescaling") {
    SpectralFixture fx;
    SampledNet net = fx.bump_net(2.0);
    DirectionBins bins(1, 2);
    DecayFit base = fit_decay(fourier_net(net), bins, 0, kS2, FitOptions{});

    std::vector<Complex> weight;
    for (double eps : net.ladder.values())
        weight.push_back(std::exp(std::pow(eps, -1.0 / 3.0)));
    DecayFit scaled =
        fit_decay(fourier_net(net_scale_per_eps(net, weight)), bins, 0, kS2, FitOptions{});
    CHECK(scaled.k1 - base.k1 == doctest::Approx(1.0).epsilon(0.05));
    CHECK(std::abs(scaled.k2 - base.k2) <= 0.05);
}

TEST_CASE("compact support bound check") {
    SpectralFixture fx;
    SUBCASE("canonical bump passes with nonpositive xi coefficient") {
        SampledNet net = fx.bump_net(2.0);
        SupportBoundReport rep = compact_support_bound_check(net, FitOptions{});
        CHECK(rep.pass);
        CHECK(rep.xi_coefficient <= 0.1);
    }
    SUBCASE("dirac passes with k1 ~ 0 on the plateau window") {
        EpsilonLadder dl = EpsilonLadder::geometric(3, 6);
        MollifierNet mnet36 = mollifier_net(fx.mnet.base, dl, fx.grid);
        SampledNet dirac = embed_distribution(DistributionSpec::dirac_at(0.0), mnet36);
        SupportBoundReport rep =
            compact_support_bound_check(dirac, fx.tuned_opts(), Box::interval(-3.0, 3.0));
        CHECK(rep.pass);
        CHECK(std::abs(rep.k1) <= 0.05);
    }
    SUBCASE("line delta passes in 2d") {
        Grid grid(2, M_PI, 512);
        GevreyBump bump(kS2, 3.0, 12.0, grid, 2.0);
        MollifierOptions mopts;
        mopts.seminorm_b = {};
        mopts.moment_max = 2;
        mopts.moment_tol = 1e-1;
        MollifierNet mnet = mollifier_net(build_mollifier(bump, grid, mopts),
                                          EpsilonLadder::geometric(1, 4), grid);
        DistributionSpec lx;
        lx.kind = DistributionKind::line_delta_2d;
        SampledNet f = embed_distribution(lx, mnet);
        FitOptions o;
        o.shells_per_octave = 3;
        SupportBoundReport rep =
            compact_support_bound_check(f, o, Box::rect(-3.0, 3.0, -0.5, 0.5));
        CHECK(rep.pass);
    }
    SUBCASE("missing support box is a precondition error") {
        SampledNet bv = fx.bvm();
        CHECK_THROWS_AS(compact_support_bound_check(bv, FitOptions{}), PreconditionError);
    }
}

TEST_CASE("decay fit csv serialization") {
    std::vector<DecayFit> fits(2);
    fits[0].bin = 0;
    fits[0].k2 = 1.5;
    fits[1].bin = 1;
    fits[1].vacuous = true;
    std::string csv = decay_fits_csv(fits);
    CHECK(csv.find("bin,c0,k1,k2,residual_rms,samples") != std::string::npos);
    CHECK(csv.find("1.5") != std::string::npos);
}
