#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "ultranet/microlocal.hpp"

using namespace ultranet;

namespace {

const GevreyOrder kS2{2.0};

// Shared 1d microlocal fixture: coarse grid so the localizer family reaches
// its width floor while staying physically smooth.
struct MicroFixture {
    Grid grid{1, M_PI, 2048};
    EpsilonLadder ladder = EpsilonLadder::geometric(1, 5);
    MollifierNet mnet = make_mnet();
    DirectionBins bins{1, 2};
    FitOptions fopts{};
    LocalizerOptions lopts{};

    MollifierNet make_mnet() {
        GevreyBump bump(kS2, 3.0, 24.0, grid, 2.0);
        MollifierOptions opts;
        opts.seminorm_b = {};
        opts.moment_tol = 1e-1;  // narrow transition: moments are stage-grade
        return mollifier_net(build_mollifier(bump, grid, opts), ladder, grid);
    }

    SampledNet dirac() const { return embed_distribution(DistributionSpec::dirac_at(0.0), mnet); }
    SampledNet bvm() const {
        DistributionSpec s;
        s.kind = DistributionKind::boundary_value_minus;
        return embed_distribution(s, mnet);
    }
    SampledNet bump_net(double w, double x0 = 0.0) const {
        std::vector<Complex> f(grid.site_count());
        for (int i = 0; i < grid.points(); ++i)
            f[i] = gevrey_bump_value(grid.coord(i), x0, w);
        return canonical_embed(kS2, ladder, grid, f, Box::interval(x0 - w, x0 + w));
    }
    int center_cell() const { return grid.points() / 16; }
};

}  // namespace

TEST_CASE("cone set operations") {
    DirectionBins bins(2, 16);
    ConeSet a(bins, {3, 4});
    ConeSet b(bins, {4, 5, 12});
    CHECK(a.unite(b).members() == std::vector<int>{3, 4, 5, 12});
    CHECK(a.intersect(b).members() == std::vector<int>{4});
    CHECK(a.dilate(1).members() == std::vector<int>{2, 3, 4, 5});
    CHECK(a.subset_of(b, 1));
    CHECK_FALSE(a.subset_of(ConeSet(bins, {12}), 1));
    // wrap-around dilation
    CHECK(ConeSet(bins, {0}).dilate(1).members() == std::vector<int>{0, 1, 15});
    // sign bins do not dilate
    DirectionBins b2(1, 2);
    CHECK(ConeSet(b2, {0}).dilate(1).members() == std::vector<int>{0});
    CHECK(b2.antipodal(0) == 1);
    CHECK(bins.antipodal(3) == 11);
}

TEST_CASE("global singular cones") {
    MicroFixture fx;
    CHECK(sigma_cone(fx.dirac(), fx.bins, fx.fopts).members() == std::vector<int>{0, 1});
    CHECK(sigma_cone(fx.bvm(), fx.bins, fx.fopts).members() == std::vector<int>{0});
    CHECK(sigma_cone(fx.bump_net(2.0), fx.bins, fx.fopts).empty());
}

TEST_CASE("localized singular cones") {
    MicroFixture fx;
    SUBCASE("dirac at the origin is singular in every direction") {
        LocalizedSigma sig = sigma_localized(fx.dirac(), {0.0, 0.0}, fx.bins, fx.fopts, fx.lopts);
        CHECK(sig.cone.members() == std::vector<int>{0, 1});
        CHECK(sig.nested_violations == 0);
    }
    SUBCASE("dirac far away is empty") {
        LocalizedSigma sig = sigma_localized(fx.dirac(), {1.5, 0.0}, fx.bins, fx.fopts, fx.lopts);
        CHECK(sig.cone.empty());
    }
    SUBCASE("heaviside at the jump is singular both ways, far away empty") {
        DistributionSpec hs;
        hs.kind = DistributionKind::heaviside;
        SampledNet hv = embed_distribution(hs, fx.mnet);
        CHECK(sigma_localized(hv, {0.0, 0.0}, fx.bins, fx.fopts, fx.lopts).cone.members() ==
              std::vector<int>{0, 1});
        CHECK(sigma_localized(hv, {1.0, 0.0}, fx.bins, fx.fopts, fx.lopts).cone.empty());
    }
    SUBCASE("points outside the interior are rejected") {
        CHECK_THROWS_AS(sigma_localized(fx.dirac(), {4.0, 0.0}, fx.bins, fx.fopts, fx.lopts),
                        PreconditionError);
    }
}

TEST_CASE("singular support estimates") {
    MicroFixture fx;
    SUBCASE("dirac occupies the cells at the origin only") {
        auto cells = sing_supp(fx.dirac(), fx.bins, fx.fopts, fx.lopts);
        REQUIRE(!cells.empty());
        int c0 = fx.center_cell();
        bool has_center = false;
        for (const auto& c : cells) {
            CHECK(std::abs(c[0] - (c0 - 1)) <= 3);  // within one cutoff width
            if (c[0] == c0 || c[0] == c0 - 1) has_center = true;
        }
        CHECK(has_center);
    }
    SUBCASE("canonical bump has empty singular support") {
        CHECK(sing_supp(fx.bump_net(2.0), fx.bins, fx.fopts, fx.lopts).empty());
    }
    SUBCASE("boundary value is singular near its pole only") {
        auto cells = sing_supp(fx.bvm(), fx.bins, fx.fopts, fx.lopts);
        REQUIRE(!cells.empty());
        int c0 = fx.center_cell();
        for (const auto& c : cells) CHECK(std::abs(c[0] - (c0 - 1)) <= 2);
    }
}

TEST_CASE("wavefront estimates") {
    MicroFixture fx;
    SUBCASE("dirac: origin cells, both sign bins") {
        WavefrontEstimate wf = wavefront(fx.dirac(), fx.bins, fx.fopts, fx.lopts);
        REQUIRE(!wf.pairs.empty());
        int c0 = fx.center_cell();
        bool plus_at_center = false, minus_at_center = false;
        for (const auto& p : wf.pairs) {
            CHECK(std::abs(p.cell[0] - (c0 - 1)) <= 3);
            if (p.cell[0] == c0 - 1 || p.cell[0] == c0) {
                if (p.bin == 0) plus_at_center = true;
                if (p.bin == 1) minus_at_center = true;
            }
        }
        CHECK(plus_at_center);
        CHECK(minus_at_center);
    }
    SUBCASE("boundary value: only the + bin appears") {
        WavefrontEstimate wf = wavefront(fx.bvm(), fx.bins, fx.fopts, fx.lopts);
        REQUIRE(!wf.pairs.empty());
        for (const auto& p : wf.pairs) CHECK(p.bin == 0);
        CHECK(wf.has_pair({fx.center_cell(), 0}, 0));
    }
    SUBCASE("projection equals the singular support of the same run") {
        WavefrontEstimate wf = wavefront(fx.bvm(), fx.bins, fx.fopts, fx.lopts);
        CHECK(wf.singular_cells == sing_supp(fx.bvm(), fx.bins, fx.fopts, fx.lopts));
    }
    SUBCASE("translation covariance for lattice shifts") {
        double shift = 16 * fx.grid.spacing();  // two cells
        WavefrontEstimate base = wavefront(fx.dirac(), fx.bins, fx.fopts, fx.lopts);
        SampledNet moved = embed_distribution(DistributionSpec::dirac_at(shift), fx.mnet);
        WavefrontEstimate shifted = wavefront(moved, fx.bins, fx.fopts, fx.lopts);
        REQUIRE(base.pairs.size() == shifted.pairs.size());
        for (std::size_t i = 0; i < base.pairs.size(); ++i) {
            CHECK(shifted.pairs[i].cell[0] == base.pairs[i].cell[0] + 2);
            CHECK(shifted.pairs[i].bin == base.pairs[i].bin);
        }
    }
}

TEST_CASE("empty cone is equivalent to regularity on the corpus") {
    MicroFixture fx;
    std::vector<SampledNet> corpus;
    corpus.push_back(fx.bump_net(2.0));
    corpus.push_back(fx.dirac());
    corpus.push_back(fx.bvm());
    for (const auto& net : corpus) {
        bool regular = regularity_test(net, fx.bins, fx.fopts).regular;
        bool empty = sigma_cone(net, fx.bins, fx.fopts).empty();
        CHECK(regular == empty);
    }
}

TEST_CASE("wavefront properties: derivative and regular factor") {
    MicroFixture fx;
    // the factor is 1/2 plus a plateau window, regular and nonzero near 0
    std::vector<Complex> fac(fx.grid.site_count());
    for (int i = 0; i < fx.grid.points(); ++i)
        fac[i] = 0.5 + gevrey_window(fx.grid.coord(i), 0.7, 1.8, 2.0, 2.0);
    SampledNet factor = canonical_embed(kS2, fx.ladder, fx.grid, fac);

    SUBCASE("boundary value") {
        WfPropertyReport rep =
            check_wf_properties(fx.bvm(), {1, 0}, factor, fx.bins, fx.fopts, fx.lopts);
        CHECK(rep.derivative_inclusion);
        CHECK(rep.factor_inclusion);
        for (const auto& p : rep.wf_derivative.pairs) CHECK(p.bin == 0);
    }
    SUBCASE("dirac") {
        WfPropertyReport rep =
            check_wf_properties(fx.dirac(), {1, 0}, factor, fx.bins, fx.fopts, fx.lopts);
        CHECK(rep.derivative_inclusion);
        CHECK(rep.factor_inclusion);
    }
    SUBCASE("bump: both sides empty") {
        WfPropertyReport rep =
            check_wf_properties(fx.bump_net(2.0), {2, 0}, factor, fx.bins, fx.fopts, fx.lopts);
        CHECK(rep.derivative_inclusion);
        CHECK(rep.factor_inclusion);
        CHECK(rep.wf_net.pairs.empty());
        CHECK(rep.wf_derivative.pairs.empty());
    }
    SUBCASE("an irregular factor is rejected") {
        CHECK_THROWS_AS(
            check_wf_properties(fx.bvm(), {1, 0}, fx.dirac(), fx.bins, fx.fopts, fx.lopts),
            PreconditionError);
    }
}

TEST_CASE("2d line delta wavefront") {
    Grid grid(2, M_PI, 512);
    EpsilonLadder ladder = EpsilonLadder::geometric(1, 5);
    GevreyBump bump(kS2, 3.0, 12.0, grid, 2.0);
    MollifierOptions mopts;
    mopts.seminorm_b = {};
    mopts.moment_max = 2;
    mopts.moment_tol = 1e-1;
    MollifierNet mnet = mollifier_net(build_mollifier(bump, grid, mopts), ladder, grid);
    DistributionSpec lx;
    lx.kind = DistributionKind::line_delta_2d;
    lx.axis = 0;  // line along x: slices are phi_eps(y)
    SampledNet f = embed_distribution(lx, mnet);
    DirectionBins bins(2, 16);
    FitOptions fopts;
    fopts.shells_per_octave = 3;

    // localized cone on the axis: exactly the bins of +-e_y
    LocalizedSigma sig = sigma_localized(f, {0.7, 0.0}, bins, fopts, LocalizerOptions{});
    CHECK(sig.cone.members() ==
          std::vector<int>{bins.bin_of(0.0, 1.0), bins.bin_of(0.0, -1.0)});
    // off the axis: empty
    CHECK(sigma_localized(f, {0.7, 1.5}, bins, fopts, LocalizerOptions{}).cone.empty());
}
