#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "ultranet/classify.hpp"
#include "ultranet/embedding.hpp"

using namespace ultranet;

namespace {

const GevreyOrder kS2{2.0};

SampledNet closure_net(const Grid& grid, const EpsilonLadder& ladder,
                       const std::function<Complex(double, std::array<double, 2>)>& fn) {
    return net_from_closure(kS2, ladder, grid, fn);
}

Grid small_grid() { return Grid(1, M_PI, 256); }
EpsilonLadder ladder29() { return EpsilonLadder::geometric(2, 9); }

}  // namespace

TEST_CASE("types enforce their invariants") {
    CHECK_THROWS_AS(GevreyOrder(1.0), ConfigError);
    CHECK_THROWS_AS(GevreyOrder(0.5), ConfigError);
    CHECK(GevreyOrder(2.0).eps_exponent() == doctest::Approx(1.0 / 3.0));
    CHECK(GevreyOrder(2.0).freq_exponent() == doctest::Approx(0.5));

    CHECK_THROWS_AS(EpsilonLadder({0.5, 0.25, 0.125}), ConfigError);           // too short
    CHECK_THROWS_AS(EpsilonLadder({0.5, 0.5, 0.25, 0.125}), ConfigError);      // not decreasing
    CHECK_THROWS_AS(EpsilonLadder({1.5, 0.5, 0.25, 0.125}), ConfigError);      // outside (0,1)
    CHECK(EpsilonLadder::geometric(2, 5).size() == 4);

    CHECK_THROWS_AS(Grid(3, 1.0, 64), ConfigError);
    CHECK_THROWS_AS(Grid(1, 1.0, 100), ConfigError);  // not a power of two
    Grid g(1, M_PI, 64);
    CHECK(g.spacing() == doctest::Approx(2 * M_PI / 64));
    CHECK(g.nyquist() == doctest::Approx(32.0));

    // site layout is symmetric under x -> -x
    CHECK(g.coord(0) == doctest::Approx(-g.coord(63)));
}

TEST_CASE("growth indicator on closed forms") {
    Grid grid = small_grid();
    EpsilonLadder ladder = ladder29();
    Box region = Box::whole(grid);

    SUBCASE("exp(eps^{-1/(2s-1)}) has G = 1") {
        auto net = closure_net(grid, ladder, [](double e, std::array<double, 2>) {
            return Complex(std::exp(std::pow(e, -1.0 / 3.0)));
        });
        for (auto [eps, g] : growth_indicator(net, {0, 0}, region))
            CHECK(g == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("constant 1 has G = 0") {
        auto net = closure_net(grid, ladder, [](double, std::array<double, 2>) {
            return Complex(1.0);
        });
        for (auto [eps, g] : growth_indicator(net, {0, 0}, region))
            CHECK(g == doctest::Approx(0.0));
    }
    SUBCASE("exp(-1/eps) at s=2 has G = -eps^{-2/3}") {
        auto net = closure_net(grid, ladder, [](double e, std::array<double, 2>) {
            return Complex(std::exp(-1.0 / e));
        });
        auto series = growth_indicator(net, {0, 0}, region);
        for (auto [eps, g] : series)
            CHECK(g == doctest::Approx(-std::pow(eps, -2.0 / 3.0)).epsilon(1e-9));
        CHECK(series.back().second < series.front().second);
    }
    SUBCASE("zero sup is the -inf sentinel") {
        auto net = closure_net(grid, ladder, [](double, std::array<double, 2>) {
            return Complex(0.0);
        });
        for (auto [eps, g] : growth_indicator(net, {0, 0}, region))
            CHECK(g == -std::numeric_limits<double>::infinity());
    }
    SUBCASE("analytic match within 1e-6 relative") {
        auto net = closure_net(grid, ladder, [](double e, std::array<double, 2>) {
            return Complex(std::exp(1.0 / e));
        });
        auto series = growth_indicator(net, {0, 0}, region);
        for (auto [eps, g] : series) {
            double expected = std::pow(eps, -2.0 / 3.0);
            CHECK(std::abs(g - expected) <= 1e-6 * expected);
        }
    }
}

TEST_CASE("growth indicator error paths") {
    Grid grid = small_grid();
    auto net = closure_net(grid, ladder29(), [](double, std::array<double, 2>) {
        return Complex(1.0);
    });
    CHECK_THROWS_AS(growth_indicator(net, {9, 0}, Box::whole(grid), 8), UnsupportedOrderError);
    Box empty = Box::interval(2.0, 1.0);
    CHECK_THROWS_AS(growth_indicator(net, {0, 0}, empty), Error);
    // region holding no grid sites
    Box thin = Box::interval(0.0, 1e-9);
    CHECK_THROWS_AS(growth_indicator(net, {0, 0}, thin), Error);
}

TEST_CASE("classify_net on the canonical trio") {
    Grid grid = small_grid();
    EpsilonLadder ladder = ladder29();
    Box region = Box::whole(grid);

    auto neg = closure_net(grid, ladder, [](double e, std::array<double, 2>) {
        return Complex(std::exp(-1.0 / e));
    });
    auto one = closure_net(grid, ladder, [](double, std::array<double, 2>) {
        return Complex(1.0);
    });
    auto mod = closure_net(grid, ladder, [](double e, std::array<double, 2>) {
        return Complex(std::exp(1.0 / e));
    });

    GrowthVerdict vn = classify_net(neg, 2, region);
    GrowthVerdict v1 = classify_net(one, 2, region);
    GrowthVerdict vm = classify_net(mod, 2, region);
    CHECK(vn.cls == GrowthClass::negligible);
    CHECK(v1.cls == GrowthClass::moderate);
    CHECK(v1.fitted_k == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(vm.cls == GrowthClass::non_moderate);
}

TEST_CASE("classify_scalar examples") {
    EpsilonLadder ladder = ladder29();
    auto scalar = [&](const std::function<Complex(double)>& fn) {
        GeneralizedScalar x{kS2, ladder, {}};
        for (double e : ladder.values()) x.values.push_back(fn(e));
        return classify_scalar(x);
    };
    CHECK(scalar([](double e) { return Complex(std::exp(-1.0 / e)); }).cls ==
          GrowthClass::negligible);
    CHECK(scalar([](double e) { return Complex(std::pow(e, -5.0)); }).cls ==
          GrowthClass::moderate);
    CHECK(scalar([](double e) { return Complex(std::exp(1.0 / e)); }).cls ==
          GrowthClass::non_moderate);
    // critical-scale decay is moderate, not negligible
    CHECK(scalar([](double e) { return Complex(std::exp(-4.0 * std::pow(e, -1.0 / 3.0))); }).cls ==
          GrowthClass::moderate);
    GeneralizedScalar bad{kS2, ladder, std::vector<Complex>(ladder.size(), Complex(1.0))};
    bad.values[2] = Complex(std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(classify_scalar(bad), InvalidNetError);
}

TEST_CASE("net algebra") {
    Grid grid = small_grid();
    EpsilonLadder ladder = ladder29();
    Box region = Box::whole(grid);

    auto f = closure_net(grid, ladder, [](double e, std::array<double, 2> x) {
        return Complex(std::cos(x[0]) * std::exp(std::pow(e, -1.0 / 3.0)));
    });
    auto one = closure_net(grid, ladder, [](double, std::array<double, 2>) {
        return Complex(1.0);
    });

    SUBCASE("multiplying by the constant-1 net is exact") {
        SampledNet p = net_mul(f, one);
        for (std::size_t j = 0; j < p.slice_count(); ++j)
            for (std::size_t i = 0; i < p.slices[j].size(); ++i)
                CHECK(p.slices[j][i] == f.slices[j][i]);
    }
    SUBCASE("f - f is negligible") {
        SampledNet z = net_add(f, net_scale(f, Complex(-1.0)));
        CHECK(classify_net(z, 2, region).cls == GrowthClass::negligible);
    }
    SUBCASE("moderate times negligible is negligible") {
        auto neg = closure_net(grid, ladder, [](double e, std::array<double, 2> x) {
            return Complex(std::exp(-1.0 / e) * (1.0 + 0.3 * std::sin(x[0])));
        });
        CHECK(classify_net(net_mul(f, neg), 2, region).cls == GrowthClass::negligible);
    }
    SUBCASE("support boxes combine") {
        SampledNet a = f;
        a.support_box = Box::interval(-2.0, 1.0);
        SampledNet b = f;
        b.support_box = Box::interval(-1.0, 2.0);
        SampledNet p = net_mul(a, b);
        CHECK(p.support_box->lo[0] == doctest::Approx(-1.0));
        CHECK(p.support_box->hi[0] == doctest::Approx(1.0));
    }
    SUBCASE("mismatched grids are rejected") {
        auto other = net_from_closure(kS2, ladder, Grid(1, M_PI, 512),
                                      [](double, std::array<double, 2>) { return Complex(1.0); });
        CHECK_THROWS_AS(net_add(f, other), IncompatibilityError);
    }
    SUBCASE("non-finite samples are rejected") {
        SampledNet bad = f;
        bad.slices[1][7] = Complex(std::nan(""), 0.0);
        CHECK_THROWS_AS(classify_net(bad, 2, region), InvalidNetError);
    }
}

TEST_CASE("spectral derivative") {
    Grid grid(1, M_PI, 64);
    EpsilonLadder ladder = ladder29();

    SUBCASE("sin -> cos to 1e-10") {
        auto net = closure_net(grid, ladder, [](double, std::array<double, 2> x) {
            return Complex(std::sin(x[0]));
        });
        SampledNet d = spectral_derivative(net, {1, 0});
        for (int i = 0; i < grid.points(); ++i)
            CHECK(std::abs(d.slices[0][i] - Complex(std::cos(grid.coord(i)))) <= 1e-10);
    }
    SUBCASE("alpha = 0 is the identity") {
        auto net = closure_net(grid, ladder, [](double, std::array<double, 2> x) {
            return Complex(std::exp(std::sin(x[0])));
        });
        SampledNet d = spectral_derivative(net, {0, 0});
        for (int i = 0; i < grid.points(); ++i) CHECK(d.slices[0][i] == net.slices[0][i]);
    }
    SUBCASE("matches centered differences on the mollifier net") {
        Grid fine(1, M_PI, 4096);
        GevreyBump bump(kS2, 6.0, 48.0, fine, 2.0);
        Mollifier phi = build_mollifier(bump, fine, MollifierOptions{5, {}, 8, 8, 1e-8, 1e-6});
        MollifierNet mnet = mollifier_net(phi, EpsilonLadder::geometric(1, 4), fine);
        SampledNet net = mnet.as_net();
        SampledNet d = spectral_derivative(net, {1, 0});
        SampledNet d3 = spectral_derivative(net, {3, 0});
        for (std::size_t j = 0; j < net.slice_count(); ++j) {
            auto fd = oracles::finite_difference(fine, net.slices[j]);
            double err = 0.0, third = 0.0;
            for (std::size_t i = 0; i < fd.size(); ++i) {
                err = std::max(err, std::abs(fd[i] - d.slices[j][i]));
                third = std::max(third, std::abs(d3.slices[j][i]));
            }
            // centered differences carry the h^2/6 sup|f'''| error bound
            double h = fine.spacing();
            CHECK(err <= 1.1 * h * h / 6.0 * third);
            CHECK(err >= 1e-4 * h * h / 6.0 * third);  // and genuinely O(h^2)
        }
    }
    SUBCASE("wraparound warning near the boundary") {
        auto net = net_from_closure(kS2, ladder, grid,
                                    [&](double, std::array<double, 2> x) {
                                        return Complex(
                                            gevrey_window(x[0] + M_PI, 0.1, 0.3, 2.0, 2.0) +
                                            gevrey_window(x[0] - M_PI, 0.1, 0.3, 2.0, 2.0));
                                    });
        net.support_box = Box::interval(-M_PI, -M_PI + 0.35);
        SampledNet d = spectral_derivative(net, {1, 0});
        bool warned = false;
        for (const auto& note : d.notes)
            if (note.find("wraparound") != std::string::npos) warned = true;
        CHECK(warned);
    }
}

TEST_CASE("classification invariance properties") {
    Grid grid = small_grid();
    EpsilonLadder ladder = ladder29();
    Box region = Box::whole(grid);

    std::vector<SampledNet> corpus;
    corpus.push_back(closure_net(grid, ladder, [](double e, std::array<double, 2> x) {
        return Complex(std::exp(std::pow(e, -1.0 / 3.0)) * std::cos(2 * x[0]));
    }));
    corpus.push_back(closure_net(grid, ladder, [](double e, std::array<double, 2>) {
        return Complex(std::pow(e, -3.0));
    }));
    corpus.push_back(closure_net(grid, ladder, [](double e, std::array<double, 2> x) {
        return Complex(std::exp(-2.0 / e) * (1.0 + std::sin(x[0])));
    }));

    SUBCASE("class is invariant under scaling by a nonzero constant") {
        for (const auto& net : corpus) {
            GrowthVerdict base = classify_net(net, 2, region);
            GrowthVerdict scaled = classify_net(net_scale(net, Complex(7.3, -1.2)), 2, region);
            CHECK(base.cls == scaled.cls);
            CHECK(base.fitted_k == doctest::Approx(scaled.fitted_k).epsilon(1e-6));
        }
    }
    SUBCASE("moderate nets stay moderate under derivation") {
        for (const auto& net : corpus) {
            GrowthVerdict base = classify_net(net, 2, region);
            if (base.cls == GrowthClass::non_moderate) continue;
            for (int a = 1; a <= 2; ++a) {
                GrowthVerdict d = classify_net(spectral_derivative(net, {a, 0}), 2, region);
                CHECK(d.cls != GrowthClass::non_moderate);
            }
        }
    }
}

TEST_CASE("default ladder honors the compatibility rule") {
    Grid grid(1, M_PI, 4096);
    EpsilonLadder ladder = default_ladder(grid);
    CHECK(ladder.coarsest() == doctest::Approx(0.25));
    for (double e : ladder.values()) CHECK(e >= 4.0 * grid.spacing());
    CHECK(ladder.size() >= 4);
}
