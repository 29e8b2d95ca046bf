#include "ultranet/sampled_net.hpp"

#include <algorithm>

#include "ultranet/fft.hpp"
#include "ultranet/parallel.hpp"

namespace ultranet {

void SampledNet::validate() const {
    if (slices.size() != ladder.size())
        throw InvalidNetError("SampledNet: slice count does not match ladder");
    double max_abs = 0.0;
    for (const auto& s : slices) {
        if (s.size() != grid.site_count())
            throw InvalidNetError("SampledNet: slice size does not match grid");
        for (const Complex& z : s) {
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                throw InvalidNetError("SampledNet: non-finite sample");
            max_abs = std::max(max_abs, std::abs(z));
        }
    }
    if (support_box) {
        const double tol = 1e-12 * max_abs;
        const int n = grid.points();
        for (const auto& s : slices)
            for (int iy = 0; iy < (grid.dim() == 2 ? n : 1); ++iy)
                for (int ix = 0; ix < n; ++ix) {
                    std::array<double, 2> x{grid.coord(ix), grid.dim() == 2 ? grid.coord(iy) : 0.0};
                    if (!support_box->contains(grid.dim(), x) &&
                        std::abs(s[grid.site(ix, iy)]) > tol)
                        throw InvalidNetError("SampledNet: sample violates declared support box");
                }
    }
}

SampledNet net_from_closure(const GevreyOrder& order, const EpsilonLadder& ladder,
                            const Grid& grid,
                            const std::function<Complex(double, std::array<double, 2>)>& fn,
                            std::optional<Box> support_box) {
    SampledNet net{order, ladder, grid, {}, std::move(support_box), {}};
    const int n = grid.points();
    net.slices.resize(ladder.size());
    for (std::size_t j = 0; j < ladder.size(); ++j) {
        auto& s = net.slices[j];
        s.resize(grid.site_count());
        const double eps = ladder[j];
        for (int iy = 0; iy < (grid.dim() == 2 ? n : 1); ++iy)
            for (int ix = 0; ix < n; ++ix)
                s[grid.site(ix, iy)] =
                    fn(eps, {grid.coord(ix), grid.dim() == 2 ? grid.coord(iy) : 0.0});
    }
    net.validate();
    return net;
}

void require_compatible(const SampledNet& a, const SampledNet& b) {
    if (!(a.grid == b.grid))
        throw IncompatibilityError("nets live on different grids");
    if (!(a.ladder == b.ladder))
        throw IncompatibilityError("nets use different epsilon ladders");
    if (!(a.order == b.order))
        throw IncompatibilityError("nets have different Gevrey orders");
}

namespace {

SampledNet pointwise(const SampledNet& a, const SampledNet& b,
                     const std::function<Complex(Complex, Complex)>& op,
                     std::optional<Box> box) {
    require_compatible(a, b);
    SampledNet out{a.order, a.ladder, a.grid, {}, std::move(box), {}};
    out.slices.resize(a.slices.size());
    for (std::size_t j = 0; j < a.slices.size(); ++j) {
        out.slices[j].resize(a.slices[j].size());
        for (std::size_t i = 0; i < a.slices[j].size(); ++i)
            out.slices[j][i] = op(a.slices[j][i], b.slices[j][i]);
    }
    return out;
}

std::optional<Box> union_box(const SampledNet& a, const SampledNet& b) {
    if (a.support_box && b.support_box) return a.support_box->unite(*b.support_box);
    return std::nullopt;
}

}  // namespace

SampledNet net_add(const SampledNet& a, const SampledNet& b) {
    return pointwise(a, b, [](Complex x, Complex y) { return x + y; }, union_box(a, b));
}

SampledNet net_sub(const SampledNet& a, const SampledNet& b) {
    return pointwise(a, b, [](Complex x, Complex y) { return x - y; }, union_box(a, b));
}

SampledNet net_mul(const SampledNet& a, const SampledNet& b) {
    std::optional<Box> box;
    if (a.support_box && b.support_box) box = a.support_box->intersect(*b.support_box);
    else if (a.support_box) box = a.support_box;
    else if (b.support_box) box = b.support_box;
    return pointwise(a, b, [](Complex x, Complex y) { return x * y; }, box);
}

SampledNet net_scale(const SampledNet& a, Complex c) {
    SampledNet out = a;
    for (auto& s : out.slices)
        for (auto& z : s) z *= c;
    return out;
}

SampledNet net_scale_per_eps(const SampledNet& a, const std::vector<Complex>& weight) {
    if (weight.size() != a.slices.size())
        throw IncompatibilityError("per-eps weight count does not match ladder");
    SampledNet out = a;
    for (std::size_t j = 0; j < out.slices.size(); ++j)
        for (auto& z : out.slices[j]) z *= weight[j];
    return out;
}

SampledNet spectral_derivative(const SampledNet& net, const MultiIndex& alpha) {
    if (alpha[0] < 0 || alpha[1] < 0)
        throw UnsupportedOrderError("spectral_derivative: negative order");
    if (net.grid.dim() == 1 && alpha[1] != 0)
        throw UnsupportedOrderError("spectral_derivative: y-derivative of a 1d net");

    SampledNet out = net;
    if (multi_order(alpha) == 0) return out;

    // d/dx corresponds to multiplication by -i xi in our transform convention.
    // The unpaired Nyquist mode is zeroed for odd orders.
    const int n = net.grid.points();
    auto axis_multiplier = [&](int order_d) {
        std::vector<Complex> m(n);
        for (int k = 0; k < n; ++k) {
            int ki = net.grid.freq_index(k);
            if (order_d % 2 == 1 && ki == -n / 2) {
                m[k] = 0.0;
                continue;
            }
            m[k] = std::pow(Complex(0.0, -net.grid.freq(k)), order_d);
        }
        return m;
    };

    std::vector<Complex> mx = axis_multiplier(alpha[0]);
    std::vector<Complex> my;
    if (net.grid.dim() == 2) my = axis_multiplier(alpha[1]);

    parallel_for(out.slices.size(), [&](std::size_t j) {
        std::vector<Complex> hat;
        fft::forward(net.grid, net.slices[j], hat);
        if (net.grid.dim() == 1) {
            for (int k = 0; k < n; ++k) hat[k] *= mx[k];
        } else {
            for (int ky = 0; ky < n; ++ky)
                for (int kx = 0; kx < n; ++kx) hat[net.grid.site(kx, ky)] *= mx[kx] * my[ky];
        }
        fft::inverse(net.grid, hat, out.slices[j]);
    });

    // Differentiation can only shrink the support of the underlying function;
    // the sampled slices keep the declared box.
    if (net.support_box) {
        const double margin = 8.0 * net.grid.spacing();
        for (int d = 0; d < net.grid.dim(); ++d) {
            if (net.support_box->lo[d] < -net.grid.extent() + margin ||
                net.support_box->hi[d] > net.grid.extent() - margin) {
                out.notes.push_back("spectral_derivative: support within 8 spacings of the "
                                    "periodic boundary; wraparound possible");
                break;
            }
        }
    }
    return out;
}

}  // namespace ultranet
