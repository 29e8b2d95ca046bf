#include "ultranet/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace ultranet {
namespace fft {
namespace {

// FFTW planning is not thread safe; executing distinct plans is. Plans are
// created once per (size, direction) with FFTW_ESTIMATE, which is
// deterministic, and FFTW_UNALIGNED so they run on plain std::vector storage.
class PlanCache {
public:
    fftw_plan get(int n0, int n1, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto key = std::make_tuple(n0, n1, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<Complex> scratch(static_cast<std::size_t>(n0) * (n1 > 0 ? n1 : 1));
        auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
        fftw_plan plan = n1 > 0
                             ? fftw_plan_dft_2d(n1, n0, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED)
                             : fftw_plan_dft_1d(n0, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

void execute(const Grid& grid, int sign, std::vector<Complex>& data) {
    fftw_plan plan = cache().get(grid.points(), grid.dim() == 2 ? grid.points() : 0, sign);
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, p, p);
}

// exp(-i pi k) exp(i pi k / N) for signed frequency k: the exact phase of the
// site offset x_0 = -L + h/2 relative to the plain DFT.
Complex forward_phase(int k, int n) {
    double ang = -M_PI * k + M_PI * k / n;
    return Complex(std::cos(ang), std::sin(ang));
}

}  // namespace

void forward(const Grid& grid, const std::vector<Complex>& in, std::vector<Complex>& out) {
    const int n = grid.points();
    const double h = grid.spacing();
    out = in;
    execute(grid, FFTW_BACKWARD, out);  // unnormalized exp(+i 2pi nk/N) sum
    if (grid.dim() == 1) {
        for (int m = 0; m < n; ++m) out[m] *= h * forward_phase(grid.freq_index(m), n);
    } else {
        const double h2 = h * h;
        for (int my = 0; my < n; ++my) {
            Complex py = forward_phase(grid.freq_index(my), n);
            for (int mx = 0; mx < n; ++mx)
                out[grid.site(mx, my)] *= h2 * py * forward_phase(grid.freq_index(mx), n);
        }
    }
}

void inverse(const Grid& grid, const std::vector<Complex>& in, std::vector<Complex>& out) {
    const int n = grid.points();
    const double scale = 1.0 / (2.0 * grid.extent());
    out = in;
    if (grid.dim() == 1) {
        for (int m = 0; m < n; ++m) out[m] *= scale * std::conj(forward_phase(grid.freq_index(m), n));
    } else {
        const double s2 = scale * scale;
        for (int my = 0; my < n; ++my) {
            Complex py = std::conj(forward_phase(grid.freq_index(my), n));
            for (int mx = 0; mx < n; ++mx)
                out[grid.site(mx, my)] *= s2 * py * std::conj(forward_phase(grid.freq_index(mx), n));
        }
    }
    execute(grid, FFTW_FORWARD, out);  // unnormalized exp(-i 2pi nk/N) sum
}

}  // namespace fft
}  // namespace ultranet
