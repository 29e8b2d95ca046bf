#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ultranet {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IncompatibilityError : Error {
    using Error::Error;
};
struct UnsupportedOrderError : Error {
    using Error::Error;
};
struct InvalidNetError : Error {
    using Error::Error;
};
struct AliasingError : Error {
    using Error::Error;
};
struct PreconditionError : Error {
    using Error::Error;
};
struct ConstructionError : Error {
    using Error::Error;
};
struct WraparoundError : Error {
    using Error::Error;
};
struct UnderdeterminedFitError : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};

// ---------------------------------------------------------------------------
// GevreyOrder
// ---------------------------------------------------------------------------

/// The Gevrey order s > 1 together with the derived exponents used everywhere:
/// the epsilon exponent a = 1/(2s-1) and the frequency exponent 1/s.
class GevreyOrder {
public:
    explicit GevreyOrder(double s) : s_(s) {
        if (!(s > 1.0) || !std::isfinite(s))
            throw ConfigError("GevreyOrder: requires s > 1, got s = " + std::to_string(s));
        eps_exponent_ = 1.0 / (2.0 * s - 1.0);
        freq_exponent_ = 1.0 / s;
    }

    double s() const { return s_; }
    /// a = 1/(2s-1), the exponent of eps^{-a} growth scales.
    double eps_exponent() const { return eps_exponent_; }
    /// 1/s, the exponent of |xi|^{1/s} frequency decay scales.
    double freq_exponent() const { return freq_exponent_; }

    bool operator==(const GevreyOrder& o) const { return s_ == o.s_; }

private:
    double s_;
    double eps_exponent_;
    double freq_exponent_;
};

// ---------------------------------------------------------------------------
// EpsilonLadder
// ---------------------------------------------------------------------------

/// Strictly decreasing finite list of regularization parameters in (0,1).
class EpsilonLadder {
public:
    explicit EpsilonLadder(std::vector<double> values) : values_(std::move(values)) {
        if (values_.size() < 4)
            throw ConfigError("EpsilonLadder: need at least 4 entries, got " +
                              std::to_string(values_.size()));
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!(values_[i] > 0.0 && values_[i] < 1.0))
                throw ConfigError("EpsilonLadder: entries must lie in (0,1)");
            if (i > 0 && !(values_[i] < values_[i - 1]))
                throw ConfigError("EpsilonLadder: entries must be strictly decreasing");
        }
    }

    /// Geometric ladder eps_j = base^{-j} for j = j_lo..j_hi.
    static EpsilonLadder geometric(int j_lo, int j_hi, double base = 2.0) {
        std::vector<double> v;
        for (int j = j_lo; j <= j_hi; ++j) v.push_back(std::pow(base, -j));
        return EpsilonLadder(std::move(v));
    }

    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double finest() const { return values_.back(); }
    double coarsest() const { return values_.front(); }

    bool operator==(const EpsilonLadder& o) const { return values_ == o.values_; }

private:
    std::vector<double> values_;
};

// ---------------------------------------------------------------------------
// Grid
// ---------------------------------------------------------------------------

/// Uniform periodic grid on [-L, L)^dim with N samples per axis.
///
/// Sites are placed at half offsets, x_i = -L + (i + 1/2) h with h = 2L/N, so
/// that the site set is symmetric under x -> -x. Frequencies are the integer
/// multiples of pi/L in [-N/2, N/2) * pi/L, stored in DFT index order.
class Grid {
public:
    Grid(int dim, double extent, int points) : dim_(dim), extent_(extent), points_(points) {
        if (dim != 1 && dim != 2) throw ConfigError("Grid: dim must be 1 or 2");
        if (!(extent > 0.0)) throw ConfigError("Grid: extent must be positive");
        if (points < 16 || (points & (points - 1)) != 0)
            throw ConfigError("Grid: points must be a power of two >= 16");
    }

    int dim() const { return dim_; }
    double extent() const { return extent_; }
    int points() const { return points_; }
    double spacing() const { return 2.0 * extent_ / points_; }
    /// Frequency lattice step pi/L.
    double freq_step() const { return M_PI / extent_; }
    /// Largest representable frequency magnitude per axis (Nyquist).
    double nyquist() const { return freq_step() * points_ / 2.0; }
    std::size_t site_count() const {
        std::size_t n = static_cast<std::size_t>(points_);
        return dim_ == 1 ? n : n * n;
    }

    double coord(int i) const { return -extent_ + (i + 0.5) * spacing(); }
    /// Signed integer frequency for DFT index m in [0, N).
    int freq_index(int m) const { return m < points_ / 2 ? m : m - points_; }
    double freq(int m) const { return freq_index(m) * freq_step(); }

    /// Row-major site index; x varies fastest.
    std::size_t site(int ix, int iy = 0) const {
        return static_cast<std::size_t>(iy) * points_ + ix;
    }

    bool operator==(const Grid& o) const {
        return dim_ == o.dim_ && extent_ == o.extent_ && points_ == o.points_;
    }

private:
    int dim_;
    double extent_;
    int points_;
};

// ---------------------------------------------------------------------------
// Box
// ---------------------------------------------------------------------------

/// Axis-aligned box in physical coordinates.
struct Box {
    std::array<double, 2> lo{0.0, 0.0};
    std::array<double, 2> hi{0.0, 0.0};

    static Box interval(double a, double b) { return Box{{a, 0.0}, {b, 0.0}}; }
    static Box rect(double ax, double bx, double ay, double by) { return Box{{ax, ay}, {bx, by}}; }
    static Box whole(const Grid& g) {
        Box b;
        for (int d = 0; d < g.dim(); ++d) {
            b.lo[d] = -g.extent();
            b.hi[d] = g.extent();
        }
        return b;
    }

    bool contains(int dim, const std::array<double, 2>& x) const {
        for (int d = 0; d < dim; ++d)
            if (x[d] < lo[d] || x[d] > hi[d]) return false;
        return true;
    }

    Box intersect(const Box& o) const {
        Box r;
        for (int d = 0; d < 2; ++d) {
            r.lo[d] = std::max(lo[d], o.lo[d]);
            r.hi[d] = std::min(hi[d], o.hi[d]);
        }
        return r;
    }

    Box unite(const Box& o) const {
        Box r;
        for (int d = 0; d < 2; ++d) {
            r.lo[d] = std::min(lo[d], o.lo[d]);
            r.hi[d] = std::max(hi[d], o.hi[d]);
        }
        return r;
    }

    bool empty(int dim) const {
        for (int d = 0; d < dim; ++d)
            if (hi[d] < lo[d]) return true;
        return false;
    }
};

// ---------------------------------------------------------------------------
// MultiIndex
// ---------------------------------------------------------------------------

/// Derivative multi-index; component d is the order along axis d.
using MultiIndex = std::array<int, 2>;

inline int multi_order(const MultiIndex& a) { return a[0] + a[1]; }

/// All multi-indices with |alpha| <= max_order in the given dimension,
/// enumerated in a fixed deterministic order.
std::vector<MultiIndex> multi_indices_up_to(int dim, int max_order);

/// Default ladder eps_j = 2^{-j}, j = 2..10, truncated so that every entry
/// satisfies the grid compatibility rule eps >= 4 * spacing.
EpsilonLadder default_ladder(const Grid& grid);

}  // namespace ultranet
