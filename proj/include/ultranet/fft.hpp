#pragma once

#include <vector>

#include "ultranet/types.hpp"

namespace ultranet {

// Discrete realization of the transform pair
//
//   F[f](xi)  = integral f(x) exp(+i x.xi) dx
//   f(x)      = (2L)^{-dim} sum_xi F[f](xi) exp(-i x.xi)
//
// on the periodic grid, via scaled FFTs with the phase factors required by the
// half-offset site layout. Spectra are stored in DFT index order (use
// Grid::freq to map an index to its signed frequency).
//
// With this sign choice d/dx corresponds to multiplication by -i xi.
namespace fft {

/// Forward transform of one slice. `out` may alias `in`.
void forward(const Grid& grid, const std::vector<Complex>& in, std::vector<Complex>& out);

/// Inverse transform of one spectrum. `out` may alias `in`.
void inverse(const Grid& grid, const std::vector<Complex>& in, std::vector<Complex>& out);

}  // namespace fft
}  // namespace ultranet
