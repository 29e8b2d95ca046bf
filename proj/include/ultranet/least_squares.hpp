#pragma once

#include <vector>

namespace ultranet {

/// Ordinary least squares for y ~ columns * coeffs.
/// columns[c][i] is regressor c at sample i. Returns the coefficient vector;
/// residual_rms receives sqrt(mean squared residual).
std::vector<double> least_squares(const std::vector<std::vector<double>>& columns,
                                  const std::vector<double>& y, double* residual_rms = nullptr);

}  // namespace ultranet
