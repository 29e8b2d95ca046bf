#include "ultranet/least_squares.hpp"

#include <Eigen/Dense>

#include "ultranet/types.hpp"

namespace ultranet {

std::vector<double> least_squares(const std::vector<std::vector<double>>& columns,
                                  const std::vector<double>& y, double* residual_rms) {
    const std::size_t cols = columns.size();
    const std::size_t rows = y.size();
    if (cols == 0 || rows < cols)
        throw UnderdeterminedFitError("least_squares: " + std::to_string(rows) +
                                      " samples for " + std::to_string(cols) + " coefficients");
    Eigen::MatrixXd a(rows, cols);
    Eigen::VectorXd b(rows);
    for (std::size_t c = 0; c < cols; ++c) {
        if (columns[c].size() != rows)
            throw UnderdeterminedFitError("least_squares: ragged design matrix");
        for (std::size_t i = 0; i < rows; ++i) a(i, c) = columns[c][i];
    }
    for (std::size_t i = 0; i < rows; ++i) b(i) = y[i];

    Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);
    if (residual_rms) {
        double ss = (a * x - b).squaredNorm();
        *residual_rms = std::sqrt(ss / static_cast<double>(rows));
    }
    return std::vector<double>(x.data(), x.data() + cols);
}

}  // namespace ultranet
