#pragma once

#include <cstddef>
#include <vector>

namespace clickmodel::linalg {

/// Row-major dense matrix, just big enough for the per-component normal
/// systems and the augmented least-squares solves.
class Matrix {
  public:
    Matrix() = default;
    Matrix(int rows, int cols)
        : rows_(rows), cols_(cols),
          data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0) {}

    double& operator()(int i, int j) {
        return data_[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
                     static_cast<std::size_t>(j)];
    }
    double operator()(int i, int j) const {
        return data_[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
                     static_cast<std::size_t>(j)];
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

/// Solve a*x = b for symmetric positive definite a via Cholesky.
/// Throws NumericError when a is not numerically positive definite.
std::vector<double> solve_spd(Matrix a, std::vector<double> b);

/// min ||a*x - b||_2 via Householder QR. Requires full column rank;
/// throws NumericError on (numerical) rank deficiency.
std::vector<double> solve_least_squares(Matrix a, std::vector<double> b);

}  // namespace clickmodel::linalg
