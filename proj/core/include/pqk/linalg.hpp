#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pqk {

/// Dense row-major matrix of doubles. Rows double as sample vectors for
/// feature matrices, so row access returns contiguous spans.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> d);
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  [[nodiscard]] std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  [[nodiscard]] std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  [[nodiscard]] std::vector<double> col(std::size_t c) const;

  [[nodiscard]] const std::vector<double>& data() const { return data_; }

  /// Rows selected by index, in the given order.
  [[nodiscard]] Matrix select_rows(std::span<const std::size_t> idx) const;
  /// Principal submatrix for square matrices.
  [[nodiscard]] Matrix select(std::span<const std::size_t> row_idx,
                              std::span<const std::size_t> col_idx) const;

  [[nodiscard]] double trace() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);
Matrix transpose(const Matrix& a);
std::vector<double> multiply(const Matrix& a, std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);

double max_abs_diff(const Matrix& a, const Matrix& b);
bool is_symmetric(const Matrix& a, double tol);

/// Eigenpairs of a symmetric matrix; column k of `vectors` pairs with
/// values[k]. Values are sorted ascending.
struct SymmetricEigen {
  std::vector<double> values;
  Matrix vectors;
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm falls below
/// tol times the Frobenius norm of the input.
SymmetricEigen jacobi_eigen(const Matrix& a, double tol = 1e-12, int max_sweeps = 100);

/// V f(Λ) Vᵀ for an eigendecomposition.
Matrix reconstruct(const SymmetricEigen& eig, std::span<const double> mapped_values);

/// LU with partial pivoting. Throws NumericError if a pivot underflows
/// `singular_tol` times the largest absolute entry of `a`.
std::vector<double> solve(const Matrix& a, std::span<const double> b, double singular_tol = 1e-13);

}  // namespace pqk
