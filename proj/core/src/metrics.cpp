#include "pqk/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pqk/errors.hpp"

namespace pqk {

namespace {

void require_symmetric(const Matrix& k, const char* what) {
  if (k.rows() != k.cols()) throw std::invalid_argument(std::string(what) + " must be square");
  double scale = 1.0;
  for (double v : k.data()) scale = std::max(scale, std::abs(v));
  if (!is_symmetric(k, 1e-10 * scale))
    throw std::invalid_argument(std::string(what) + " is not symmetric");
}

}  // namespace

Matrix normalize_trace(const Matrix& k) {
  const double tr = k.trace();
  if (!(tr > 0.0)) throw NumericError("kernel trace must be positive to normalize");
  return (static_cast<double>(k.rows()) / tr) * k;
}

Matrix psd_sqrt(const Matrix& k) {
  require_symmetric(k, "psd_sqrt input");
  const auto eig = jacobi_eigen(k, 1e-12);
  std::vector<double> root(eig.values.size());
  for (std::size_t i = 0; i < root.size(); ++i) root[i] = std::sqrt(std::max(eig.values[i], 0.0));
  return reconstruct(eig, root);
}

double geometric_difference(const Matrix& kc_in, const Matrix& kq_in, double lambda,
                            bool normalize) {
  require_symmetric(kc_in, "classical kernel");
  require_symmetric(kq_in, "quantum kernel");
  if (kc_in.rows() != kq_in.rows()) throw std::invalid_argument("kernel sizes differ");
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");

  const Matrix kc = normalize ? normalize_trace(kc_in) : kc_in;
  const Matrix kq = normalize ? normalize_trace(kq_in) : kq_in;

  // √Kc (Kc+λI)^-2 √Kc shares Kc's eigenvectors: σ/(σ+λ)² on the spectrum.
  const auto eig = jacobi_eigen(kc, 1e-12);
  const double top = std::max(1.0, std::abs(eig.values.back()));
  std::vector<double> middle(eig.values.size());
  for (std::size_t i = 0; i < middle.size(); ++i) {
    const double sigma = std::max(eig.values[i], 0.0);
    const double shifted = sigma + lambda;
    if (shifted <= 1e-12 * top)
      throw NumericError("Kc + lambda*I is singular; use lambda > 0");
    middle[i] = sigma / (shifted * shifted);
  }
  const Matrix sq = psd_sqrt(kq);
  const Matrix m = sq * reconstruct(eig, middle) * sq;
  const auto spectrum = jacobi_eigen(m, 1e-12);
  return std::sqrt(std::max(spectrum.values.back(), 0.0));
}

double model_complexity(const Matrix& k_in, std::span<const int> y, double lambda,
                        bool normalize) {
  require_symmetric(k_in, "kernel");
  if (y.size() != k_in.rows()) throw std::invalid_argument("label count differs from kernel size");
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  const Matrix k = normalize ? normalize_trace(k_in) : k_in;
  const std::size_t n = k.rows();

  Matrix shifted = k;
  for (std::size_t i = 0; i < n; ++i) shifted(i, i) += lambda;
  std::vector<double> yd(y.begin(), y.end());
  const auto z = solve(shifted, yd);  // (K+λI)^-1 y

  const double first = lambda * lambda * dot(z, z);
  const double second = dot(z, multiply(k, z));
  const double nn = static_cast<double>(n);
  return std::sqrt(std::max(first, 0.0) / nn) + std::sqrt(std::max(second, 0.0) / nn);
}

}  // namespace pqk
