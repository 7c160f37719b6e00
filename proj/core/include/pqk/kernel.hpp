#pragma once

#include <span>
#include <string>

#include "pqk/linalg.hpp"

namespace pqk {

enum class KernelKind { Linear, Poly, Rbf, Sigmoid };

std::string_view to_string(KernelKind k);
KernelKind parse_kernel_kind(std::string_view text);

/// γ as a number or one of the data-dependent rules: `auto` = 1/d,
/// `scale` = 1/(d·Var(X)) with the variance taken over every entry of X.
struct Gamma {
  enum class Mode { Value, Auto, Scale };
  Mode mode = Mode::Scale;
  double value = 0.0;

  static Gamma of(double v);
  static Gamma automatic() { return {Mode::Auto, 0.0}; }
  static Gamma scale() { return {Mode::Scale, 0.0}; }
  static Gamma parse(std::string_view text);

  [[nodiscard]] double resolve(const Matrix& x) const;
  [[nodiscard]] std::string str() const;

  bool operator==(const Gamma&) const = default;
};

struct KernelSpec {
  KernelKind kind = KernelKind::Rbf;
  Gamma gamma = Gamma::scale();
  int degree = 3;
  double coef0 = 0.0;

  [[nodiscard]] std::string str() const;
  bool operator==(const KernelSpec&) const = default;
};

/// A KernelSpec with γ fixed to a number, ready for evaluation.
struct ResolvedKernel {
  KernelKind kind = KernelKind::Rbf;
  double gamma = 1.0;
  int degree = 3;
  double coef0 = 0.0;

  static ResolvedKernel resolve(const KernelSpec& spec, const Matrix& x);
  [[nodiscard]] double operator()(std::span<const double> a, std::span<const double> b) const;
};

/// Gram matrix K_ij = k(x_i, x_j). Throws NumericError on non-finite entries.
Matrix kernel_matrix(const Matrix& x, const KernelSpec& spec);
Matrix kernel_matrix(const Matrix& x, const ResolvedKernel& k);
/// Cross kernel K_ij = k(a_i, b_j).
Matrix kernel_matrix(const Matrix& a, const Matrix& b, const ResolvedKernel& k);

}  // namespace pqk
