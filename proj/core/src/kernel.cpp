#include "pqk/kernel.hpp"

#include <tbb/parallel_for.h>

#include <cmath>

#include "pqk/csv.hpp"
#include "pqk/errors.hpp"

namespace pqk {

std::string_view to_string(KernelKind k) {
  switch (k) {
    case KernelKind::Linear: return "linear";
    case KernelKind::Poly: return "poly";
    case KernelKind::Rbf: return "rbf";
    case KernelKind::Sigmoid: return "sigmoid";
  }
  return "?";
}

KernelKind parse_kernel_kind(std::string_view text) {
  if (text == "linear") return KernelKind::Linear;
  if (text == "poly") return KernelKind::Poly;
  if (text == "rbf") return KernelKind::Rbf;
  if (text == "sigmoid") return KernelKind::Sigmoid;
  throw ConfigError("unknown kernel '" + std::string(text) + "'");
}

Gamma Gamma::of(double v) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("gamma must be a positive number");
  return {Mode::Value, v};
}

Gamma Gamma::parse(std::string_view text) {
  if (text == "auto") return automatic();
  if (text == "scale") return scale();
  try {
    return of(csv::parse_double(text));
  } catch (const DataError&) {
    throw ConfigError("invalid gamma '" + std::string(text) + "'");
  }
}

double Gamma::resolve(const Matrix& x) const {
  const double d = static_cast<double>(x.cols());
  switch (mode) {
    case Mode::Value: return value;
    case Mode::Auto: return 1.0 / d;
    case Mode::Scale: {
      const auto& v = x.data();
      if (v.empty()) return 1.0;
      double mean = 0.0;
      for (double e : v) mean += e;
      mean /= static_cast<double>(v.size());
      double var = 0.0;
      for (double e : v) var += (e - mean) * (e - mean);
      var /= static_cast<double>(v.size());
      return var > 0.0 ? 1.0 / (d * var) : 1.0;
    }
  }
  return value;
}

std::string Gamma::str() const {
  switch (mode) {
    case Mode::Auto: return "auto";
    case Mode::Scale: return "scale";
    case Mode::Value: return csv::format_double(value);
  }
  return "?";
}

std::string KernelSpec::str() const {
  std::string s(to_string(kind));
  if (kind != KernelKind::Linear) s += ";gamma=" + gamma.str();
  if (kind == KernelKind::Poly) s += ";degree=" + std::to_string(degree);
  if (kind == KernelKind::Poly || kind == KernelKind::Sigmoid)
    s += ";coef0=" + csv::format_double(coef0);
  return s;
}

ResolvedKernel ResolvedKernel::resolve(const KernelSpec& spec, const Matrix& x) {
  if (spec.degree < 1) throw ConfigError("polynomial degree must be >= 1");
  return {spec.kind, spec.gamma.resolve(x), spec.degree, spec.coef0};
}

double ResolvedKernel::operator()(std::span<const double> a, std::span<const double> b) const {
  switch (kind) {
    case KernelKind::Linear: return dot(a, b);
    case KernelKind::Poly: return std::pow(gamma * dot(a, b) + coef0, degree);
    case KernelKind::Rbf: {
      double d2 = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) d2 += (a[i] - b[i]) * (a[i] - b[i]);
      return std::exp(-gamma * d2);
    }
    case KernelKind::Sigmoid: return std::tanh(gamma * dot(a, b) + coef0);
  }
  return 0.0;
}

Matrix kernel_matrix(const Matrix& x, const KernelSpec& spec) {
  return kernel_matrix(x, ResolvedKernel::resolve(spec, x));
}

Matrix kernel_matrix(const Matrix& x, const ResolvedKernel& k) {
  if (x.rows() == 0) throw std::invalid_argument("kernel_matrix needs at least one row");
  const std::size_t n = x.rows();
  Matrix g(n, n);
  tbb::parallel_for(std::size_t{0}, n, [&](std::size_t i) {
    for (std::size_t j = i; j < n; ++j) {
      const double v = k(x.row(i), x.row(j));
      g(i, j) = v;
      g(j, i) = v;
    }
  });
  for (double v : g.data())
    if (!std::isfinite(v)) throw NumericError("kernel matrix has non-finite entries");
  return g;
}

Matrix kernel_matrix(const Matrix& a, const Matrix& b, const ResolvedKernel& k) {
  if (a.cols() != b.cols()) throw std::invalid_argument("kernel_matrix width mismatch");
  Matrix g(a.rows(), b.rows());
  tbb::parallel_for(std::size_t{0}, a.rows(), [&](std::size_t i) {
    for (std::size_t j = 0; j < b.rows(); ++j) g(i, j) = k(a.row(i), b.row(j));
  });
  for (double v : g.data())
    if (!std::isfinite(v)) throw NumericError("kernel matrix has non-finite entries");
  return g;
}

}  // namespace pqk
