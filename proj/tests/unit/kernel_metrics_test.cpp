#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "pqk/errors.hpp"
#include "pqk/kernel.hpp"
#include "pqk/metrics.hpp"

using namespace pqk;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

Matrix random_psd(std::size_t n, std::uint64_t seed) {
  const Matrix b = random_matrix(n, n, seed);
  return b * transpose(b);
}

std::vector<int> random_labels(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<int> y(n);
  for (auto& v : y) v = rng() % 2 ? 1 : -1;
  return y;
}

}  // namespace

TEST(Kernel, RbfDiagonalIsOne) {
  const auto k = kernel_matrix(random_matrix(6, 3, 1), KernelSpec{KernelKind::Rbf, Gamma::of(0.7)});
  for (std::size_t i = 0; i < 6; ++i) EXPECT_DOUBLE_EQ(k(i, i), 1.0);
}

TEST(Kernel, LinearOnOrthogonalRows) {
  const auto k = kernel_matrix(Matrix::from_rows({{1, 0}, {0, 2}}), KernelSpec{KernelKind::Linear});
  EXPECT_EQ(k, Matrix::from_rows({{1, 0}, {0, 4}}));
}

TEST(Kernel, MatchesPairwiseFormulas) {
  const Matrix x = random_matrix(3, 2, 2);
  auto dot2 = [&](std::size_t i, std::size_t j) { return x(i, 0) * x(j, 0) + x(i, 1) * x(j, 1); };
  auto dist2 = [&](std::size_t i, std::size_t j) {
    return std::pow(x(i, 0) - x(j, 0), 2) + std::pow(x(i, 1) - x(j, 1), 2);
  };
  const auto rbf = kernel_matrix(x, KernelSpec{KernelKind::Rbf, Gamma::of(1.0)});
  const auto poly = kernel_matrix(x, KernelSpec{KernelKind::Poly, Gamma::of(0.5), 3, 1.0});
  const auto sig = kernel_matrix(x, KernelSpec{KernelKind::Sigmoid, Gamma::of(0.2), 3, -0.1});
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_NEAR(rbf(i, j), std::exp(-dist2(i, j)), 1e-15);
      EXPECT_NEAR(poly(i, j), std::pow(0.5 * dot2(i, j) + 1.0, 3), 1e-12);
      EXPECT_NEAR(sig(i, j), std::tanh(0.2 * dot2(i, j) - 0.1), 1e-15);
    }
}

TEST(Kernel, GammaConventions) {
  const Matrix x = Matrix::from_rows({{0, 1}, {1, 1}, {2, 1}});
  EXPECT_DOUBLE_EQ(Gamma::automatic().resolve(x), 0.5);
  // Mean over all six entries is 1, variance (1+0+0+0+1+0)/6 = 1/3.
  EXPECT_DOUBLE_EQ(Gamma::scale().resolve(x), 1.0 / (2.0 * (1.0 / 3.0)));
  EXPECT_DOUBLE_EQ(Gamma::scale().resolve(Matrix(3, 2, 1.0)), 1.0);
  EXPECT_THROW(Gamma::parse("fast"), ConfigError);
  EXPECT_THROW(Gamma::of(-1.0), ConfigError);
}

TEST(Kernel, NonFiniteEntriesAreRejected) {
  const Matrix x = Matrix::from_rows({{1e200}, {1e200}});
  EXPECT_THROW(kernel_matrix(x, KernelSpec{KernelKind::Poly, Gamma::of(1.0), 3, 0.0}), NumericError);
}

TEST(PsdSqrt, ClosedForms) {
  EXPECT_LT(max_abs_diff(psd_sqrt(Matrix::identity(4)), Matrix::identity(4)), 1e-14);
  EXPECT_LT(max_abs_diff(psd_sqrt(Matrix::from_rows({{4, 0}, {0, 9}})), Matrix::from_rows({{2, 0}, {0, 3}})),
            1e-14);
}

TEST(PsdSqrt, SquaresBack) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Matrix a = random_psd(5, seed);
    const Matrix r = psd_sqrt(a);
    EXPECT_TRUE(is_symmetric(r, 1e-12));
    EXPECT_LT(max_abs_diff(r * r, a), 1e-8);
  }
}

TEST(PsdSqrt, ClipsNegativeEigenvalues) {
  const Matrix r = psd_sqrt(Matrix::from_rows({{1, 0}, {0, -1e-9}}));
  EXPECT_DOUBLE_EQ(r(1, 1), 0.0);
}

TEST(PsdSqrt, RejectsAsymmetric) {
  EXPECT_THROW(psd_sqrt(Matrix::from_rows({{1, 2}, {0, 1}})), std::invalid_argument);
}

TEST(GeometricDifference, IdentityClosedForm) {
  for (double lambda : {0.0, 0.5, 1.0, 10.0})
    EXPECT_NEAR(geometric_difference(Matrix::identity(7), Matrix::identity(7), lambda),
                1.0 / (1.0 + lambda), 1e-12);
}

TEST(GeometricDifference, MatchesDenseOracle) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Matrix kc = random_psd(20, seed), kq = random_psd(20, seed + 100);
    for (double lambda : {0.1, 1.0})
      EXPECT_NEAR(geometric_difference(kc, kq, lambda), oracle::geometric_difference(kc, kq, lambda),
                  1e-8);
  }
}

TEST(GeometricDifference, SelfComparisonReducesToSpectrum) {
  const Matrix k = random_psd(12, 7);
  const double lambda = 0.3;
  const auto eig = jacobi_eigen(normalize_trace(k));
  double best = 0.0;
  for (double s : eig.values) best = std::max(best, std::max(s, 0.0) / (std::max(s, 0.0) + lambda));
  EXPECT_NEAR(geometric_difference(k, k, lambda), best, 1e-9);
}

TEST(GeometricDifference, NonincreasingInLambda) {
  const Matrix kc = random_psd(15, 3), kq = random_psd(15, 4);
  double prev = std::numeric_limits<double>::infinity();
  for (double lambda : {0.001, 0.01, 0.1, 0.5, 1.0, 5.0, 50.0}) {
    const double g = geometric_difference(kc, kq, lambda);
    EXPECT_LE(g, prev * (1 + 1e-12));
    prev = g;
  }
}

TEST(GeometricDifference, PermutationInvariant) {
  const Matrix kc = random_psd(10, 5), kq = random_psd(10, 6);
  std::vector<std::size_t> p{3, 1, 4, 0, 9, 2, 6, 5, 8, 7};
  EXPECT_NEAR(geometric_difference(kc, kq, 0.2), geometric_difference(kc.select(p, p), kq.select(p, p), 0.2),
              1e-10);
}

TEST(GeometricDifference, SingularSystemThrows) {
  const Matrix kc = Matrix::from_rows({{1, 1}, {1, 1}});
  EXPECT_THROW(geometric_difference(kc, kc, 0.0), NumericError);
}

TEST(ModelComplexity, IdentityWithoutRegularization) {
  for (std::size_t n : {4u, 50u, 172u})
    EXPECT_NEAR(model_complexity(Matrix::identity(n), random_labels(n, n), 0.0), 1.0, 1e-12);
}

TEST(ModelComplexity, MatchesDenseOracleAndSignFlip) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Matrix k = random_psd(20, seed + 30);
    auto y = random_labels(20, seed);
    const double s = model_complexity(k, y, 0.5);
    EXPECT_NEAR(s, oracle::model_complexity(k, y, 0.5), 1e-8);
    for (auto& v : y) v = -v;
    EXPECT_NEAR(model_complexity(k, y, 0.5), s, 1e-12);
  }
}

TEST(ModelComplexity, TwoByTwoClosedForm) {
  // λ = 0 reduces to sqrt(yᵀK⁻¹y / N); normalization off so K is used as given.
  const Matrix k = Matrix::from_rows({{2, 1}, {1, 2}});
  const std::vector<int> y{1, -1};
  // K⁻¹ = [[2,-1],[-1,2]]/3, yᵀK⁻¹y = (2+1+1+2)/3 = 2.
  EXPECT_NEAR(model_complexity(k, y, 0.0, false), std::sqrt(2.0 / 2.0), 1e-12);
}
