#pragma once

#include <span>

#include "pqk/linalg.hpp"

namespace pqk {

/// Rescales K so that trace(K) = N.
Matrix normalize_trace(const Matrix& k);

/// Principal square root V·sqrt(max(Λ,0))·Vᵀ of a symmetric matrix via cyclic
/// Jacobi. Throws std::invalid_argument when K is not symmetric to 1e-10
/// (relative to its largest entry).
Matrix psd_sqrt(const Matrix& k);

/// Geometric difference between a classical kernel Kc and a quantum-projected
/// kernel Kq:
///   g = sqrt( λ_max( √Kq √Kc (Kc + λI)^-2 √Kc √Kq ) ).
/// Both kernels are first rescaled to trace N unless `normalize` is false.
/// Throws NumericError if Kc + λI is singular.
double geometric_difference(const Matrix& kc, const Matrix& kq, double lambda,
                            bool normalize = true);

/// Label-dependent model complexity
///   s = sqrt(λ² yᵀ(K+λI)^-2 y / N) + sqrt(yᵀ(K+λI)^-1 K (K+λI)^-1 y / N).
double model_complexity(const Matrix& k, std::span<const int> y, double lambda,
                        bool normalize = true);

}  // namespace pqk
