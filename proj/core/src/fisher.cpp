#include "pqk/fisher.hpp"

#include <algorithm>
#include <vector>

namespace pqk {

double fisher_exact(const Table2x2& t) {
  const double a = static_cast<double>(t[0][0]);
  const double r1 = static_cast<double>(t[0][0] + t[0][1]);
  const double r2 = static_cast<double>(t[1][0] + t[1][1]);
  const double c1 = static_cast<double>(t[0][0] + t[1][0]);
  const double c2 = static_cast<double>(t[0][1] + t[1][1]);
  if (r1 == 0 || r2 == 0 || c1 == 0 || c2 == 0) return 1.0;

  const auto lo = static_cast<std::int64_t>(std::max(0.0, c1 - r2));
  const auto hi = static_cast<std::int64_t>(std::min(r1, c1));
  const double n = r1 + r2;
  auto mode = static_cast<std::int64_t>((r1 + 1) * (c1 + 1) / (n + 2));
  mode = std::clamp(mode, lo, hi);

  // Weights relative to the mode, so none of them overflow.
  std::vector<double> w(static_cast<std::size_t>(hi - lo + 1), 0.0);
  auto at = [&](std::int64_t k) -> double& { return w[static_cast<std::size_t>(k - lo)]; };
  at(mode) = 1.0;
  for (std::int64_t k = mode; k < hi; ++k) {
    const double x = static_cast<double>(k);
    at(k + 1) = at(k) * (r1 - x) * (c1 - x) / ((x + 1) * (r2 - c1 + x + 1));
  }
  for (std::int64_t k = mode; k > lo; --k) {
    const double x = static_cast<double>(k - 1);
    at(k - 1) = at(k) * (x + 1) * (r2 - c1 + x + 1) / ((r1 - x) * (c1 - x));
  }

  const double observed = at(static_cast<std::int64_t>(a)) * (1.0 + 1e-12);
  double total = 0.0, tail = 0.0;
  for (double v : w) {
    total += v;
    if (v <= observed) tail += v;
  }
  return std::min(1.0, tail / total);
}

}  // namespace pqk
