#pragma once

#include <array>
#include <cstdint>

namespace pqk {

/// 2x2 contingency table {{a, b}, {c, d}}.
using Table2x2 = std::array<std::array<std::uint64_t, 2>, 2>;

/// Two-sided Fisher exact test: total hypergeometric probability of every
/// table with the observed margins that is no more likely than the observed
/// one. Returns 1 when a margin is empty.
double fisher_exact(const Table2x2& t);

}  // namespace pqk
