#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace pqk {

/// Incremental 64-bit FNV-1a. Used for cache keys and provenance hashes,
/// not for anything security-relevant.
class Fnv1a {
 public:
  Fnv1a& update(std::string_view bytes);
  Fnv1a& update(std::span<const std::uint8_t> bytes);
  Fnv1a& update(std::uint64_t v);
  Fnv1a& update(double v);
  [[nodiscard]] std::uint64_t digest() const { return state_; }
  [[nodiscard]] std::string hex() const;

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

/// splitmix64 finalizer, used to derive independent sub-seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace pqk
