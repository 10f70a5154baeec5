#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace jsnap {

struct AuxState;
struct PhysState;

// FNV-1a, 64-bit.
constexpr std::uint64_t fnv1a(std::string_view bytes,
                              std::uint64_t seed = 0xcbf29ce484222325ULL) noexcept {
  std::uint64_t h = seed;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Canonical byte serializations. Equal states serialize identically.
void append_canonical(std::string& out, const AuxState& aux);
void append_canonical(std::string& out, const PhysState& phys);

std::uint64_t digest(const AuxState& aux);
std::uint64_t digest(const PhysState& phys);

std::string hex64(std::uint64_t v);

}  // namespace jsnap
