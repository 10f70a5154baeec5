#pragma once

// Brute-force linearizability checking over completed histories, and direct
// validation of the order recorded in a trace's final sigma.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jsnap/trace.hpp"

namespace jsnap {

struct OpRecord {
  MethodCall call;
  std::optional<ValuePair> result;  // scans only
  std::size_t invocation = 0;
  std::size_t response = 0;

  static OpRecord write(Ptr p, Value v, std::size_t inv, std::size_t resp) {
    return {MethodCall::write(p, v), std::nullopt, inv, resp};
  }
  static OpRecord scan(ValuePair r, std::size_t inv, std::size_t resp) {
    return {MethodCall::scan(), r, inv, resp};
  }

  bool operator==(const OpRecord&) const = default;
};

// a must come before b in every linearization.
inline bool precedes(const OpRecord& a, const OpRecord& b) noexcept {
  return a.response < b.invocation;
}

// Sequential pair register starting at `init`; with no initial value a scan
// before both pointers are written fails.
bool replay_sequential(std::span<const OpRecord> order,
                       std::optional<ValuePair> init = std::nullopt);

inline constexpr std::size_t kMaxLinearizableOps = 8;

// First permutation (lexicographic over op indices) consistent with
// real-time precedence that replays correctly; indices into `ops`.
// Throws kSizeLimit above kMaxLinearizableOps.
std::optional<std::vector<std::size_t>> linearizable(
    std::span<const OpRecord> ops, ValuePair init);

// The completed methods of a trace, in trace order.
std::vector<OpRecord> ops_of(const Trace& trace);

// Orders the trace's writes by final sigma, inserts each scan right after its
// witness, then requires real-time consistency and a correct sequential
// replay. Initial writes act as operations completed before step 1.
// Throws kIncompleteTrace if a method is missing or lacks its event/witness.
bool validate_witness(const Trace& trace, std::string* why = nullptr);

}  // namespace jsnap
