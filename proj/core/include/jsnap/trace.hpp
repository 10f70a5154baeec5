#pragma once

// Programs, schedules and execution traces.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jsnap/aux_model.hpp"
#include "jsnap/invariants.hpp"
#include "jsnap/snapshot.hpp"

namespace jsnap {

struct ThreadProgram {
  std::string name;
  std::vector<MethodCall> calls;

  bool operator==(const ThreadProgram&) const = default;
};

struct Program {
  std::vector<ThreadProgram> threads;
  Value init_x = 5;
  Value init_y = 0;
  ValueDomain domain = kDefaultDomain;

  std::size_t num_calls() const noexcept;
  std::optional<ThreadId> find(const std::string& name) const;
  // e.g. "l:[write x 2; write y 1] c:[scan]"
  std::string describe() const;

  bool operator==(const Program& o) const {
    return threads == o.threads && init_x == o.init_x && init_y == o.init_y;
  }
};

// One thread id per scheduling choice.
using Schedule = std::vector<ThreadId>;

struct StepRecord {
  std::size_t index = 0;  // 1-based
  ThreadId tid = 0;
  std::string label;
  std::uint64_t phys_digest = 0;
  std::uint64_t aux_digest = 0;

  bool operator==(const StepRecord&) const = default;
};

struct MethodRecord {
  ThreadId tid = 0;
  std::size_t call_index = 0;  // position in the thread's call list
  MethodCall call;
  std::size_t invocation = 0;  // index of first step
  std::size_t response = 0;    // index of last step
  std::optional<ValuePair> result;
  std::optional<Timestamp> ts;       // write: its event
  std::optional<Timestamp> witness;  // scan: linearization witness
  std::optional<Timestamp> t_x, t_y;  // scan: relinked events

  bool operator==(const MethodRecord&) const = default;
};

struct SigmaEntry {
  Timestamp t;
  Ptr ptr = Ptr::X;
  Value val = 0;
  Color color = Color::Green;

  bool operator==(const SigmaEntry&) const = default;
};

struct Trace {
  Program program;
  Schedule schedule;
  std::optional<std::uint64_t> seed;
  std::vector<StepRecord> steps;
  std::vector<MethodRecord> methods;
  std::vector<SigmaEntry> sigma;
  ViolationReport violations;

  // sigma's values in order, e.g. {5, 0, 2, 1, 3}
  std::vector<Value> sigma_values() const;
  // Digest of the rendered step and method records.
  std::uint64_t digest() const;

  bool operator==(const Trace&) const = default;
};

}  // namespace jsnap
