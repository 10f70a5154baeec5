#pragma once

#include <utility>
#include <vector>

#include "jsnap/aux_model.hpp"

namespace jsnap {

// The pre-state values a method's postcondition refers to, frozen at
// invocation.
struct SpecSnapshot {
  ThreadId tid = 0;
  TimestampSet dom_self;
  TimestampSet dom_other;
  TimestampSet scanned;
  TimestampSet dom_global;
  std::vector<std::pair<Timestamp, Timestamp>> omega;

  static SpecSnapshot capture(const AuxState& aux, ThreadId tid);

  bool operator==(const SpecSnapshot&) const = default;
};

TimestampSet dom_self(const AuxState& aux, ThreadId tid);
TimestampSet dom_other(const AuxState& aux, ThreadId tid);
TimestampSet dom_joint(const AuxState& aux);
TimestampSet dom_hist(const AuxState& aux);

}  // namespace jsnap
