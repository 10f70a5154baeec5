#pragma once

// Auxiliary transitions of the snapshot object's state transition system.
// Each is a total function on the states where its guard holds; a failed
// guard raises Error(kGuardViolation).

#include <span>
#include <vector>

#include "jsnap/aux_model.hpp"

namespace jsnap {

struct Registered {
  AuxState aux;
  Timestamp t;
};

// Allocates t = max(dom hist) + 1, appends it to sigma and records the write
// in the joint history. Yellow if an active scan has cleared fwd(p), else red.
Registered register_write(Ptr p, Value v, const AuxState& aux);

AuxState check(Ptr p, bool b, const AuxState& aux);
AuxState forward(Ptr p, const AuxState& aux);
// Moves the event from the joint history to `tid`'s self history and records
// its end time as the current max(dom hist).
AuxState finalize(ThreadId tid, Ptr p, const AuxState& aux);

AuxState set_scanner(bool b, const AuxState& aux);
AuxState clear(Ptr p, const AuxState& aux);

struct InspectDecision {
  bool yes = false;
  Ptr ptr = Ptr::X;
  Timestamp s{};

  static InspectDecision no() noexcept { return {}; }
  static InspectDecision yes_at(Ptr p, Timestamp s) noexcept {
    return {true, p, s};
  }

  bool operator==(const InspectDecision&) const = default;
};

InspectDecision inspect(Timestamp t_x, Timestamp t_y, const AuxState& aux);

// Moves i to immediately after j. Requires i strictly before j.
std::vector<Timestamp> push(Timestamp i, Timestamp j,
                            std::span<const Timestamp> sigma);

struct RelinkResult {
  AuxState aux;
  Timestamp t_x;
  Timestamp t_y;
  InspectDecision decision;
};

// Resolves the events that wrote r_x and r_y among the last-green and yellow
// candidates of each pointer (last green first), then relinks at them.
RelinkResult relink(Value r_x, Value r_y, const AuxState& aux);
RelinkResult relink_at(Timestamp t_x, Timestamp t_y, const AuxState& aux);

}  // namespace jsnap
