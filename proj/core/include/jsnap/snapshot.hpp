#pragma once

// The instrumented algorithm: physical memory, locks, and the step lists of
// write and scan. Each step commits its physical action and its auxiliary
// transition together.

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jsnap/aux_model.hpp"
#include "jsnap/spec_snapshot.hpp"

namespace jsnap {

struct PhysState {
  Value x = 0;
  Value y = 0;
  std::optional<Value> fx;
  std::optional<Value> fy;
  bool s_bit = false;
  std::optional<ThreadId> lock_wx;
  std::optional<ThreadId> lock_wy;
  std::optional<ThreadId> lock_scan;

  Value& cell(Ptr p) noexcept { return p == Ptr::X ? x : y; }
  Value cell(Ptr p) const noexcept { return p == Ptr::X ? x : y; }
  std::optional<Value>& fwd(Ptr p) noexcept { return p == Ptr::X ? fx : fy; }
  const std::optional<Value>& fwd(Ptr p) const noexcept {
    return p == Ptr::X ? fx : fy;
  }
  std::optional<ThreadId>& writer_lock(Ptr p) noexcept {
    return p == Ptr::X ? lock_wx : lock_wy;
  }
  const std::optional<ThreadId>& writer_lock(Ptr p) const noexcept {
    return p == Ptr::X ? lock_wx : lock_wy;
  }

  bool operator==(const PhysState&) const = default;
};

enum class StepKind : std::uint8_t {
  // write
  AcquireWriter,
  Register,
  Check,
  Forward,
  Finalize,
  ReleaseWriter,
  // scan
  AcquireScanner,
  SetOn,
  Clear,
  Read,
  SetOff,
  ReadFwd,
  Select,
  Relink,
  ReleaseScanner,
};

struct Step {
  StepKind kind = StepKind::Register;
  Ptr ptr = Ptr::X;
  Value value = 0;

  bool operator==(const Step&) const = default;
};

// Lock steps and the local selection step are executed together with the
// neighbouring body step and never form a scheduling choice of their own.
bool is_scheduling_point(StepKind k) noexcept;

struct MethodCall {
  enum class Kind : std::uint8_t { Write, Scan };

  Kind kind = Kind::Scan;
  Ptr ptr = Ptr::X;
  Value value = 0;

  static MethodCall write(Ptr p, Value v) noexcept { return {Kind::Write, p, v}; }
  static MethodCall scan() noexcept { return {}; }
  bool is_write() const noexcept { return kind == Kind::Write; }

  bool operator==(const MethodCall&) const = default;
};

std::string to_string(const MethodCall& call);

struct Registers {
  bool b = false;
  std::optional<Value> vx, vy, ox, oy;
  Value rx = 0, ry = 0;

  bool operator==(const Registers&) const = default;
};

struct MethodFrame {
  ThreadId tid = 0;
  MethodCall call;
  std::size_t pc = 0;  // index into the method's step list
  Registers regs;
  std::optional<Timestamp> t;  // write: the registered event
  std::optional<Timestamp> t_x, t_y;  // scan: relinked events
  std::shared_ptr<const SpecSnapshot> spec;  // immutable once captured

  std::size_t num_steps() const noexcept;
  Step step_at(std::size_t i) const;
  bool done() const noexcept { return pc >= num_steps(); }
  Step current() const { return step_at(pc); }
  ValuePair result() const noexcept { return {regs.rx, regs.ry}; }

  bool operator==(const MethodFrame& o) const;
};

struct Machine {
  PhysState phys;
  AuxState aux;
};

// Throws kValueOutOfDomain.
Machine init(Value vx, Value vy, ValueDomain domain = kDefaultDomain);

std::vector<Step> write_steps(ThreadId tid, Ptr p, Value v);
std::vector<Step> scan_steps(ThreadId tid);

// Fresh frame at pc 0 with the pre-state snapshot taken from `aux`.
MethodFrame start_method(ThreadId tid, const MethodCall& call,
                         const AuxState& aux);

// False only for an acquire whose lock is held by another thread.
bool step_enabled(const Step& step, const PhysState& phys, ThreadId tid);

struct StepOutcome {
  PhysState phys;
  AuxState aux;
  MethodFrame frame;
  std::string label;
};

// Executes `step`, which must be the frame's current step. Throws
// kDisabledStep if the lock is unavailable or the step is not the current
// one; auxiliary guard failures propagate as kGuardViolation. The label is
// left empty when `label` is false.
StepOutcome apply_step(const Step& step, const PhysState& phys,
                       const AuxState& aux, const MethodFrame& frame,
                       bool label = true);

// As apply_step, updating the states in place. On a throw the states are
// unchanged.
void apply_step_in_place(const Step& step, PhysState& phys, AuxState& aux,
                         MethodFrame& frame);

// Trace label of `step` given the frame right after it executed.
std::string step_label(const Step& step, const MethodFrame& after);

}  // namespace jsnap
