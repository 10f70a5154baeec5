#pragma once

// Client programs and schedulers: exhaustive exploration with per-step
// checking, deterministic replay of a schedule, and seeded random runs.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "jsnap/invariants.hpp"
#include "jsnap/oracle.hpp"
#include "jsnap/snapshot.hpp"
#include "jsnap/trace.hpp"

namespace jsnap {

Program client_e();
Program client_e_prime();
Program client_fig1();

// The 20-choice interleaving of the three-thread demo: c x5, l x4, r, l x4,
// c, r x2, c x3.
Schedule fig1_schedule(const Program& fig1);

// Every program built from at most two writes to x (values 2, 3), at most two
// writes to y (values 1, 4) and one scan, over every way of arranging the
// calls into threads. Initial state (5, 0).
std::vector<Program> generated_programs();

// Counters of checks performed; summed over every explored transition.
struct CheckStats {
  std::uint64_t transitions = 0;
  std::uint64_t write_returns = 0;
  std::uint64_t scan_returns = 0;
  std::uint64_t relinks = 0;
  std::uint64_t reads = 0;
  std::uint64_t completed = 0;          // executions checked by the oracle
  std::uint64_t linearizable_runs = 0;  // of those, checked by linearizable()

  CheckStats& operator+=(const CheckStats& o);
  bool operator==(const CheckStats&) const = default;
};

// A completed execution seen during exploration, for replay cross-checks.
struct ScheduleSample {
  Schedule schedule;
  std::uint64_t phys_digest = 0;
  std::uint64_t aux_digest = 0;
  std::vector<MethodRecord> methods;
};

struct ExplorationReport {
  std::uint64_t schedules = 0;  // maximal interleavings
  std::uint64_t states = 0;     // distinct states visited
  std::set<ValuePair> results;  // scan results observed
  ViolationReport violations;
  std::uint64_t violation_count = 0;  // may exceed violations.size()
  std::map<std::string, std::uint64_t> counts_by_name;
  CheckStats stats;
  std::vector<ScheduleSample> samples;

  bool ok() const noexcept { return violation_count == 0; }
};

// Memoized check_all + check_transition verdicts keyed by the transition's
// canonical pre/post states. The checks are pure, so sharing is exact.
class CheckCache;

// Steps a program one scheduling choice at a time. A choice runs the thread's
// next angle-bracket step together with any adjacent lock or local step.
class Execution {
 public:
  // With `checks`, the initial state is checked at once. Without `record`,
  // no step records or labels are kept.
  explicit Execution(const Program& prog, bool checks = true, bool record = true);

  // Not owned; must outlive the execution and its copies.
  void use_cache(CheckCache* cache) noexcept { cache_ = cache; }

  const Program& program() const noexcept { return *prog_; }
  const PhysState& phys() const noexcept { return phys_; }
  const AuxState& aux() const noexcept { return aux_; }
  const Schedule& schedule() const noexcept { return schedule_; }
  const std::vector<StepRecord>& steps() const noexcept { return steps_; }
  std::size_t step_count() const noexcept { return step_count_; }
  const std::vector<MethodRecord>& methods() const noexcept { return methods_; }
  const ViolationReport& violations() const noexcept { return violations_; }
  const CheckStats& stats() const noexcept { return stats_; }

  bool finished() const noexcept;
  bool enabled(ThreadId tid) const;
  std::vector<ThreadId> enabled_threads() const;

  // Throws kDisabledStep if tid cannot move.
  void advance(ThreadId tid);

  // Runs end-of-execution checks (client-level ordering, oracle). Requires
  // finished(); idempotent.
  void complete();

  // Everything the future behaviour and future verdicts depend on; executions
  // with equal keys have identical continuations.
  std::string state_key() const;
  void append_state_key(std::string& out) const;

  Trace trace() const;

 private:
  struct Cursor {
    std::size_t next_call = 0;
    std::optional<MethodFrame> frame;
    std::size_t invocation = 0;
    std::size_t op = 0;
  };

  void apply(MethodFrame& frame, std::vector<std::string>& labels);
  void finish_method(ThreadId tid);
  void record(ViolationReport rep);
  void client_checks();
  void oracle_checks();

  const Program* prog_;
  bool checks_;
  bool record_;
  CheckCache* cache_ = nullptr;
  std::size_t step_count_ = 0;
  PhysState phys_;
  AuxState aux_;
  std::vector<Cursor> cursors_;
  std::vector<std::size_t> op_base_;
  std::vector<std::uint32_t> preceded_by_;  // per op: ops completed at invocation
  std::uint32_t completed_ = 0;
  Schedule schedule_;
  std::vector<StepRecord> steps_;
  std::vector<MethodRecord> methods_;
  ViolationReport violations_;
  CheckStats stats_;
  bool completed_checks_ = false;
};

struct ExploreOptions {
  std::uint64_t max_states = 1'000'000;
  std::size_t max_samples = 8;
  std::size_t max_reported_violations = 64;
};

// Depth-first over all interleavings. Executions reaching the same state_key
// share their continuation, so every transition is checked once while
// `schedules` still counts all maximal interleavings.
// Throws kBudgetExceeded past options.max_states distinct states.
ExplorationReport explore(const Program& prog, const ExploreOptions& options = {});

// Throws kInvalidSchedule on an unknown/disabled thread or a schedule that
// ends before the program completes.
Trace run_schedule(const Program& prog, const Schedule& sched);

ExplorationReport run_random(const Program& prog, std::uint64_t seed,
                             std::size_t runs);

}  // namespace jsnap
