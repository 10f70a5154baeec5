#pragma once

// Executable state invariants, transition invariants, lemma-level properties
// and method postconditions. Violations are reported, never thrown.

#include <optional>
#include <string>
#include <vector>

#include "jsnap/aux_model.hpp"
#include "jsnap/snapshot.hpp"
#include "jsnap/spec_snapshot.hpp"

namespace jsnap {

struct Violation {
  std::string name;
  std::size_t step = 0;
  std::vector<Timestamp> at;
  std::string detail;

  bool operator==(const Violation&) const = default;
};

class ViolationReport {
 public:
  void add(std::string name, std::string detail, std::vector<Timestamp> at = {});
  void append(const ViolationReport& other);
  // Stamps every entry that has no step yet.
  void set_step(std::size_t step);

  bool empty() const noexcept { return items_.empty(); }
  std::size_t size() const noexcept { return items_.size(); }
  const std::vector<Violation>& items() const noexcept { return items_; }
  std::vector<Violation>& items() noexcept { return items_; }
  bool contains(const std::string& name) const;

  // One line per violation: "INV <name> @step=<k>: <detail>".
  std::string render() const;

  bool operator==(const ViolationReport&) const = default;

 private:
  std::vector<Violation> items_;
};

ViolationReport check_state(const PhysState& phys, const AuxState& aux);
ViolationReport check_transition(const AuxState& pre, const AuxState& post);

// Omega is a partial order; scanned is an Omega-chain closed downwards.
ViolationReport check_omega(const AuxState& aux);
// Every t with an all-green sigma-prefix has that prefix as its Omega-ideal.
ViolationReport check_chain_lemma(const AuxState& aux);

// check_state + check_omega + check_chain_lemma.
ViolationReport check_all(const PhysState& phys, const AuxState& aux);

// A scan's read of p, executed while the scanner is on and p's forwarding
// cell has been cleared, returns the value of the last-green or yellow write.
ViolationReport check_read(const AuxState& aux, Ptr p, Value read);

ViolationReport check_write_post(const SpecSnapshot& snap, const AuxState& ret,
                                 Timestamp t, ThreadId tid, Ptr p, Value v);

struct ScanPost {
  ViolationReport report;
  std::optional<Timestamp> witness;
};

// Witness search is exhaustive over dom(hist). When `constructive` is given it
// must qualify as well and is preferred as the reported witness.
ScanPost check_scan_post(const SpecSnapshot& snap, const AuxState& ret,
                         ValuePair r,
                         std::optional<Timestamp> constructive = std::nullopt);

// True iff t is a valid scan witness for r relative to snap.
bool scan_witness_ok(const SpecSnapshot& snap, const AuxState& ret,
                     ValuePair r, Timestamp t);

// After relink: t_p is the last green write of p, and the sigma-prefix up to
// max(t_x, t_y) is all green.
ViolationReport check_relink_property(const AuxState& ret, Timestamp t_x,
                                      Timestamp t_y);

}  // namespace jsnap
