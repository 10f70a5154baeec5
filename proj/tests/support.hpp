#pragma once

// Shared fixtures and brute-force reference implementations for the tests.
// The references work from the definitions directly and share no code with
// the library beyond its data types.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "jsnap/aux_model.hpp"
#include "jsnap/harness.hpp"

namespace jsnap::testing {

inline Timestamp ts(std::uint32_t v) { return Timestamp{v}; }

// Execution of the three-thread client after the first `choices` entries of
// the demo schedule.
inline Execution fig1_prefix(std::size_t choices) {
  static const Program prog = client_fig1();
  const Schedule sched = fig1_schedule(prog);
  Execution ex(prog, false, true);
  for (std::size_t i = 0; i < choices && i < sched.size(); ++i) ex.advance(sched[i]);
  return ex;
}

// The state right before the scan relinks: sigma values 5 0 2 3 1 with the
// write of 3 still yellow.
inline AuxState fig2a_state() { return fig1_prefix(19).aux(); }

// Timestamp of the (unique) write of value v to p.
inline Timestamp ts_of(const AuxState& aux, Ptr p, Value v) {
  for (const auto& [t, e] : aux.hist) {
    if (e.rec.ptr == p && e.rec.val == v) return t;
  }
  return Timestamp{};
}

inline std::vector<Value> sigma_values(const AuxState& aux) {
  std::vector<Value> out;
  for (const Timestamp t : aux.sigma) out.push_back(aux.hist.find(t)->rec.val);
  return out;
}

inline std::size_t pos(const std::vector<Timestamp>& seq, Timestamp t) {
  return static_cast<std::size_t>(std::find(seq.begin(), seq.end(), t) - seq.begin());
}

// Omega straight from its three clauses.
inline bool ref_leq(Timestamp a, Timestamp b, const AuxState& aux) {
  if (a == b) return true;
  if (const Timestamp* end = aux.tau.find(a); end && end->value < b.value) return true;
  return pos(aux.sigma, a) < pos(aux.sigma, b) && *aux.kappa.find(a) == Color::Green;
}

inline std::set<Timestamp> ref_down(Timestamp t, const AuxState& aux) {
  std::set<Timestamp> out;
  for (const auto& [s, e] : aux.hist) {
    (void)e;
    if (ref_leq(s, t, aux)) out.insert(s);
  }
  return out;
}

inline std::set<Timestamp> ref_scanned(const AuxState& aux) {
  std::set<Timestamp> out;
  for (const Timestamp t : aux.sigma) {
    const std::set<Timestamp> down = ref_down(t, aux);
    std::set<Timestamp> prefix(aux.sigma.begin(), aux.sigma.begin() + pos(aux.sigma, t) + 1);
    bool green = true;
    for (const Timestamp s : down) green = green && *aux.kappa.find(s) == Color::Green;
    if (green && down == prefix) out.insert(t);
  }
  return out;
}

// Sorts the entries by their position in `order` and folds them left to right.
inline std::optional<ValuePair> ref_eval(Timestamp t, const std::vector<Timestamp>& order,
                                         const History& hist) {
  std::map<std::size_t, WriteRecord> ranked;
  for (const auto& [s, e] : hist) ranked.emplace(pos(order, s), e.rec);
  const std::size_t limit = pos(order, t);
  std::optional<Value> x, y;
  for (const auto& [rank, rec] : ranked) {
    if (rank > limit) break;
    (rec.ptr == Ptr::X ? x : y) = rec.val;
  }
  if (!x || !y) return std::nullopt;
  return ValuePair{*x, *y};
}

}  // namespace jsnap::testing

#include <random>

namespace jsnap::testing {

// States visited by seeded random walks over the generated programs.
struct Visited {
  PhysState phys;
  AuxState aux;
};

inline std::vector<Visited> random_states(std::uint64_t seed, std::size_t walks) {
  static const std::vector<Program> programs = generated_programs();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> which(0, programs.size() - 1);
  std::vector<Visited> out;
  for (std::size_t w = 0; w < walks; ++w) {
    Execution ex(programs[which(rng)], false, false);
    out.push_back({ex.phys(), ex.aux()});
    while (!ex.finished()) {
      const std::vector<ThreadId> next = ex.enabled_threads();
      std::uniform_int_distribution<std::size_t> pick(0, next.size() - 1);
      ex.advance(next[pick(rng)]);
      out.push_back({ex.phys(), ex.aux()});
    }
  }
  return out;
}

}  // namespace jsnap::testing
