#include "jsnap/spec_snapshot.hpp"

namespace jsnap {

namespace {

template <class Pred>
TimestampSet select(const AuxState& aux, Pred pred) {
  TimestampSet out;
  out.reserve(aux.hist.size());
  for (const auto& [t, e] : aux.hist) {
    if (pred(e.owner)) out.push_back(t);
  }
  return out;
}

}  // namespace

TimestampSet dom_self(const AuxState& aux, ThreadId tid) {
  return select(aux, [tid](const Owner& o) { return o.is_self_of(tid); });
}

TimestampSet dom_other(const AuxState& aux, ThreadId tid) {
  return select(aux, [tid](const Owner& o) { return o.is_other_of(tid); });
}

TimestampSet dom_joint(const AuxState& aux) {
  return select(aux, [](const Owner& o) { return o.is_joint(); });
}

TimestampSet dom_hist(const AuxState& aux) {
  return select(aux, [](const Owner&) { return true; });
}

SpecSnapshot SpecSnapshot::capture(const AuxState& aux, ThreadId tid) {
  SpecSnapshot s;
  s.tid = tid;
  s.dom_self = jsnap::dom_self(aux, tid);
  s.dom_other = jsnap::dom_other(aux, tid);
  const OmegaView view(aux);
  s.scanned = view.scanned();
  s.dom_global = dom_hist(aux);
  s.omega = view.relation();
  return s;
}

}  // namespace jsnap
