#include "jsnap/aux_ops.hpp"

#include <algorithm>
#include <string>

namespace jsnap {

namespace {

[[noreturn]] void guard(const std::string& what) {
  throw Error(ErrorCode::kGuardViolation, what);
}

[[noreturn]] void precondition(const std::string& what) {
  throw Error(ErrorCode::kPrecondition, what);
}

std::string ptr_name(Ptr p) { return to_string(p); }

}  // namespace

Registered register_write(Ptr p, Value v, const AuxState& aux) {
  if (aux.writer(p).active()) guard("register(" + ptr_name(p) + "): writer not off");
  Registered out{aux, Timestamp{aux.max_ts().value + 1}};
  AuxState& next = out.aux;
  next.hist.insert(out.t, {{p, v}, Owner::joint()});
  next.sigma.push_back(out.t);
  next.writer(p) = {WriterState::Phase::New, out.t, v};
  const bool active = aux.scanner.on() && aux.scanner.bit(p);
  next.kappa.insert(out.t, active ? Color::Yellow : Color::Red);
  return out;
}

AuxState check(Ptr p, bool b, const AuxState& aux) {
  const WriterState& w = aux.writer(p);
  if (w.phase != WriterState::Phase::New) guard("check(" + ptr_name(p) + "): writer not New");
  AuxState next = aux;
  next.writer(p).phase = b ? WriterState::Phase::Fwd : WriterState::Phase::Done;
  return next;
}

AuxState forward(Ptr p, const AuxState& aux) {
  const WriterState& w = aux.writer(p);
  if (w.phase != WriterState::Phase::Fwd) guard("forward(" + ptr_name(p) + "): writer not Fwd");
  AuxState next = aux;
  next.writer(p).phase = WriterState::Phase::Done;
  if (aux.scanner.on() && aux.scanner.bit(p)) {
    next.kappa.insert_or_assign(w.t, Color::Green);
  }
  return next;
}

AuxState finalize(ThreadId tid, Ptr p, const AuxState& aux) {
  const WriterState& w = aux.writer(p);
  if (w.phase != WriterState::Phase::Done) guard("finalize(" + ptr_name(p) + "): writer not Done");
  const HistEntry* e = aux.hist.find(w.t);
  if (!e || !e->owner.is_joint() || e->rec != WriteRecord{p, w.v}) {
    guard("finalize(" + ptr_name(p) + "): event not in joint history");
  }
  AuxState next = aux;
  next.hist.find(w.t)->owner = Owner::thread(tid);
  next.tau.insert_or_assign(w.t, aux.max_ts());
  next.writer(p) = WriterState::off();
  return next;
}

AuxState set_scanner(bool b, const AuxState& aux) {
  const ScannerState& s = aux.scanner;
  if (b) {
    if (!s.off() || s.s_x || s.s_y) guard("set(true): scanner not idle");
  } else {
    if (!s.on() || !s.s_x || !s.s_y) guard("set(false): scanner not active");
  }
  AuxState next = aux;
  if (b) {
    next.scanner.phase = ScannerState::Phase::On;
  } else {
    next.scanner.phase = ScannerState::Phase::Off;
    next.scanner.t_off = aux.max_ts();
  }
  next.scanner.s_x = !b;
  next.scanner.s_y = !b;
  return next;
}

AuxState clear(Ptr p, const AuxState& aux) {
  if (!aux.scanner.on() || aux.scanner.bit(p)) {
    guard("clear(" + ptr_name(p) + "): scanner off or already cleared");
  }
  AuxState next = aux;
  next.scanner.bit(p) = true;
  for (const auto& [t, e] : aux.hist) {
    if (e.rec.ptr == p) next.kappa.insert_or_assign(t, Color::Green);
  }
  return next;
}

InspectDecision inspect(Timestamp t_x, Timestamp t_y, const AuxState& aux) {
  const ScannerState& s = aux.scanner;
  if (!s.off() || !s.s_x || !s.s_y) precondition("inspect: scanner not in its relink phase");
  if (!last_gy(Ptr::X, t_x, aux) || !last_gy(Ptr::Y, t_y, aux)) {
    precondition("inspect: argument is not the last green or yellow of its pointer");
  }
  const OmegaView view(aux);
  auto offending = [&](Ptr p, Timestamp mine, Timestamp theirs) -> std::optional<Timestamp> {
    if (!view.sigma_before(mine, theirs)) return std::nullopt;
    if (last_green(p, aux) != mine) return std::nullopt;
    const auto z = yellow_of(p, aux);
    if (!z || !view.sigma_before(*z, theirs)) return std::nullopt;
    return z;
  };
  const auto sx = offending(Ptr::X, t_x, t_y);
  const auto sy = offending(Ptr::Y, t_y, t_x);
  if (sx && sy) precondition("inspect: both pointers report an offending event");
  if (sx) return InspectDecision::yes_at(Ptr::X, *sx);
  if (sy) return InspectDecision::yes_at(Ptr::Y, *sy);
  return InspectDecision::no();
}

std::vector<Timestamp> push(Timestamp i, Timestamp j,
                            std::span<const Timestamp> sigma) {
  const auto ii = std::find(sigma.begin(), sigma.end(), i);
  const auto jj = std::find(sigma.begin(), sigma.end(), j);
  if (ii == sigma.end() || jj == sigma.end()) {
    throw Error(ErrorCode::kUnknownTimestamp, "push: argument not in sequence");
  }
  if (!(ii < jj)) precondition("push: i must occur strictly before j");
  std::vector<Timestamp> out;
  out.reserve(sigma.size());
  out.insert(out.end(), sigma.begin(), ii);
  out.insert(out.end(), ii + 1, jj + 1);
  out.push_back(i);
  out.insert(out.end(), jj + 1, sigma.end());
  return out;
}

namespace {

Timestamp resolve(Ptr p, Value r, const AuxState& aux) {
  for (const auto& candidate : {last_green(p, aux), yellow_of(p, aux)}) {
    if (candidate && aux.entry(*candidate).rec.val == r) return *candidate;
  }
  precondition("relink: no last-green or yellow write of " + std::to_string(r) +
               " to " + ptr_name(p));
}

}  // namespace

RelinkResult relink(Value r_x, Value r_y, const AuxState& aux) {
  const ScannerState& s = aux.scanner;
  if (!s.off() || !s.s_x || !s.s_y) precondition("relink: scanner not in its relink phase");
  return relink_at(resolve(Ptr::X, r_x, aux), resolve(Ptr::Y, r_y, aux), aux);
}

RelinkResult relink_at(Timestamp t_x, Timestamp t_y, const AuxState& aux) {
  const InspectDecision d = inspect(t_x, t_y, aux);
  RelinkResult out{aux, t_x, t_y, d};
  AuxState& next = out.aux;
  if (d.yes) {
    next.sigma = push(d.s, d.ptr == Ptr::X ? t_y : t_x, aux.sigma);
  }
  next.kappa.insert_or_assign(t_x, Color::Green);
  next.kappa.insert_or_assign(t_y, Color::Green);
  next.scanner.s_x = false;
  next.scanner.s_y = false;
  return out;
}

}  // namespace jsnap
