#include "jsnap/snapshot.hpp"

#include <array>

#include "jsnap/aux_ops.hpp"

namespace jsnap {

namespace {

std::string show(const std::optional<Value>& v) {
  return v ? std::to_string(*v) : std::string("bot");
}

std::string show(bool b) { return b ? "true" : "false"; }

[[noreturn]] void disabled(const std::string& why) {
  throw Error(ErrorCode::kDisabledStep, why);
}

}  // namespace

bool is_scheduling_point(StepKind k) noexcept {
  switch (k) {
    case StepKind::AcquireWriter:
    case StepKind::ReleaseWriter:
    case StepKind::AcquireScanner:
    case StepKind::ReleaseScanner:
    case StepKind::Select:
      return false;
    default:
      return true;
  }
}

std::string to_string(const MethodCall& call) {
  if (!call.is_write()) return "scan";
  return std::string("write ") + to_string(call.ptr) + " " +
         std::to_string(call.value);
}

Machine init(Value vx, Value vy, ValueDomain domain) {
  if (!domain.contains(vx) || !domain.contains(vy)) {
    throw Error(ErrorCode::kValueOutOfDomain,
                "initial value outside [" + std::to_string(domain.lo) + "," +
                    std::to_string(domain.hi) + "]");
  }
  Machine m;
  m.phys.x = vx;
  m.phys.y = vy;
  m.aux = AuxState::initial(vx, vy);
  return m;
}

namespace {

constexpr std::array<StepKind, 6> kWriteKinds{
    StepKind::AcquireWriter, StepKind::Register, StepKind::Check,
    StepKind::Forward,       StepKind::Finalize, StepKind::ReleaseWriter};

constexpr std::array<Step, 12> kScanSteps{{{StepKind::AcquireScanner},
                                           {StepKind::SetOn},
                                           {StepKind::Clear, Ptr::X},
                                           {StepKind::Clear, Ptr::Y},
                                           {StepKind::Read, Ptr::X},
                                           {StepKind::Read, Ptr::Y},
                                           {StepKind::SetOff},
                                           {StepKind::ReadFwd, Ptr::X},
                                           {StepKind::ReadFwd, Ptr::Y},
                                           {StepKind::Select},
                                           {StepKind::Relink},
                                           {StepKind::ReleaseScanner}}};

}  // namespace

std::vector<Step> write_steps(ThreadId, Ptr p, Value v) {
  std::vector<Step> out;
  for (const StepKind k : kWriteKinds) out.push_back({k, p, v});
  return out;
}

std::vector<Step> scan_steps(ThreadId) {
  return {kScanSteps.begin(), kScanSteps.end()};
}

std::size_t MethodFrame::num_steps() const noexcept {
  return call.is_write() ? kWriteKinds.size() : kScanSteps.size();
}

Step MethodFrame::step_at(std::size_t i) const {
  if (i >= num_steps()) throw Error(ErrorCode::kDisabledStep, "method already returned");
  if (call.is_write()) return {kWriteKinds[i], call.ptr, call.value};
  return kScanSteps[i];
}

bool MethodFrame::operator==(const MethodFrame& o) const {
  const bool same_spec = spec == o.spec || (spec && o.spec && *spec == *o.spec);
  return tid == o.tid && call == o.call && pc == o.pc && regs == o.regs && t == o.t &&
         t_x == o.t_x && t_y == o.t_y && same_spec;
}

MethodFrame start_method(ThreadId tid, const MethodCall& call,
                         const AuxState& aux) {
  MethodFrame f;
  f.tid = tid;
  f.call = call;
  f.spec = std::make_shared<const SpecSnapshot>(SpecSnapshot::capture(aux, tid));
  return f;
}

bool step_enabled(const Step& step, const PhysState& phys, ThreadId tid) {
  switch (step.kind) {
    case StepKind::AcquireWriter: {
      const auto& lock = phys.writer_lock(step.ptr);
      return !lock || *lock == tid;
    }
    case StepKind::AcquireScanner:
      return !phys.lock_scan || *phys.lock_scan == tid;
    default:
      return true;
  }
}

std::string step_label(const Step& step, const MethodFrame& f) {
  const Registers& r = f.regs;
  const std::string pn = to_string(step.ptr);
  const std::string v = std::to_string(step.value);
  switch (step.kind) {
    case StepKind::AcquireWriter: return "acquire(lock_" + pn + ")";
    case StepKind::Register: return pn + ":=" + v + ";register(" + pn + "," + v + ")";
    case StepKind::Check: return "b:=read(S)=" + show(r.b) + ";check(" + pn + "," + show(r.b) + ")";
    case StepKind::Forward: return "f" + pn + ":=" + v + ";forward(" + pn + ")";
    case StepKind::Finalize: return "finalize(" + pn + ")";
    case StepKind::ReleaseWriter: return "release(lock_" + pn + ")";
    case StepKind::AcquireScanner: return "acquire(lock_scan)";
    case StepKind::SetOn: return "S:=true;set(true)";
    case StepKind::Clear: return "f" + pn + ":=bot;clear(" + pn + ")";
    case StepKind::Read:
      return "v" + pn + ":=read(" + pn + ")=" + show(step.ptr == Ptr::X ? r.vx : r.vy);
    case StepKind::SetOff: return "S:=false;set(false)";
    case StepKind::ReadFwd:
      return "o" + pn + ":=read(f" + pn + ")=" + show(step.ptr == Ptr::X ? r.ox : r.oy);
    case StepKind::Select:
      return "select(" + std::to_string(r.rx) + "," + std::to_string(r.ry) + ")";
    case StepKind::Relink: {
      const std::string pair = "(" + std::to_string(r.rx) + "," + std::to_string(r.ry) + ")";
      return "relink" + pair + ";return" + pair;
    }
    case StepKind::ReleaseScanner: return "release(lock_scan)";
  }
  return "?";
}

void apply_step_in_place(const Step& step, PhysState& ph, AuxState& aux,
                         MethodFrame& f) {
  if (f.done()) disabled("method already returned");
  if (!(f.current() == step)) disabled("step is not the frame's next step");

  Registers& r = f.regs;
  const Ptr p = step.ptr;

  // Auxiliary updates run before physical ones so a guard failure leaves
  // both states untouched.
  switch (step.kind) {
    case StepKind::AcquireWriter: {
      auto& lock = ph.writer_lock(p);
      if (lock) {
        disabled("lock_" + std::string(to_string(p)) + " held by thread " +
                 std::to_string(*lock));
      }
      lock = f.tid;
      break;
    }
    case StepKind::Register: {
      Registered reg = register_write(p, step.value, aux);
      aux = std::move(reg.aux);
      ph.cell(p) = step.value;
      f.t = reg.t;
      break;
    }
    case StepKind::Check:
      aux = check(p, ph.s_bit, aux);
      r.b = ph.s_bit;
      break;
    case StepKind::Forward:
      aux = forward(p, aux);
      ph.fwd(p) = step.value;
      break;
    case StepKind::Finalize:
      aux = finalize(f.tid, p, aux);
      break;
    case StepKind::ReleaseWriter: {
      auto& lock = ph.writer_lock(p);
      if (lock != f.tid) {
        throw Error(ErrorCode::kGuardViolation,
                    "release of lock_" + std::string(to_string(p)) + " not held");
      }
      lock.reset();
      break;
    }
    case StepKind::AcquireScanner:
      if (ph.lock_scan) {
        disabled("lock_scan held by thread " + std::to_string(*ph.lock_scan));
      }
      ph.lock_scan = f.tid;
      break;
    case StepKind::SetOn:
      aux = set_scanner(true, aux);
      ph.s_bit = true;
      break;
    case StepKind::Clear:
      aux = clear(p, aux);
      ph.fwd(p).reset();
      break;
    case StepKind::Read:
      (p == Ptr::X ? r.vx : r.vy) = ph.cell(p);
      break;
    case StepKind::SetOff:
      aux = set_scanner(false, aux);
      ph.s_bit = false;
      break;
    case StepKind::ReadFwd:
      (p == Ptr::X ? r.ox : r.oy) = ph.fwd(p);
      break;
    case StepKind::Select:
      if (!r.vx || !r.vy) disabled("select before both reads");
      r.rx = r.ox ? *r.ox : *r.vx;
      r.ry = r.oy ? *r.oy : *r.vy;
      break;
    case StepKind::Relink: {
      RelinkResult rr = relink(r.rx, r.ry, aux);
      aux = std::move(rr.aux);
      f.t_x = rr.t_x;
      f.t_y = rr.t_y;
      break;
    }
    case StepKind::ReleaseScanner:
      if (ph.lock_scan != f.tid) {
        throw Error(ErrorCode::kGuardViolation, "release of lock_scan not held");
      }
      ph.lock_scan.reset();
      break;
  }

  ++f.pc;
  if (!f.done() && f.current().kind == StepKind::Forward && !r.b) ++f.pc;
}

StepOutcome apply_step(const Step& step, const PhysState& phys,
                       const AuxState& aux, const MethodFrame& frame, bool label) {
  StepOutcome out{phys, aux, frame, {}};
  apply_step_in_place(step, out.phys, out.aux, out.frame);
  if (label) out.label = step_label(step, out.frame);
  return out;
}

}  // namespace jsnap
