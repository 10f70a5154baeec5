#include "jsnap/harness.hpp"

#include <algorithm>
#include <cstring>
#include <functional>
#include <random>
#include <unordered_map>

#include "jsnap/digest.hpp"

namespace jsnap {

namespace {

MethodCall wr(Ptr p, Value v) { return MethodCall::write(p, v); }

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

void put(std::string& out, std::uint32_t v) {
  out.append(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_opt(std::string& out, const std::optional<Timestamp>& t) {
  put(out, t ? t->value + 1 : 0);
}

// Timestamps stay below 64 (OmegaView enforces this), so a set fits a mask.
void put_set(std::string& out, const TimestampSet& s) {
  std::uint64_t m = 0;
  for (const Timestamp t : s) m |= std::uint64_t{1} << (t.value & 63);
  out.append(reinterpret_cast<const char*>(&m), sizeof m);
}

CheckStats diff(const CheckStats& a, const CheckStats& b) {
  CheckStats d;
  d.transitions = a.transitions - b.transitions;
  d.write_returns = a.write_returns - b.write_returns;
  d.scan_returns = a.scan_returns - b.scan_returns;
  d.relinks = a.relinks - b.relinks;
  d.reads = a.reads - b.reads;
  d.completed = a.completed - b.completed;
  d.linearizable_runs = a.linearizable_runs - b.linearizable_runs;
  return d;
}

struct Key {
  std::uint64_t a, b;
  bool operator==(const Key&) const = default;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const noexcept { return k.a ^ (k.b * 0x9e3779b97f4a7c15ULL); }
};

// Two independently mixed 64-bit lanes over 8-byte words.
Key key_of(const std::string& s) {
  std::uint64_t a = 0x9e3779b97f4a7c15ULL ^ s.size();
  std::uint64_t b = 0xc2b2ae3d27d4eb4fULL + s.size();
  const char* p = s.data();
  std::size_t n = s.size();
  auto mix = [&](std::uint64_t w) {
    a = (a ^ w) * 0xff51afd7ed558ccdULL;
    a ^= a >> 32;
    b = (b + w) * 0xc4ceb9fe1a85ec53ULL;
    b ^= b >> 29;
    b += a;
  };
  for (; n >= 8; p += 8, n -= 8) {
    std::uint64_t w;
    std::memcpy(&w, p, 8);
    mix(w);
  }
  std::uint64_t tail = 0;
  std::memcpy(&tail, p, n);
  mix(tail ^ (std::uint64_t{n} << 56));
  a ^= a >> 33;
  a *= 0x62a9d9ed799705f5ULL;
  a ^= a >> 28;
  b ^= b >> 31;
  b *= 0x9e3779b97f4a7c15ULL;
  b ^= b >> 30;
  return {a, b};
}

ViolationReport step_checks(const AuxState& pre, const PhysState& phys, const AuxState& post) {
  ViolationReport rep = check_all(phys, post);
  rep.append(check_transition(pre, post));
  return rep;
}

}  // namespace

class CheckCache {
 public:
  // Identifies the transition thread f.tid takes from (phys, aux): the step
  // semantics read nothing else.
  Key key(const PhysState& phys, const AuxState& aux, const MethodFrame& f) {
    buf_.clear();
    append_canonical(buf_, phys);
    append_canonical(buf_, aux);
    put(buf_, f.tid);
    put(buf_, static_cast<std::uint32_t>(f.call.kind));
    put(buf_, static_cast<std::uint32_t>(f.call.ptr));
    put(buf_, static_cast<std::uint32_t>(f.call.value));
    put(buf_, static_cast<std::uint32_t>(f.pc));
    const Registers& r = f.regs;
    for (const auto& v : {r.vx, r.vy, r.ox, r.oy}) {
      put(buf_, v ? static_cast<std::uint32_t>(*v) + 1 : 0);
    }
    put(buf_, r.b);
    put(buf_, static_cast<std::uint32_t>(r.rx));
    put(buf_, static_cast<std::uint32_t>(r.ry));
    put_opt(buf_, f.t);
    return key_of(buf_);
  }

  const ViolationReport* find(const Key& k) const {
    const auto it = seen_.find(k);
    return it == seen_.end() ? nullptr : &it->second;
  }

  void store(const Key& k, const ViolationReport& rep) { seen_.emplace(k, rep); }

 private:
  std::string buf_;
  std::unordered_map<Key, ViolationReport, KeyHash> seen_;
};

CheckStats& CheckStats::operator+=(const CheckStats& o) {
  transitions += o.transitions;
  write_returns += o.write_returns;
  scan_returns += o.scan_returns;
  relinks += o.relinks;
  reads += o.reads;
  completed += o.completed;
  linearizable_runs += o.linearizable_runs;
  return *this;
}

Program client_fig1() {
  Program p;
  p.threads = {{"l", {wr(Ptr::X, 2), wr(Ptr::Y, 1)}},
               {"c", {MethodCall::scan()}},
               {"r", {wr(Ptr::X, 3)}}};
  return p;
}

Program client_e() { return client_fig1(); }

Program client_e_prime() {
  Program p;
  p.threads = {{"e", {MethodCall::scan(), wr(Ptr::X, 4)}},
               {"env", {wr(Ptr::Y, 1), wr(Ptr::X, 6)}}};
  return p;
}

Schedule fig1_schedule(const Program& fig1) {
  const ThreadId l = fig1.find("l").value();
  const ThreadId c = fig1.find("c").value();
  const ThreadId r = fig1.find("r").value();
  return {c, c, c, c, c, l, l, l, l, r, l, l, l, l, c, r, r, c, c, c};
}

std::vector<Program> generated_programs() {
  const std::vector<std::vector<Value>> xs = {{}, {2}, {3}, {2, 3}};
  const std::vector<std::vector<Value>> ys = {{}, {1}, {4}, {1, 4}};
  std::vector<Program> out;
  for (const auto& x : xs) {
    for (const auto& y : ys) {
      std::vector<MethodCall> calls{MethodCall::scan()};
      for (const Value v : x) calls.push_back(wr(Ptr::X, v));
      for (const Value v : y) calls.push_back(wr(Ptr::Y, v));
      // Each call goes into an existing thread at any position or opens a new
      // thread; this yields every set of nonempty call sequences once.
      std::vector<std::vector<MethodCall>> threads;
      std::function<void(std::size_t)> place = [&](std::size_t i) {
        if (i == calls.size()) {
          Program p;
          for (std::size_t k = 0; k < threads.size(); ++k) {
            p.threads.push_back({"t" + std::to_string(k + 1), threads[k]});
          }
          out.push_back(std::move(p));
          return;
        }
        for (std::size_t k = 0; k < threads.size(); ++k) {
          for (std::size_t pos = 0; pos <= threads[k].size(); ++pos) {
            const auto at = static_cast<std::ptrdiff_t>(pos);
            threads[k].insert(threads[k].begin() + at, calls[i]);
            place(i + 1);
            threads[k].erase(threads[k].begin() + at);
          }
        }
        threads.push_back({calls[i]});
        place(i + 1);
        threads.pop_back();
      };
      place(0);
    }
  }
  return out;
}

Execution::Execution(const Program& prog, bool checks, bool record)
    : prog_(&prog), checks_(checks), record_(record), cursors_(prog.threads.size()) {
  if (prog.threads.size() > 255) throw Error(ErrorCode::kSizeLimit, "too many threads");
  if (prog.num_calls() > 32) throw Error(ErrorCode::kSizeLimit, "more than 32 method calls");
  for (const ThreadProgram& th : prog.threads) {
    for (const MethodCall& c : th.calls) {
      if (c.is_write() && !prog.domain.contains(c.value)) {
        throw Error(ErrorCode::kValueOutOfDomain,
                    "write value " + std::to_string(c.value) + " outside the domain");
      }
    }
  }
  Machine m = init(prog.init_x, prog.init_y, prog.domain);
  phys_ = m.phys;
  aux_ = std::move(m.aux);
  std::size_t base = 0;
  for (const ThreadProgram& th : prog.threads) {
    op_base_.push_back(base);
    base += th.calls.size();
  }
  preceded_by_.assign(base, 0);
  if (checks_) violations_.append(check_all(phys_, aux_));
}

bool Execution::finished() const noexcept {
  for (std::size_t i = 0; i < cursors_.size(); ++i) {
    if (cursors_[i].frame || cursors_[i].next_call < prog_->threads[i].calls.size()) {
      return false;
    }
  }
  return true;
}

bool Execution::enabled(ThreadId tid) const {
  if (tid >= cursors_.size()) return false;
  const Cursor& c = cursors_[tid];
  if (c.frame) return step_enabled(c.frame->current(), phys_, tid);
  const auto& calls = prog_->threads[tid].calls;
  if (c.next_call >= calls.size()) return false;
  const MethodCall& call = calls[c.next_call];
  const auto& lock = call.is_write() ? phys_.writer_lock(call.ptr) : phys_.lock_scan;
  return !lock || *lock == tid;
}

std::vector<ThreadId> Execution::enabled_threads() const {
  std::vector<ThreadId> out;
  for (std::size_t i = 0; i < cursors_.size(); ++i) {
    if (enabled(static_cast<ThreadId>(i))) out.push_back(static_cast<ThreadId>(i));
  }
  return out;
}

void Execution::record(ViolationReport rep) {
  if (rep.empty()) return;
  rep.set_step(step_count_ + 1);
  violations_.append(rep);
}

void Execution::apply(MethodFrame& frame, std::vector<std::string>& labels) {
  const Step step = frame.current();
  apply_step_in_place(step, phys_, aux_, frame);
  if (checks_ && step.kind == StepKind::Read) {
    ++stats_.reads;
    record(check_read(aux_, step.ptr, phys_.cell(step.ptr)));
  }
  if (record_) labels.push_back(step_label(step, frame));
  if (checks_ && step.kind == StepKind::Relink) {
    ++stats_.relinks;
    record(check_relink_property(aux_, *frame.t_x, *frame.t_y));
  }
}

void Execution::advance(ThreadId tid) {
  if (!enabled(tid)) {
    throw Error(ErrorCode::kDisabledStep, "thread " + std::to_string(tid) + " cannot step");
  }
  Cursor& c = cursors_[tid];
  if (!c.frame) {
    c.frame = start_method(tid, prog_->threads[tid].calls[c.next_call], aux_);
    c.invocation = step_count_ + 1;
    c.op = op_base_[tid] + c.next_call;
    preceded_by_[c.op] = completed_;
  }
  MethodFrame& f = *c.frame;
  // With a cache hit the verdict is known and the pre-state need not be kept.
  std::optional<Key> cache_key;
  const ViolationReport* cached = nullptr;
  if (checks_ && cache_) {
    cache_key = cache_->key(phys_, aux_, f);
    cached = cache_->find(*cache_key);
  }
  std::optional<AuxState> pre;
  if (checks_ && !cached) pre = aux_;
  std::vector<std::string> labels;
  while (!is_scheduling_point(f.current().kind)) apply(f, labels);
  apply(f, labels);
  while (!f.done() && !is_scheduling_point(f.current().kind)) apply(f, labels);

  schedule_.push_back(tid);
  if (checks_) {
    ++stats_.transitions;
    if (cached) {
      record(*cached);
    } else {
      ViolationReport rep = step_checks(*pre, phys_, aux_);
      if (cache_key) cache_->store(*cache_key, rep);
      record(std::move(rep));
    }
  }
  ++step_count_;
  if (record_) steps_.push_back({step_count_, tid, join(labels, "+"), digest(phys_), digest(aux_)});
  if (f.done()) finish_method(tid);
}

void Execution::finish_method(ThreadId tid) {
  Cursor& c = cursors_[tid];
  const MethodFrame& f = *c.frame;
  MethodRecord m;
  m.tid = tid;
  m.call_index = c.next_call;
  m.call = f.call;
  m.invocation = c.invocation;
  m.response = step_count_;
  if (f.call.is_write()) {
    m.ts = f.t;
    if (checks_) {
      ++stats_.write_returns;
      ViolationReport rep = check_write_post(*f.spec, aux_, *f.t, tid, f.call.ptr, f.call.value);
      rep.set_step(step_count_);
      violations_.append(rep);
    }
  } else {
    const ValuePair r = f.result();
    m.result = r;
    m.t_x = f.t_x;
    m.t_y = f.t_y;
    const OmegaView view(aux_);
    const Timestamp constructive = view.sigma_before(*f.t_x, *f.t_y) ? *f.t_y : *f.t_x;
    if (checks_) {
      ++stats_.scan_returns;
      ScanPost post = check_scan_post(*f.spec, aux_, r, constructive);
      post.report.set_step(step_count_);
      violations_.append(post.report);
      m.witness = post.witness;
    } else {
      m.witness = constructive;
    }
  }
  methods_.push_back(m);
  completed_ |= 1u << c.op;
  c.frame.reset();
  ++c.next_call;
}

void Execution::client_checks() {
  const OmegaView view(aux_);
  auto find = [&](ThreadId tid, std::size_t k) -> const MethodRecord* {
    for (const MethodRecord& m : methods_) {
      if (m.tid == tid && m.call_index == k) return &m;
    }
    return nullptr;
  };
  auto strictly_below = [&](Timestamp a, Timestamp b) {
    return a != b && view.leq(a, b);
  };
  ViolationReport rep;
  for (const MethodRecord& m : methods_) {
    if (m.call.is_write() || !m.witness) continue;
    const Timestamp t = *m.witness;
    if (!view.is_scanned(t) || eval(t, aux_.sigma, aux_.hist) != *m.result) {
      rep.add("client-scan-stable",
              "scan result " + to_string(*m.result) + " no longer matches witness " +
                  std::to_string(t.value) + " at the end of the run",
              {t});
    }
  }
  for (std::size_t tid = 0; tid < prog_->threads.size(); ++tid) {
    for (std::size_t k = 1; k < prog_->threads[tid].calls.size(); ++k) {
      const MethodRecord* a = find(static_cast<ThreadId>(tid), k - 1);
      const MethodRecord* b = find(static_cast<ThreadId>(tid), k);
      if (!a || !b) continue;
      const Timestamp ta = a->call.is_write() ? *a->ts : a->witness.value_or(Timestamp{});
      const Timestamp tb = b->call.is_write() ? *b->ts : b->witness.value_or(Timestamp{});
      if (!view.contains(ta) || !view.contains(tb)) continue;
      const std::string where = prog_->threads[tid].name + "#" + std::to_string(k);
      if (a->call.is_write() && b->call.is_write()) {
        if (!strictly_below(ta, tb)) {
          rep.add("client-write-write", where + ": earlier write not strictly Omega-below", {ta, tb});
        }
      } else if (!a->call.is_write() && b->call.is_write()) {
        if (!strictly_below(ta, tb)) {
          rep.add("client-scan-write", where + ": scan witness not strictly Omega-below write",
                  {ta, tb});
        }
      } else if (a->call.is_write()) {
        if (!view.leq(ta, tb)) {
          rep.add("client-write-scan", where + ": write not Omega-below later scan", {ta, tb});
        }
      } else if (!view.leq(ta, tb)) {
        rep.add("client-scan-scan", where + ": scan witnesses not Omega-ordered", {ta, tb});
      }
    }
  }
  rep.set_step(step_count_);
  violations_.append(rep);
}

void Execution::oracle_checks() {
  const Trace tr = trace();
  ViolationReport rep;
  ++stats_.completed;
  std::string why;
  bool witness_ok = false;
  try {
    witness_ok = validate_witness(tr, &why);
  } catch (const Error& e) {
    why = e.what();
  }
  if (!witness_ok) rep.add("oracle-witness", why);
  const std::vector<OpRecord> ops = ops_of(tr);
  if (ops.size() <= kMaxLinearizableOps) {
    ++stats_.linearizable_runs;
    if (!linearizable(ops, {prog_->init_x, prog_->init_y})) {
      rep.add("oracle-linearizable", "no linearization of the completed history");
    }
  }
  rep.set_step(step_count_);
  violations_.append(rep);
}

void Execution::complete() {
  if (completed_checks_) return;
  if (!finished()) throw Error(ErrorCode::kPrecondition, "execution has not finished");
  completed_checks_ = true;
  if (!checks_) return;
  client_checks();
  oracle_checks();
}

std::string Execution::state_key() const {
  std::string k;
  append_state_key(k);
  return k;
}

void Execution::append_state_key(std::string& k) const {
  append_canonical(k, phys_);
  append_canonical(k, aux_);
  for (const Cursor& c : cursors_) {
    put(k, static_cast<std::uint32_t>(c.next_call));
    if (!c.frame) {
      put(k, 0xffffffffu);
      continue;
    }
    const MethodFrame& f = *c.frame;
    put(k, static_cast<std::uint32_t>(f.pc));
    const Registers& r = f.regs;
    for (const auto& v : {r.vx, r.vy, r.ox, r.oy}) put(k, v ? static_cast<std::uint32_t>(*v) + 1 : 0);
    put(k, r.b);
    put(k, static_cast<std::uint32_t>(r.rx));
    put(k, static_cast<std::uint32_t>(r.ry));
    put_opt(k, f.t);
    put_opt(k, f.t_x);
    put_opt(k, f.t_y);
    // The omega relation in the snapshot is informational and not consulted
    // by any check, so it stays out of the key.
    put_set(k, f.spec->dom_self);
    put_set(k, f.spec->dom_other);
    put_set(k, f.spec->scanned);
    put_set(k, f.spec->dom_global);
  }
  put(k, completed_);
  for (const std::uint32_t m : preceded_by_) put(k, m);
  // Completed methods by op id, independent of completion order.
  std::vector<const MethodRecord*> by_op(preceded_by_.size(), nullptr);
  for (const MethodRecord& m : methods_) by_op[op_base_[m.tid] + m.call_index] = &m;
  for (const MethodRecord* m : by_op) {
    if (!m) {
      put(k, 0);
      continue;
    }
    put(k, 1);
    put_opt(k, m->ts);
    put_opt(k, m->witness);
    put_opt(k, m->t_x);
    put_opt(k, m->t_y);
    put(k, m->result ? static_cast<std::uint32_t>(m->result->x) : 0);
    put(k, m->result ? static_cast<std::uint32_t>(m->result->y) : 0);
  }
}

Trace Execution::trace() const {
  Trace t;
  t.program = *prog_;
  t.schedule = schedule_;
  t.steps = steps_;
  t.methods = methods_;
  for (const Timestamp s : aux_.sigma) {
    const HistEntry& e = aux_.entry(s);
    t.sigma.push_back({s, e.rec.ptr, e.rec.val, aux_.color(s)});
  }
  t.violations = violations_;
  return t;
}

namespace {

class Explorer {
 public:
  Explorer(const ExploreOptions& opt) : opt_(opt) {}

  ExplorationReport run(const Program& prog) {
    Execution root(prog, true, false);
    root.use_cache(&cache_);
    for (const Violation& v : root.violations().items()) add(v);
    rep_.schedules = dfs(root);
    return std::move(rep_);
  }

 private:
  void absorb(const Execution& child, const Execution& parent) {
    const auto& items = child.violations().items();
    for (std::size_t i = parent.violations().size(); i < items.size(); ++i) add(items[i]);
    rep_.stats += diff(child.stats(), parent.stats());
  }

  void add(const Violation& v) {
    ++rep_.violation_count;
    ++rep_.counts_by_name[v.name];
    if (rep_.violations.size() < opt_.max_reported_violations) {
      rep_.violations.items().push_back(v);
    }
  }

  std::uint64_t dfs(const Execution& ex) {
    key_buf_.clear();
    ex.append_state_key(key_buf_);
    const Key key = key_of(key_buf_);
    if (const auto it = memo_.find(key); it != memo_.end()) return it->second;
    if (rep_.states >= opt_.max_states) {
      throw Error(ErrorCode::kBudgetExceeded,
                  "more than " + std::to_string(opt_.max_states) + " states");
    }
    ++rep_.states;
    std::uint64_t count = 0;
    if (ex.finished()) {
      Execution done = ex;
      done.complete();
      absorb(done, ex);
      for (const MethodRecord& m : done.methods()) {
        if (m.result) rep_.results.insert(*m.result);
      }
      if (rep_.samples.size() < opt_.max_samples) {
        rep_.samples.push_back({done.schedule(), digest(done.phys()), digest(done.aux()),
                                done.methods()});
      }
      count = 1;
    } else {
      const std::vector<ThreadId> next = ex.enabled_threads();
      if (next.empty()) {
        add({"deadlock", ex.step_count(), {}, "no thread can move"});
      }
      for (const ThreadId tid : next) {
        Execution child = ex;
        try {
          child.advance(tid);
        } catch (const Error& e) {
          add({"step-error", ex.step_count() + 1, {}, e.what()});
          continue;
        }
        absorb(child, ex);
        count += dfs(child);
      }
    }
    memo_.emplace(key, count);
    return count;
  }

  const ExploreOptions& opt_;
  ExplorationReport rep_;
  std::unordered_map<Key, std::uint64_t, KeyHash> memo_;
  CheckCache cache_;
  std::string key_buf_;
};

}  // namespace

ExplorationReport explore(const Program& prog, const ExploreOptions& options) {
  Explorer ex(options);
  return ex.run(prog);
}

Trace run_schedule(const Program& prog, const Schedule& sched) {
  Execution ex(prog);
  for (std::size_t i = 0; i < sched.size(); ++i) {
    const ThreadId tid = sched[i];
    if (!ex.enabled(tid)) {
      throw Error(ErrorCode::kInvalidSchedule,
                  "choice " + std::to_string(i + 1) + ": thread " + std::to_string(tid) +
                      " has no enabled step");
    }
    ex.advance(tid);
  }
  if (!ex.finished()) {
    throw Error(ErrorCode::kInvalidSchedule, "schedule ends before the program completes");
  }
  ex.complete();
  return ex.trace();
}

ExplorationReport run_random(const Program& prog, std::uint64_t seed, std::size_t runs) {
  ExplorationReport rep;
  std::mt19937_64 rng(seed);
  for (std::size_t run = 0; run < runs; ++run) {
    Execution ex(prog);
    while (!ex.finished()) {
      const std::vector<ThreadId> next = ex.enabled_threads();
      if (next.empty()) {
        rep.violations.add("deadlock", "no thread can move");
        ++rep.violation_count;
        ++rep.counts_by_name["deadlock"];
        break;
      }
      std::uniform_int_distribution<std::size_t> pick(0, next.size() - 1);
      ex.advance(next[pick(rng)]);
    }
    if (!ex.finished()) continue;
    ex.complete();
    ++rep.schedules;
    rep.states += ex.step_count();
    rep.stats += ex.stats();
    rep.violation_count += ex.violations().size();
    for (const Violation& v : ex.violations().items()) {
      ++rep.counts_by_name[v.name];
      if (rep.violations.size() < 64) rep.violations.items().push_back(v);
    }
    for (const MethodRecord& m : ex.methods()) {
      if (m.result) rep.results.insert(*m.result);
    }
    if (rep.samples.size() < 8) {
      rep.samples.push_back({ex.schedule(), digest(ex.phys()), digest(ex.aux()), ex.methods()});
    }
  }
  return rep;
}

}  // namespace jsnap
