#include "jsnap/invariants.hpp"

#include <algorithm>
#include <sstream>

namespace jsnap {

namespace {

std::string ts(Timestamp t) { return std::to_string(t.value); }

std::string colors_of(const std::vector<Timestamp>& seq, const AuxState& aux) {
  std::string out;
  for (const Timestamp t : seq) out.push_back(to_char(aux.color(t)));
  return out;
}

// g+ y? r*
bool match_colors(const std::string& c) {
  std::size_t i = 0;
  while (i < c.size() && c[i] == 'g') ++i;
  if (i == 0) return false;
  if (i < c.size() && c[i] == 'y') ++i;
  while (i < c.size() && c[i] == 'r') ++i;
  return i == c.size();
}

// (g|y)+ r*
bool match_red_zone(const std::string& c) {
  std::size_t i = 0;
  while (i < c.size() && (c[i] == 'g' || c[i] == 'y')) ++i;
  if (i == 0) return false;
  while (i < c.size() && c[i] == 'r') ++i;
  return i == c.size();
}

bool structurally_sound(const AuxState& aux, ViolationReport& rep) {
  TimestampSet sorted = aux.sigma;
  std::sort(sorted.begin(), sorted.end());
  const bool dup = std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
  const TimestampSet keys = dom_hist(aux);
  bool ok = true;
  if (dup || sorted != keys) {
    rep.add("sigma-permutation", "sigma is not a permutation of dom(hist)");
    ok = false;
  }
  TimestampSet colored;
  colored.reserve(aux.kappa.size());
  for (const auto& [t, c] : aux.kappa) {
    (void)c;
    colored.push_back(t);
  }
  if (colored != keys) {
    rep.add("kappa-domain", "kappa is not defined exactly on dom(hist)");
    ok = false;
  }
  return ok;
}

std::optional<ValuePair> eval_opt(Timestamp t, const AuxState& aux) {
  return try_eval(t, aux.sigma, aux.hist);
}

}  // namespace

void ViolationReport::add(std::string name, std::string detail,
                          std::vector<Timestamp> at) {
  items_.push_back({std::move(name), 0, std::move(at), std::move(detail)});
}

void ViolationReport::append(const ViolationReport& other) {
  items_.insert(items_.end(), other.items_.begin(), other.items_.end());
}

void ViolationReport::set_step(std::size_t step) {
  for (Violation& v : items_) {
    if (v.step == 0) v.step = step;
  }
}

bool ViolationReport::contains(const std::string& name) const {
  return std::any_of(items_.begin(), items_.end(),
                     [&](const Violation& v) { return v.name == name; });
}

std::string ViolationReport::render() const {
  std::ostringstream os;
  for (const Violation& v : items_) {
    os << "INV " << v.name << " @step=" << v.step << ": " << v.detail << '\n';
  }
  return os.str();
}

ViolationReport check_state(const PhysState& phys, const AuxState& aux) {
  ViolationReport rep;
  if (!structurally_sound(aux, rep)) return rep;
  const OmegaView view(aux);
  const ScannerState& sc = aux.scanner;

  // Overlap
  for (const auto& [t1, end] : aux.tau) {
    for (const auto& [t2, e] : aux.hist) {
      (void)e;
      if (end < t2 && !view.sigma_before(t1, t2)) {
        rep.add("overlap",
                ts(t1) + " terminated at " + ts(end) + " but is not sigma-before " + ts(t2),
                {t1, t2});
      }
    }
  }

  for (const Ptr p : kPtrs) {
    const std::vector<Timestamp> hp = hist_p(p, aux);
    const std::string cs = colors_of(hp, aux);
    const std::string pn = to_string(p);

    if (!match_colors(cs)) rep.add("colors", "hist_" + pn + " colored " + cs);

    // Last write
    if (hp.empty()) {
      rep.add("last-write", "no write to " + pn);
    } else if (aux.entry(hp.back()).rec.val != phys.cell(p)) {
      rep.add("last-write",
              pn + "=" + std::to_string(phys.cell(p)) + " but sigma-last write " +
                  ts(hp.back()) + " stored " + std::to_string(aux.entry(hp.back()).rec.val),
              {hp.back()});
    }

    // Forwarded values
    if (sc.off() && sc.bit(p) && phys.fwd(p)) {
      const Value v = *phys.fwd(p);
      const bool found = std::any_of(hp.begin(), hp.end(), [&](Timestamp t) {
        return aux.entry(t).rec.val == v && last_gy(p, t, aux);
      });
      if (!found) {
        rep.add("forwarded-values",
                "f" + pn + "=" + std::to_string(v) + " matches no last-green or yellow write");
      }
    }

    // Red zone
    if (sc.off() && sc.s_x && sc.s_y) {
      if (!match_red_zone(cs)) {
        rep.add("red-zone", "hist_" + pn + " colored " + cs + " after set(false)");
      }
      for (const Timestamp t : hp) {
        const Color c = aux.color(t);
        const Timestamp* end = aux.end_time(t);
        bool ok = true;
        if (c == Color::Green) ok = t <= sc.t_off;
        if (c == Color::Yellow) ok = t <= sc.t_off && (!end || sc.t_off <= *end);
        if (c == Color::Red) ok = sc.t_off < t;
        if (!ok) {
          rep.add("red-zone",
                  std::string(1, to_char(c)) + " event " + ts(t) +
                      " out of place relative to t_off=" + ts(sc.t_off),
                  {t});
        }
      }
      // First forwarding principle
      for (const Timestamp t : hp) {
        const Timestamp* end = aux.end_time(t);
        if (end && *end < sc.t_off && aux.color(t) != Color::Green) {
          rep.add("first-forwarding",
                  "event " + ts(t) + " terminated at " + ts(*end) +
                      " before t_off=" + ts(sc.t_off) + " is not green",
                  {t});
        }
      }
    }

    // Green/yellow read values, state form
    if (sc.on() && sc.bit(p) && !hp.empty() && !last_gy(p, hp.back(), aux)) {
      rep.add("green-yellow-read",
              "sigma-last write " + ts(hp.back()) + " of " + pn +
                  " is neither last green nor yellow while the scan reads it",
              {hp.back()});
    }

    // Joint history, writer side
    const WriterState& w = aux.writer(p);
    if (w.active()) {
      const HistEntry* e = aux.hist.find(w.t);
      if (!e || !e->owner.is_joint() || e->rec != WriteRecord{p, w.v}) {
        rep.add("joint-history",
                "writer of " + pn + " at event " + ts(w.t) + " has no matching joint entry",
                {w.t});
      }
    }
  }

  // Joint history, history side
  for (const auto& [t, e] : aux.hist) {
    if (!e.owner.is_joint()) continue;
    const WriterState& w = aux.writer(e.rec.ptr);
    if (!w.active() || w.t != t || w.v != e.rec.val) {
      rep.add("joint-history", "joint event " + ts(t) + " has no active writer", {t});
    }
  }

  // Terminated events
  const Timestamp top = aux.max_ts();
  for (const auto& [t, e] : aux.hist) {
    const Timestamp* end = aux.end_time(t);
    if (e.owner.is_joint() == (end != nullptr)) {
      rep.add("terminated-events",
              "event " + ts(t) + (end ? " is joint but has an end time"
                                      : " is terminated but has no end time"),
              {t});
    }
    if (end && (*end < t || top < *end)) {
      rep.add("terminated-events", "end time " + ts(*end) + " of " + ts(t) + " out of range", {t});
    }
  }
  for (const auto& [t, end] : aux.tau) {
    (void)end;
    if (!aux.hist.contains(t)) rep.add("terminated-events", "end time for unknown event " + ts(t));
  }

  // Scanner
  if (sc.off() && sc.s_x != sc.s_y) rep.add("scanner-state", "scanner off with S_x != S_y");
  if (sc.s_y && !sc.s_x) rep.add("scanner-state", "S_y set before S_x");
  if (sc.off() && top < sc.t_off) rep.add("scanner-state", "t_off beyond max(dom hist)");
  if (phys.s_bit != sc.on()) {
    rep.add("scanner-bit", std::string("physical S=") + (phys.s_bit ? "true" : "false") +
                               " disagrees with scanner phase");
  }
  return rep;
}

ViolationReport check_transition(const AuxState& pre, const AuxState& post) {
  ViolationReport rep;
  for (const auto& [t, e] : pre.hist) {
    const HistEntry* n = post.hist.find(t);
    if (!n || n->rec != e.rec) {
      rep.add("hist-grows", "event " + ts(t) + " lost or rewritten", {t});
      continue;
    }
    if (!e.owner.is_joint() && !(n->owner == e.owner)) {
      rep.add("ownership-monotone", "terminated event " + ts(t) + " changed owner", {t});
    }
  }

  // The relational checks below need every pre event in post.
  if (rep.contains("hist-grows")) return rep;
  ViolationReport sound;
  if (!structurally_sound(post, sound) || !structurally_sound(pre, sound)) {
    rep.append(sound);
    return rep;
  }
  const OmegaView a(pre), b(post);
  for (const auto& [t2, e2] : pre.hist) {
    (void)e2;
    const OmegaView::Mask lost = a.down_mask(t2) & ~b.down_mask(t2);
    for (const Timestamp t1 : OmegaView::to_set(lost)) {
      rep.add("omega-monotone", ts(t1) + " Omega " + ts(t2) + " lost", {t1, t2});
    }
  }
  if (a.scanned_mask() & ~b.scanned_mask()) rep.add("scanned-monotone", "scanned set shrank");
  for (const Timestamp s : a.scanned()) {
    if (a.down_mask(s) != b.down_mask(s)) {
      rep.add("scanned-ideal-stable", "Omega-ideal of scanned " + ts(s) + " changed", {s});
    }
    if (eval_opt(s, pre) != eval_opt(s, post)) {
      rep.add("snapshot-stable", "snapshot at scanned " + ts(s) + " changed", {s});
    }
  }
  return rep;
}

ViolationReport check_omega(const AuxState& aux) {
  ViolationReport rep;
  if (!structurally_sound(aux, rep)) return rep;
  const OmegaView view(aux);
  const TimestampSet dom = dom_hist(aux);
  using Mask = OmegaView::Mask;
  // up[a] = {b | a Omega b}
  std::vector<Mask> up(aux.max_ts().value + 1, 0);
  for (const Timestamp b : dom) {
    for (const Timestamp a : OmegaView::to_set(view.down_mask(b))) up[a.value] |= OmegaView::bit(b);
  }
  for (const Timestamp a : dom) {
    const Mask ua = up[a.value];
    if (!(ua & OmegaView::bit(a))) rep.add("omega-reflexive", "not " + ts(a) + " Omega itself", {a});
    for (const Timestamp b : OmegaView::to_set(ua & view.down_mask(a) & ~OmegaView::bit(a))) {
      if (a < b) {
        rep.add("omega-antisymmetric", ts(a) + " and " + ts(b) + " mutually related", {a, b});
      }
    }
    for (const Timestamp b : OmegaView::to_set(ua)) {
      const Mask missing = up[b.value] & ~ua;
      for (const Timestamp c : OmegaView::to_set(missing)) {
        rep.add("omega-transitive",
                ts(a) + " < " + ts(b) + " < " + ts(c) + " but not " + ts(a) + " < " + ts(c),
                {a, b, c});
      }
    }
  }
  const Mask sc = view.scanned_mask();
  for (const Timestamp s : OmegaView::to_set(sc)) {
    const Mask incomparable = sc & ~view.down_mask(s) & ~up[s.value];
    for (const Timestamp t : OmegaView::to_set(incomparable)) {
      if (s < t) rep.add("scanned-linear", ts(s) + " and " + ts(t) + " incomparable", {s, t});
    }
    for (const Timestamp t : OmegaView::to_set(view.down_mask(s) & ~sc)) {
      rep.add("scanned-downward-closed", ts(t) + " below scanned " + ts(s) + " is not scanned",
              {t, s});
    }
  }
  return rep;
}

ViolationReport check_chain_lemma(const AuxState& aux) {
  ViolationReport rep;
  if (!structurally_sound(aux, rep)) return rep;
  const OmegaView view(aux);
  bool all_green = true;
  for (const Timestamp t : aux.sigma) {
    all_green = all_green && aux.color(t) == Color::Green;
    if (!all_green) break;
    if (view.down_mask(t) != view.prefix_mask(t)) {
      rep.add("chain", "Omega-ideal of all-green prefix at " + ts(t) + " differs from the prefix",
              {t});
    }
  }
  return rep;
}

ViolationReport check_all(const PhysState& phys, const AuxState& aux) {
  ViolationReport rep = check_state(phys, aux);
  if (rep.contains("sigma-permutation") || rep.contains("kappa-domain")) return rep;
  rep.append(check_omega(aux));
  rep.append(check_chain_lemma(aux));
  return rep;
}

ViolationReport check_read(const AuxState& aux, Ptr p, Value read) {
  ViolationReport rep;
  const ScannerState& sc = aux.scanner;
  if (!sc.on() || !sc.bit(p)) return rep;
  for (const Timestamp t : hist_p(p, aux)) {
    if (last_gy(p, t, aux) && aux.entry(t).rec.val == read) return rep;
  }
  rep.add("green-yellow-read",
          "read of " + std::string(to_string(p)) + " returned " + std::to_string(read) +
              ", not the value of a last-green or yellow write");
  return rep;
}

ViolationReport check_write_post(const SpecSnapshot& snap, const AuxState& ret,
                                 Timestamp t, ThreadId tid, Ptr p, Value v) {
  ViolationReport rep;
  TimestampSet expect = snap.dom_self;
  if (!set_contains(expect, t)) {
    expect.insert(std::upper_bound(expect.begin(), expect.end(), t), t);
  }
  const HistEntry* e = ret.hist.find(t);
  if (dom_self(ret, tid) != expect || !e || !e->owner.is_self_of(tid) ||
      e->rec != WriteRecord{p, v}) {
    rep.add("write-post-self", "self history is not the pre-state's plus " + ts(t), {t});
  }
  if (set_contains(snap.dom_global, t)) {
    rep.add("write-post-fresh", "event " + ts(t) + " already existed at invocation", {t});
  }
  if (!e) return rep;
  const OmegaView view(ret);
  auto below = [&](Timestamp s) {
    if (s == t || !view.contains(s) || !view.leq(s, t)) {
      rep.add("write-post-order", ts(s) + " is not strictly Omega-below " + ts(t), {s, t});
    }
  };
  for (const Timestamp s : snap.dom_other) below(s);
  for (const Timestamp s : snap.scanned) {
    if (!set_contains(snap.dom_other, s)) below(s);
  }
  return rep;
}

bool scan_witness_ok(const SpecSnapshot& snap, const AuxState& ret,
                     ValuePair r, Timestamp t) {
  const OmegaView view(ret);
  if (!view.contains(t)) return false;
  if (try_eval(t, ret.sigma, ret.hist) != r) return false;
  OmegaView::Mask global = 0;
  for (const Timestamp s : snap.dom_global) global |= OmegaView::bit(s);
  if ((view.down_mask(t) & global) != global) return false;
  return view.is_scanned(t);
}

ScanPost check_scan_post(const SpecSnapshot& snap, const AuxState& ret,
                         ValuePair r, std::optional<Timestamp> constructive) {
  ScanPost out;
  if (dom_self(ret, snap.tid) != snap.dom_self) {
    out.report.add("scan-post-self", "scan changed its thread's self history");
  }
  std::optional<Timestamp> found;
  for (const auto& [t, e] : ret.hist) {
    (void)e;
    if (scan_witness_ok(snap, ret, r, t)) {
      found = t;
      break;
    }
  }
  if (!found) {
    out.report.add("scan-post-witness", "no witness for result " + to_string(r));
  }
  if (constructive) {
    if (scan_witness_ok(snap, ret, r, *constructive)) {
      found = constructive;
    } else {
      out.report.add("scan-post-constructive",
                     "relinked event " + ts(*constructive) + " is not a witness for " +
                         to_string(r),
                     {*constructive});
    }
  }
  out.witness = found;
  return out;
}

ViolationReport check_relink_property(const AuxState& ret, Timestamp t_x,
                                      Timestamp t_y) {
  ViolationReport rep;
  if (last_green(Ptr::X, ret) != t_x) {
    rep.add("relink-last-green", ts(t_x) + " is not the last green write of x", {t_x});
  }
  if (last_green(Ptr::Y, ret) != t_y) {
    rep.add("relink-last-green", ts(t_y) + " is not the last green write of y", {t_y});
  }
  const OmegaView view(ret);
  if (!view.contains(t_x) || !view.contains(t_y)) return rep;
  const Timestamp top = view.sigma_before(t_x, t_y) ? t_y : t_x;
  for (const Timestamp t : ret.sigma) {
    if (ret.color(t) != Color::Green) {
      rep.add("relink-green-prefix", "event " + ts(t) + " up to " + ts(top) + " is not green",
              {t});
    }
    if (t == top) break;
  }
  return rep;
}

}  // namespace jsnap
