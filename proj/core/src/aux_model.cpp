#include "jsnap/aux_model.hpp"

#include <algorithm>
#include <bit>
#include <ostream>
#include <sstream>

namespace jsnap {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kUnknownTimestamp: return "unknown-timestamp";
    case ErrorCode::kUninitializedPointer: return "uninitialized-pointer";
    case ErrorCode::kGuardViolation: return "guard-violation";
    case ErrorCode::kPrecondition: return "precondition";
    case ErrorCode::kDisabledStep: return "disabled-step";
    case ErrorCode::kValueOutOfDomain: return "value-out-of-domain";
    case ErrorCode::kBudgetExceeded: return "budget-exceeded";
    case ErrorCode::kInvalidSchedule: return "invalid-schedule";
    case ErrorCode::kSizeLimit: return "size-limit";
    case ErrorCode::kIncompleteTrace: return "incomplete-trace";
    case ErrorCode::kParse: return "parse";
  }
  return "?";
}

std::ostream& operator<<(std::ostream& os, Timestamp t) {
  return os << t.value;
}

const char* to_string(Ptr p) noexcept { return p == Ptr::X ? "x" : "y"; }

std::string to_string(ValuePair r) {
  std::ostringstream os;
  os << '(' << r.x << ',' << r.y << ')';
  return os.str();
}

char to_char(Color c) noexcept {
  switch (c) {
    case Color::Green: return 'g';
    case Color::Yellow: return 'y';
    case Color::Red: return 'r';
  }
  return '?';
}

namespace {

[[noreturn]] void unknown(Timestamp t) {
  throw Error(ErrorCode::kUnknownTimestamp,
              "timestamp " + std::to_string(t.value) + " not in history");
}

}  // namespace

AuxState AuxState::initial(Value vx, Value vy) {
  AuxState aux;
  const Timestamp t1{1}, t2{2};
  aux.hist.insert(t1, {{Ptr::X, vx}, Owner::init()});
  aux.hist.insert(t2, {{Ptr::Y, vy}, Owner::init()});
  aux.sigma = {t1, t2};
  aux.kappa.insert(t1, Color::Green);
  aux.kappa.insert(t2, Color::Green);
  aux.tau.insert(t1, t2);
  aux.tau.insert(t2, t2);
  aux.scanner.t_off = t2;
  return aux;
}

Timestamp AuxState::max_ts() const noexcept {
  return hist.empty() ? Timestamp{} : hist.back().first;
}

const HistEntry& AuxState::entry(Timestamp t) const {
  const HistEntry* e = hist.find(t);
  if (!e) unknown(t);
  return *e;
}

Color AuxState::color(Timestamp t) const {
  const Color* c = kappa.find(t);
  if (!c) unknown(t);
  return *c;
}

OmegaView::OmegaView(const AuxState& aux) : aux_(&aux) {
  const std::uint32_t top = aux.max_ts().value;
  if (top > kMaxTimestamp) {
    throw Error(ErrorCode::kSizeLimit, "timestamp " + std::to_string(top) + " too large");
  }
  top_ = top;
  const auto n = static_cast<std::ptrdiff_t>(top + 1);
  std::fill_n(pos_.begin(), n, -1);
  std::fill_n(down_.begin(), n, Mask{0});
  std::fill_n(prefix_.begin(), n, Mask{0});
  std::fill_n(green_.begin(), n, char{0});
  std::fill_n(end_.begin(), n, kNoEnd);
  for (std::size_t i = 0; i < aux.sigma.size(); ++i) {
    const Timestamp t = aux.sigma[i];
    if (t.value > top || !aux.hist.contains(t)) unknown(t);
    pos_[t.value] = static_cast<int>(i);
  }
  for (const auto& [t, c] : aux.kappa) {
    if (t.value <= top) green_[t.value] = c == Color::Green;
  }
  for (const auto& [t, end] : aux.tau) {
    if (t.value <= top) end_[t.value] = end.value;
  }
  Mask prefix = 0;
  for (const Timestamp t : aux.sigma) {
    prefix |= bit(t);
    prefix_[t.value] = prefix;
  }
  dom_ = prefix;
  for (std::size_t j = 0; j < aux.sigma.size(); ++j) {
    const std::uint32_t t = aux.sigma[j].value;
    Mask down = bit(aux.sigma[j]);
    for (std::size_t i = 0; i < aux.sigma.size(); ++i) {
      const std::uint32_t s = aux.sigma[i].value;
      if (end_[s] < t || (i < j && green_[s])) down |= Mask{1} << s;
    }
    down_[t] = down;
  }
  bool green = true;
  for (const Timestamp t : aux.sigma) {
    green = green && aux.color(t) == Color::Green;
    if (green && down_[t.value] == prefix_[t.value]) scanned_ |= bit(t);
  }
}

bool OmegaView::contains(Timestamp t) const noexcept {
  return t.value <= top_ && pos_[t.value] >= 0 &&
         aux_->hist.contains(t);
}

void OmegaView::require(Timestamp t) const {
  if (!contains(t)) unknown(t);
}

std::size_t OmegaView::position(Timestamp t) const {
  require(t);
  return static_cast<std::size_t>(pos_[t.value]);
}

bool OmegaView::leq(Timestamp t1, Timestamp t2) const {
  require(t1);
  require(t2);
  return (down_[t2.value] & bit(t1)) != 0;
}

OmegaView::Mask OmegaView::down_mask(Timestamp t) const {
  require(t);
  return down_[t.value];
}

OmegaView::Mask OmegaView::prefix_mask(Timestamp t) const {
  require(t);
  return prefix_[t.value];
}

TimestampSet OmegaView::to_set(Mask m) {
  TimestampSet out;
  out.reserve(static_cast<std::size_t>(std::popcount(m)));
  for (std::uint32_t v = 0; m; ++v, m >>= 1) {
    if (m & 1) out.push_back(Timestamp{v});
  }
  return out;
}

TimestampSet OmegaView::down(Timestamp t, bool strict) const {
  Mask m = down_mask(t);
  if (strict) m &= ~bit(t);
  return to_set(m);
}

TimestampSet OmegaView::sigma_prefix(Timestamp t) const {
  return to_set(prefix_mask(t));
}

bool OmegaView::is_scanned(Timestamp t) const {
  require(t);
  return (scanned_ & bit(t)) != 0;
}

TimestampSet OmegaView::scanned() const { return to_set(scanned_); }

bool omega_leq(Timestamp t1, Timestamp t2, const AuxState& aux) {
  return OmegaView(aux).leq(t1, t2);
}

TimestampSet omega_down(Timestamp t, const AuxState& aux, bool strict) {
  return OmegaView(aux).down(t, strict);
}

TimestampSet scanned(const AuxState& aux) { return OmegaView(aux).scanned(); }

std::vector<std::pair<Timestamp, Timestamp>> omega_relation(
    const AuxState& aux) {
  return OmegaView(aux).relation();
}

std::vector<std::pair<Timestamp, Timestamp>> OmegaView::relation() const {
  std::vector<std::pair<Timestamp, Timestamp>> out;
  for (const auto& [a, ea] : aux_->hist) {
    (void)ea;
    for (const auto& [b, eb] : aux_->hist) {
      (void)eb;
      if (down_[b.value] & bit(a)) out.emplace_back(a, b);
    }
  }
  return out;
}

std::optional<ValuePair> try_eval(Timestamp t, std::span<const Timestamp> sigma,
                                  const History& hist) noexcept {
  std::optional<Value> x, y;
  for (const Timestamp s : sigma) {
    const HistEntry* e = hist.find(s);
    if (!e) return std::nullopt;
    (e->rec.ptr == Ptr::X ? x : y) = e->rec.val;
    if (s == t) {
      if (!x || !y) return std::nullopt;
      return ValuePair{*x, *y};
    }
  }
  return std::nullopt;
}

ValuePair eval(Timestamp t, std::span<const Timestamp> sigma,
               const History& hist) {
  if (const auto r = try_eval(t, sigma, hist)) return *r;
  if (!hist.contains(t)) unknown(t);
  std::optional<Value> x, y;
  for (const Timestamp s : sigma) {
    const HistEntry* e = hist.find(s);
    if (!e) unknown(s);
    (e->rec.ptr == Ptr::X ? x : y) = e->rec.val;
    if (s == t) break;
  }
  if (std::find(sigma.begin(), sigma.end(), t) == sigma.end()) unknown(t);
  throw Error(ErrorCode::kUninitializedPointer,
              "no write to " + std::string(x ? "y" : "x") + " at or before timestamp " +
                  std::to_string(t.value));
}

std::vector<Timestamp> hist_p(Ptr p, const AuxState& aux) {
  std::vector<Timestamp> out;
  for (const Timestamp t : aux.sigma) {
    if (aux.entry(t).rec.ptr == p) out.push_back(t);
  }
  return out;
}

std::optional<Timestamp> last_green(Ptr p, const AuxState& aux) {
  std::optional<Timestamp> out;
  for (const Timestamp t : aux.sigma) {
    if (aux.entry(t).rec.ptr == p && aux.color(t) == Color::Green) out = t;
  }
  return out;
}

std::optional<Timestamp> yellow_of(Ptr p, const AuxState& aux) {
  for (const Timestamp t : aux.sigma) {
    if (aux.entry(t).rec.ptr == p && aux.color(t) == Color::Yellow) return t;
  }
  return std::nullopt;
}

std::optional<Timestamp> last_of(Ptr p, const AuxState& aux) {
  std::optional<Timestamp> out;
  for (const Timestamp t : aux.sigma) {
    if (aux.entry(t).rec.ptr == p) out = t;
  }
  return out;
}

bool last_gy(Ptr p, Timestamp t, const AuxState& aux) {
  const HistEntry& e = aux.entry(t);
  if (e.rec.ptr != p) return false;
  if (aux.color(t) == Color::Yellow) return true;
  return last_green(p, aux) == t;
}

bool set_contains(const TimestampSet& s, Timestamp t) {
  return std::binary_search(s.begin(), s.end(), t);
}

bool set_includes(const TimestampSet& super, const TimestampSet& sub) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

}  // namespace jsnap
