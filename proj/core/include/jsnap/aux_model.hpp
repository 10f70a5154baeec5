#pragma once

// Auxiliary state of the instrumented two-pointer snapshot object and the
// relations derived from it: the stable order Omega, the scanned set, and the
// spec-level evaluation of a history along the logical order sigma.
//
// Everything in this header is a pure function of its arguments.

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "jsnap/error.hpp"
#include "jsnap/flat_map.hpp"

namespace jsnap {

struct Timestamp {
  std::uint32_t value = 0;

  constexpr auto operator<=>(const Timestamp&) const = default;
};

std::ostream& operator<<(std::ostream& os, Timestamp t);

enum class Ptr : std::uint8_t { X, Y };

inline constexpr std::array<Ptr, 2> kPtrs{Ptr::X, Ptr::Y};

constexpr Ptr other(Ptr p) noexcept { return p == Ptr::X ? Ptr::Y : Ptr::X; }
const char* to_string(Ptr p) noexcept;

using Value = int;

struct ValueDomain {
  Value lo = 0;
  Value hi = 7;

  constexpr bool contains(Value v) const noexcept { return lo <= v && v <= hi; }
};

inline constexpr ValueDomain kDefaultDomain{};

struct ValuePair {
  Value x = 0;
  Value y = 0;

  constexpr auto operator<=>(const ValuePair&) const = default;
};

std::string to_string(ValuePair r);

using ThreadId = std::uint8_t;

struct WriteRecord {
  Ptr ptr = Ptr::X;
  Value val = 0;

  bool operator==(const WriteRecord&) const = default;
};

struct Owner {
  enum class Kind : std::uint8_t { Init, Joint, Thread };

  Kind kind = Kind::Init;
  ThreadId tid = 0;

  static constexpr Owner init() noexcept { return {Kind::Init, 0}; }
  static constexpr Owner joint() noexcept { return {Kind::Joint, 0}; }
  static constexpr Owner thread(ThreadId t) noexcept { return {Kind::Thread, t}; }

  bool is_joint() const noexcept { return kind == Kind::Joint; }
  // Entry belongs to the self-history of `t`.
  bool is_self_of(ThreadId t) const noexcept {
    return kind == Kind::Thread && tid == t;
  }
  // Entry belongs to the other-history of `t`: terminated, not by `t`.
  bool is_other_of(ThreadId t) const noexcept {
    return kind == Kind::Init || (kind == Kind::Thread && tid != t);
  }

  bool operator==(const Owner&) const = default;
};

struct HistEntry {
  WriteRecord rec;
  Owner owner;

  bool operator==(const HistEntry&) const = default;
};

enum class Color : std::uint8_t { Green, Yellow, Red };

char to_char(Color c) noexcept;

using History = FlatMap<Timestamp, HistEntry>;
using ColorMap = FlatMap<Timestamp, Color>;
using EndTimes = FlatMap<Timestamp, Timestamp>;

// Sorted, duplicate-free.
using TimestampSet = std::vector<Timestamp>;

struct ScannerState {
  enum class Phase : std::uint8_t { On, Off };

  Phase phase = Phase::Off;
  Timestamp t_off{};  // meaningful only when phase == Off
  bool s_x = false;
  bool s_y = false;

  bool on() const noexcept { return phase == Phase::On; }
  bool off() const noexcept { return phase == Phase::Off; }
  bool bit(Ptr p) const noexcept { return p == Ptr::X ? s_x : s_y; }
  bool& bit(Ptr p) noexcept { return p == Ptr::X ? s_x : s_y; }

  bool operator==(const ScannerState&) const = default;
};

struct WriterState {
  enum class Phase : std::uint8_t { Off, New, Fwd, Done };

  Phase phase = Phase::Off;
  Timestamp t{};
  Value v = 0;

  static WriterState off() noexcept { return {}; }
  bool active() const noexcept { return phase != Phase::Off; }

  bool operator==(const WriterState&) const = default;
};

struct AuxState {
  History hist;
  std::vector<Timestamp> sigma;
  ColorMap kappa;
  EndTimes tau;
  WriterState wx;
  WriterState wy;
  ScannerState scanner;

  // Two initializing writes 1 -> (X, vx), 2 -> (Y, vy), owned by Init,
  // green, terminated at 2, sigma = [1, 2].
  static AuxState initial(Value vx, Value vy);

  WriterState& writer(Ptr p) noexcept { return p == Ptr::X ? wx : wy; }
  const WriterState& writer(Ptr p) const noexcept {
    return p == Ptr::X ? wx : wy;
  }

  // max(dom hist); zero for an empty history.
  Timestamp max_ts() const noexcept;

  const HistEntry& entry(Timestamp t) const;  // throws kUnknownTimestamp
  Color color(Timestamp t) const;             // throws kUnknownTimestamp
  const Timestamp* end_time(Timestamp t) const { return tau.find(t); }

  bool operator==(const AuxState&) const = default;
};

// Queries over one fixed AuxState, precomputed as bitmasks over timestamp
// values. Build once, query many times; the free functions below are thin
// wrappers. Supports timestamps below 64 (kSizeLimit otherwise).
class OmegaView {
 public:
  using Mask = std::uint64_t;
  static constexpr std::uint32_t kMaxTimestamp = 63;
  static constexpr std::uint32_t kNoEnd = 0xffffffffu;

  explicit OmegaView(const AuxState& aux);

  bool contains(Timestamp t) const noexcept;
  // Position of t in sigma; throws kUnknownTimestamp.
  std::size_t position(Timestamp t) const;
  bool sigma_before(Timestamp a, Timestamp b) const {
    return position(a) < position(b);
  }

  bool leq(Timestamp t1, Timestamp t2) const;
  TimestampSet down(Timestamp t, bool strict) const;
  // sigma-prefix through t, as a set.
  TimestampSet sigma_prefix(Timestamp t) const;
  TimestampSet scanned() const;
  bool is_scanned(Timestamp t) const;

  // All pairs (a, b) with a Omega b, sorted.
  std::vector<std::pair<Timestamp, Timestamp>> relation() const;

  Mask down_mask(Timestamp t) const;
  Mask prefix_mask(Timestamp t) const;
  Mask scanned_mask() const noexcept { return scanned_; }
  Mask dom_mask() const noexcept { return dom_; }

  static Mask bit(Timestamp t) noexcept { return Mask{1} << t.value; }
  static TimestampSet to_set(Mask m);

  const AuxState& aux() const noexcept { return *aux_; }

 private:
  void require(Timestamp t) const;

  static constexpr std::size_t kSlots = kMaxTimestamp + 1;

  const AuxState* aux_;
  std::uint32_t top_ = 0;
  // Indexed by timestamp value, valid through top_.
  std::array<int, kSlots> pos_;  // -1 if absent
  std::array<Mask, kSlots> down_;
  std::array<Mask, kSlots> prefix_;
  std::array<char, kSlots> green_;
  std::array<std::uint32_t, kSlots> end_;  // kNoEnd if undefined
  Mask scanned_ = 0;
  Mask dom_ = 0;
};

bool omega_leq(Timestamp t1, Timestamp t2, const AuxState& aux);
TimestampSet omega_down(Timestamp t, const AuxState& aux, bool strict);
TimestampSet scanned(const AuxState& aux);

// All pairs (a, b) with a Omega b, sorted.
std::vector<std::pair<Timestamp, Timestamp>> omega_relation(const AuxState& aux);

// Replays the writes of `sigma` up to and including t.
ValuePair eval(Timestamp t, std::span<const Timestamp> sigma,
               const History& hist);
// As eval, but nullopt instead of throwing.
std::optional<ValuePair> try_eval(Timestamp t, std::span<const Timestamp> sigma,
                                  const History& hist) noexcept;

// sigma filtered to writes into p.
std::vector<Timestamp> hist_p(Ptr p, const AuxState& aux);

std::optional<Timestamp> last_green(Ptr p, const AuxState& aux);
std::optional<Timestamp> yellow_of(Ptr p, const AuxState& aux);
// sigma-last entry of hist_p.
std::optional<Timestamp> last_of(Ptr p, const AuxState& aux);

bool last_gy(Ptr p, Timestamp t, const AuxState& aux);

bool set_contains(const TimestampSet& s, Timestamp t);
bool set_includes(const TimestampSet& super, const TimestampSet& sub);

}  // namespace jsnap
