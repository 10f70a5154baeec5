#include "jsnap/digest.hpp"

#include <cstdio>

#include "jsnap/aux_model.hpp"
#include "jsnap/snapshot.hpp"

namespace jsnap {

namespace {

// Writes into storage sized up front; the encoding is little-endian.
struct Sink {
  char* p;

  void u8(std::uint8_t v) { *p++ = static_cast<char>(v); }
  void u32(std::uint32_t v) {
    p[0] = static_cast<char>(v);
    p[1] = static_cast<char>(v >> 8);
    p[2] = static_cast<char>(v >> 16);
    p[3] = static_cast<char>(v >> 24);
    p += 4;
  }
  void value(Value v) { u32(static_cast<std::uint32_t>(v)); }
  void opt(const std::optional<Value>& v) {
    u8(v ? 1 : 0);
    value(v.value_or(0));
  }
  void opt_tid(const std::optional<ThreadId>& v) {
    u8(v ? 1 : 0);
    u8(v.value_or(0));
  }
  void writer(const WriterState& w) {
    u8(static_cast<std::uint8_t>(w.phase));
    u32(w.t.value);
    value(w.v);
  }
};

char* grow(std::string& out, std::size_t n) {
  const std::size_t at = out.size();
  out.resize(at + n);
  return out.data() + at;
}

}  // namespace

void append_canonical(std::string& out, const AuxState& aux) {
  const std::size_t n = 41 + aux.hist.size() * 11 + aux.sigma.size() * 4 +
                        aux.kappa.size() * 5 + aux.tau.size() * 8;
  Sink w{grow(out, n)};
  w.u32(static_cast<std::uint32_t>(aux.hist.size()));
  for (const auto& [t, e] : aux.hist) {
    w.u32(t.value);
    w.u8(static_cast<std::uint8_t>(e.rec.ptr));
    w.value(e.rec.val);
    w.u8(static_cast<std::uint8_t>(e.owner.kind));
    w.u8(e.owner.tid);
  }
  w.u32(static_cast<std::uint32_t>(aux.sigma.size()));
  for (const Timestamp t : aux.sigma) w.u32(t.value);
  w.u32(static_cast<std::uint32_t>(aux.kappa.size()));
  for (const auto& [t, c] : aux.kappa) {
    w.u32(t.value);
    w.u8(static_cast<std::uint8_t>(c));
  }
  w.u32(static_cast<std::uint32_t>(aux.tau.size()));
  for (const auto& [t, end] : aux.tau) {
    w.u32(t.value);
    w.u32(end.value);
  }
  w.writer(aux.wx);
  w.writer(aux.wy);
  w.u8(static_cast<std::uint8_t>(aux.scanner.phase));
  w.u32(aux.scanner.t_off.value);
  w.u8(aux.scanner.s_x);
  w.u8(aux.scanner.s_y);
}

void append_canonical(std::string& out, const PhysState& phys) {
  Sink w{grow(out, 24)};
  w.value(phys.x);
  w.value(phys.y);
  w.opt(phys.fx);
  w.opt(phys.fy);
  w.u8(phys.s_bit);
  w.opt_tid(phys.lock_wx);
  w.opt_tid(phys.lock_wy);
  w.opt_tid(phys.lock_scan);
}

std::uint64_t digest(const AuxState& aux) {
  std::string buf;
  append_canonical(buf, aux);
  return fnv1a(buf);
}

std::uint64_t digest(const PhysState& phys) {
  std::string buf;
  append_canonical(buf, phys);
  return fnv1a(buf);
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace jsnap
