#include "jsnap/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "jsnap/digest.hpp"

namespace jsnap {

namespace {

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kParse,
              (line ? "line " + std::to_string(line) + ": " : std::string()) + what);
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i <= text.size()) {
    const std::size_t j = text.find('\n', i);
    if (j == std::string_view::npos) {
      if (i < text.size()) out.push_back(text.substr(i));
      break;
    }
    out.push_back(text.substr(i, j - i));
    i = j + 1;
  }
  return out;
}

template <class T>
bool to_num(std::string_view s, T& out, int base = 10) {
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out, base);
  return ec == std::errc() && p == s.data() + s.size();
}

template <class T>
T num(std::string_view s, std::size_t line, int base = 10) {
  T v{};
  if (!to_num(s, v, base)) parse_error(line, "bad number '" + std::string(s) + "'");
  return v;
}

Ptr parse_ptr(std::string_view s, std::size_t line) {
  if (s == "x") return Ptr::X;
  if (s == "y") return Ptr::Y;
  parse_error(line, "bad pointer '" + std::string(s) + "'");
}

Color parse_color(std::string_view s, std::size_t line) {
  if (s == "g") return Color::Green;
  if (s == "y") return Color::Yellow;
  if (s == "r") return Color::Red;
  parse_error(line, "bad color '" + std::string(s) + "'");
}

MethodCall parse_call_at(std::string_view text, std::size_t line) {
  const auto w = split_ws(text);
  if (w.size() == 1 && w[0] == "scan") return MethodCall::scan();
  if (w.size() == 3 && w[0] == "write") {
    return MethodCall::write(parse_ptr(w[1], line), num<Value>(w[2], line));
  }
  parse_error(line, "bad call '" + std::string(trim(text)) + "'");
}

std::vector<MethodCall> parse_calls(std::string_view text, std::size_t line) {
  std::vector<MethodCall> out;
  std::size_t i = 0;
  while (i <= text.size()) {
    std::size_t j = text.find(';', i);
    if (j == std::string_view::npos) j = text.size();
    const std::string_view part = trim(text.substr(i, j - i));
    if (!part.empty()) out.push_back(parse_call_at(part, line));
    i = j + 1;
  }
  return out;
}

std::string calls_text(const ThreadProgram& th) {
  std::string out;
  for (std::size_t i = 0; i < th.calls.size(); ++i) {
    if (i) out += "; ";
    out += render_call(th.calls[i]);
  }
  return out;
}

bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  for (const char c : s) {
    if (c == ':' || c == ';' || c == '#' || c == ' ' || c == '\t') return false;
  }
  return true;
}

// "<name>: calls" into prog; returns false if the line has no colon.
bool parse_thread_line(std::string_view text, std::size_t line, Program& prog) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) return false;
  const std::string name(trim(text.substr(0, colon)));
  if (!valid_name(name)) parse_error(line, "bad thread name '" + name + "'");
  if (prog.find(name)) parse_error(line, "duplicate thread '" + name + "'");
  prog.threads.push_back({name, parse_calls(text.substr(colon + 1), line)});
  return true;
}

std::string_view strip_comment(std::string_view s) {
  const auto h = s.find('#');
  return trim(h == std::string_view::npos ? s : s.substr(0, h));
}

std::string_view value_of(std::string_view tok, std::string_view key, std::size_t line) {
  if (tok.size() <= key.size() || tok.substr(0, key.size()) != key || tok[key.size()] != '=') {
    parse_error(line, "expected " + std::string(key) + "=...");
  }
  return tok.substr(key.size() + 1);
}

ThreadId tid_of(const Program& prog, std::string_view name, std::size_t line) {
  const auto t = prog.find(std::string(name));
  if (!t) parse_error(line, "unknown thread '" + std::string(name) + "'");
  return *t;
}

}  // namespace

std::size_t Program::num_calls() const noexcept {
  std::size_t n = 0;
  for (const ThreadProgram& th : threads) n += th.calls.size();
  return n;
}

std::optional<ThreadId> Program::find(const std::string& name) const {
  for (std::size_t i = 0; i < threads.size(); ++i) {
    if (threads[i].name == name) return static_cast<ThreadId>(i);
  }
  return std::nullopt;
}

std::string Program::describe() const {
  std::string out;
  for (std::size_t i = 0; i < threads.size(); ++i) {
    if (i) out += ' ';
    out += threads[i].name + ":[" + calls_text(threads[i]) + "]";
  }
  return out;
}

std::vector<Value> Trace::sigma_values() const {
  std::vector<Value> out;
  for (const SigmaEntry& e : sigma) out.push_back(e.val);
  return out;
}

std::uint64_t Trace::digest() const { return fnv1a(render_trace(*this)); }

std::string render_call(const MethodCall& call) { return to_string(call); }

MethodCall parse_call(std::string_view text) { return parse_call_at(text, 0); }

std::string render_program(const Program& prog) {
  std::ostringstream os;
  os << "init " << prog.init_x << ' ' << prog.init_y << '\n';
  for (const ThreadProgram& th : prog.threads) os << th.name << ": " << calls_text(th) << '\n';
  return os.str();
}

Program parse_program(std::string_view text) {
  Program prog;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t ln = i + 1;
    const std::string_view s = strip_comment(lines[i]);
    if (s.empty()) continue;
    const auto w = split_ws(s);
    if (w[0] == "init") {
      if (w.size() != 3) parse_error(ln, "init takes two values");
      prog.init_x = num<Value>(w[1], ln);
      prog.init_y = num<Value>(w[2], ln);
      continue;
    }
    if (!parse_thread_line(s, ln, prog)) parse_error(ln, "expected '<thread>: <calls>'");
  }
  auto check = [&](Value v) {
    if (!prog.domain.contains(v)) parse_error(0, "value " + std::to_string(v) + " out of domain");
  };
  check(prog.init_x);
  check(prog.init_y);
  for (const ThreadProgram& th : prog.threads) {
    for (const MethodCall& c : th.calls) {
      if (c.is_write()) check(c.value);
    }
  }
  if (prog.threads.empty()) parse_error(0, "program has no threads");
  return prog;
}

std::string render_schedule(const Program& prog, const Schedule& sched) {
  std::string out;
  for (std::size_t i = 0; i < sched.size(); ++i) {
    if (i) out += ' ';
    out += sched[i] < prog.threads.size() ? prog.threads[sched[i]].name : "?";
  }
  return out;
}

Schedule parse_schedule(const Program& prog, std::string_view text) {
  Schedule out;
  for (const std::string_view raw : split_lines(text)) {
    for (const std::string_view name : split_ws(strip_comment(raw))) {
      const auto t = prog.find(std::string(name));
      if (!t) {
        throw Error(ErrorCode::kInvalidSchedule, "unknown thread '" + std::string(name) + "'");
      }
      out.push_back(*t);
    }
  }
  return out;
}

std::string render_trace(const Trace& t) {
  std::ostringstream os;
  const Program& p = t.program;
  auto name = [&](ThreadId tid) {
    return tid < p.threads.size() ? p.threads[tid].name : std::to_string(tid);
  };
  os << "jsnap-trace 1\n";
  os << "init " << p.init_x << ' ' << p.init_y << '\n';
  for (const ThreadProgram& th : p.threads) os << "thread " << th.name << ": " << calls_text(th) << '\n';
  if (t.seed) os << "seed " << *t.seed << '\n';
  os << "schedule";
  for (const ThreadId tid : t.schedule) os << ' ' << name(tid);
  os << '\n';
  for (const StepRecord& s : t.steps) {
    os << "step " << s.index << ' ' << name(s.tid) << ' ' << s.label << " phys="
       << hex64(s.phys_digest) << " aux=" << hex64(s.aux_digest) << '\n';
  }
  for (const MethodRecord& m : t.methods) {
    os << "method " << name(m.tid) << ' ' << m.call_index << ' ' << render_call(m.call)
       << " inv=" << m.invocation << " resp=" << m.response;
    if (m.ts) os << " ts=" << m.ts->value;
    if (m.result) os << " result=" << m.result->x << ',' << m.result->y;
    if (m.witness) os << " witness=" << m.witness->value;
    if (m.t_x) os << " tx=" << m.t_x->value;
    if (m.t_y) os << " ty=" << m.t_y->value;
    os << '\n';
  }
  os << "sigma";
  for (const SigmaEntry& e : t.sigma) os << ' ' << e.t.value << ':' << to_string(e.ptr) << ':' << e.val;
  os << "\nkappa";
  for (const SigmaEntry& e : t.sigma) os << ' ' << e.t.value << ':' << to_char(e.color);
  os << '\n';
  for (const Violation& v : t.violations.items()) {
    os << "violation " << v.name << ' ' << v.step << " at=";
    if (v.at.empty()) os << '-';
    for (std::size_t i = 0; i < v.at.size(); ++i) os << (i ? "," : "") << v.at[i].value;
    os << ' ' << v.detail << '\n';
  }
  os << "end\n";
  return os.str();
}

Trace parse_trace(std::string_view text) {
  Trace t;
  const auto lines = split_lines(text);
  std::size_t i = 0;
  while (i < lines.size() && trim(lines[i]).empty()) ++i;
  if (i == lines.size()) return t;
  if (trim(lines[i]) != "jsnap-trace 1") parse_error(i + 1, "missing 'jsnap-trace 1' header");
  bool ended = false;
  bool have_kappa = false;
  for (++i; i < lines.size(); ++i) {
    const std::size_t ln = i + 1;
    const std::string_view line = trim(lines[i]);
    if (line.empty()) continue;
    if (ended) parse_error(ln, "content after 'end'");
    const auto w = split_ws(line);
    const std::string_view kind = w[0];
    if (kind == "init") {
      if (w.size() != 3) parse_error(ln, "init takes two values");
      t.program.init_x = num<Value>(w[1], ln);
      t.program.init_y = num<Value>(w[2], ln);
    } else if (kind == "thread") {
      if (!parse_thread_line(line.substr(6), ln, t.program)) parse_error(ln, "bad thread line");
    } else if (kind == "seed") {
      if (w.size() != 2) parse_error(ln, "seed takes one value");
      t.seed = num<std::uint64_t>(w[1], ln);
    } else if (kind == "schedule") {
      for (std::size_t k = 1; k < w.size(); ++k) t.schedule.push_back(tid_of(t.program, w[k], ln));
    } else if (kind == "step") {
      if (w.size() != 6) parse_error(ln, "step record has " + std::to_string(w.size()) + " fields");
      StepRecord s;
      s.index = num<std::size_t>(w[1], ln);
      s.tid = tid_of(t.program, w[2], ln);
      s.label = std::string(w[3]);
      s.phys_digest = num<std::uint64_t>(value_of(w[4], "phys", ln), ln, 16);
      s.aux_digest = num<std::uint64_t>(value_of(w[5], "aux", ln), ln, 16);
      t.steps.push_back(std::move(s));
    } else if (kind == "method") {
      if (w.size() < 4) parse_error(ln, "short method record");
      MethodRecord m;
      m.tid = tid_of(t.program, w[1], ln);
      m.call_index = num<std::size_t>(w[2], ln);
      std::size_t k = 4;
      if (w[3] == "scan") {
        m.call = MethodCall::scan();
      } else if (w[3] == "write" && w.size() >= 6) {
        m.call = MethodCall::write(parse_ptr(w[4], ln), num<Value>(w[5], ln));
        k = 6;
      } else {
        parse_error(ln, "bad method call");
      }
      bool inv = false, resp = false;
      for (; k < w.size(); ++k) {
        const auto eq = w[k].find('=');
        if (eq == std::string_view::npos) parse_error(ln, "expected key=value");
        const std::string_view key = w[k].substr(0, eq), val = w[k].substr(eq + 1);
        if (key == "inv") {
          m.invocation = num<std::size_t>(val, ln);
          inv = true;
        } else if (key == "resp") {
          m.response = num<std::size_t>(val, ln);
          resp = true;
        } else if (key == "ts") {
          m.ts = Timestamp{num<std::uint32_t>(val, ln)};
        } else if (key == "witness") {
          m.witness = Timestamp{num<std::uint32_t>(val, ln)};
        } else if (key == "tx") {
          m.t_x = Timestamp{num<std::uint32_t>(val, ln)};
        } else if (key == "ty") {
          m.t_y = Timestamp{num<std::uint32_t>(val, ln)};
        } else if (key == "result") {
          const auto comma = val.find(',');
          if (comma == std::string_view::npos) parse_error(ln, "result needs x,y");
          m.result = ValuePair{num<Value>(val.substr(0, comma), ln),
                               num<Value>(val.substr(comma + 1), ln)};
        } else {
          parse_error(ln, "unknown method field '" + std::string(key) + "'");
        }
      }
      if (!inv || !resp) parse_error(ln, "method record needs inv and resp");
      t.methods.push_back(m);
    } else if (kind == "sigma") {
      for (std::size_t k = 1; k < w.size(); ++k) {
        const auto c1 = w[k].find(':');
        const auto c2 = c1 == std::string_view::npos ? c1 : w[k].find(':', c1 + 1);
        if (c2 == std::string_view::npos) parse_error(ln, "sigma entries are t:p:v");
        SigmaEntry e;
        e.t = Timestamp{num<std::uint32_t>(w[k].substr(0, c1), ln)};
        e.ptr = parse_ptr(w[k].substr(c1 + 1, c2 - c1 - 1), ln);
        e.val = num<Value>(w[k].substr(c2 + 1), ln);
        t.sigma.push_back(e);
      }
    } else if (kind == "kappa") {
      if (w.size() - 1 != t.sigma.size()) parse_error(ln, "kappa must follow sigma entry for entry");
      for (std::size_t k = 1; k < w.size(); ++k) {
        const auto c = w[k].find(':');
        if (c == std::string_view::npos) parse_error(ln, "kappa entries are t:c");
        if (num<std::uint32_t>(w[k].substr(0, c), ln) != t.sigma[k - 1].t.value) {
          parse_error(ln, "kappa order differs from sigma");
        }
        t.sigma[k - 1].color = parse_color(w[k].substr(c + 1), ln);
      }
      have_kappa = true;
    } else if (kind == "violation") {
      if (w.size() < 4) parse_error(ln, "short violation record");
      Violation v;
      v.name = std::string(w[1]);
      v.step = num<std::size_t>(w[2], ln);
      const std::string_view at = value_of(w[3], "at", ln);
      if (at != "-") {
        std::size_t a = 0;
        while (a <= at.size()) {
          std::size_t b = at.find(',', a);
          if (b == std::string_view::npos) b = at.size();
          v.at.push_back(Timestamp{num<std::uint32_t>(at.substr(a, b - a), ln)});
          a = b + 1;
        }
      }
      const auto end_of_at = static_cast<std::size_t>(w[3].data() - line.data()) + w[3].size();
      v.detail = std::string(trim(line.substr(end_of_at)));
      t.violations.items().push_back(std::move(v));
    } else if (kind == "end") {
      ended = true;
    } else {
      parse_error(ln, "unknown record '" + std::string(kind) + "'");
    }
  }
  if (!ended) parse_error(0, "missing 'end'");
  if (!t.sigma.empty() && !have_kappa) parse_error(0, "sigma without kappa");
  return t;
}

std::string render_sigma_values(const Trace& trace) {
  std::string out;
  for (const Value v : trace.sigma_values()) {
    if (!out.empty()) out += ' ';
    out += std::to_string(v);
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParse, "cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kParse, "cannot write '" + path + "'");
  out << contents;
}

}  // namespace jsnap
