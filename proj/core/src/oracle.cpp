#include "jsnap/oracle.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace jsnap {

namespace {

[[noreturn]] void incomplete(const std::string& why) {
  throw Error(ErrorCode::kIncompleteTrace, why);
}

}  // namespace

bool replay_sequential(std::span<const OpRecord> order,
                       std::optional<ValuePair> init) {
  std::optional<Value> x, y;
  if (init) {
    x = init->x;
    y = init->y;
  }
  for (const OpRecord& op : order) {
    if (op.call.is_write()) {
      (op.call.ptr == Ptr::X ? x : y) = op.call.value;
      continue;
    }
    if (!x || !y || !op.result || *op.result != ValuePair{*x, *y}) return false;
  }
  return true;
}

std::optional<std::vector<std::size_t>> linearizable(
    std::span<const OpRecord> ops, ValuePair init) {
  if (ops.size() > kMaxLinearizableOps) {
    throw Error(ErrorCode::kSizeLimit,
                std::to_string(ops.size()) + " operations exceed the limit of " +
                    std::to_string(kMaxLinearizableOps));
  }
  std::vector<std::size_t> perm(ops.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<OpRecord> ordered(ops.size());
  do {
    bool respects = true;
    for (std::size_t i = 0; i < perm.size() && respects; ++i) {
      for (std::size_t j = i + 1; j < perm.size() && respects; ++j) {
        respects = !precedes(ops[perm[j]], ops[perm[i]]);
      }
    }
    if (!respects) continue;
    for (std::size_t i = 0; i < perm.size(); ++i) ordered[i] = ops[perm[i]];
    if (replay_sequential(ordered, init)) return perm;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

std::vector<OpRecord> ops_of(const Trace& trace) {
  std::vector<OpRecord> out;
  out.reserve(trace.methods.size());
  for (const MethodRecord& m : trace.methods) {
    out.push_back({m.call, m.call.is_write() ? std::nullopt : m.result, m.invocation,
                   m.response});
  }
  return out;
}

bool validate_witness(const Trace& trace, std::string* why) {
  auto fail = [&](const std::string& reason) {
    if (why) *why = reason;
    return false;
  };
  if (trace.methods.size() != trace.program.num_calls()) {
    incomplete(std::to_string(trace.methods.size()) + " of " +
               std::to_string(trace.program.num_calls()) + " methods returned");
  }

  std::map<std::uint32_t, const MethodRecord*> writer_of;
  std::multimap<std::uint32_t, const MethodRecord*> scans_at;
  for (const MethodRecord& m : trace.methods) {
    if (m.call.is_write()) {
      if (!m.ts) incomplete("write without event timestamp");
      writer_of[m.ts->value] = &m;
    } else {
      if (!m.witness || !m.result) incomplete("scan without witness or result");
      scans_at.emplace(m.witness->value, &m);
    }
  }

  std::vector<OpRecord> order;
  std::size_t placed_scans = 0;
  std::size_t placed_writes = 0;
  for (const SigmaEntry& e : trace.sigma) {
    const auto w = writer_of.find(e.t.value);
    if (w != writer_of.end()) {
      const MethodRecord& m = *w->second;
      if (m.call.ptr != e.ptr || m.call.value != e.val) {
        return fail("sigma entry " + std::to_string(e.t.value) + " disagrees with its write");
      }
      order.push_back({m.call, std::nullopt, m.invocation, m.response});
      ++placed_writes;
    } else if (e.t.value <= 2) {
      // initializing write
      order.push_back(OpRecord::write(e.ptr, e.val, 0, 0));
    } else {
      incomplete("sigma entry " + std::to_string(e.t.value) + " has no completed write");
    }
    std::vector<const MethodRecord*> here;
    for (auto [it, end] = scans_at.equal_range(e.t.value); it != end; ++it) {
      here.push_back(it->second);
    }
    std::sort(here.begin(), here.end(), [](const MethodRecord* a, const MethodRecord* b) {
      return a->invocation < b->invocation;
    });
    for (const MethodRecord* s : here) {
      order.push_back({s->call, s->result, s->invocation, s->response});
      ++placed_scans;
    }
  }
  if (placed_scans != scans_at.size()) return fail("scan witness outside final sigma");
  if (placed_writes != writer_of.size()) {
    return fail("final sigma does not cover every completed write");
  }

  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      if (precedes(order[j], order[i])) {
        return fail("witness order places " + to_string(order[i].call) + " before " +
                    to_string(order[j].call) + ", which returned first");
      }
    }
  }
  if (!replay_sequential(order)) return fail("witness order does not replay");
  return true;
}

}  // namespace jsnap
