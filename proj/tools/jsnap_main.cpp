// jsnap: explore, replay and check executions of the instrumented two-pointer
// snapshot object.
//
// Exit codes: 0 ok, 1 violation found, 2 state budget exceeded, 3 invalid
// schedule, 4 parse error.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "jsnap/harness.hpp"
#include "jsnap/oracle.hpp"
#include "jsnap/trace_io.hpp"

namespace {

using namespace jsnap;

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kBudget = 2;
constexpr int kSchedule = 3;
constexpr int kParseFail = 4;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse:
    case ErrorCode::kValueOutOfDomain:
      return kParseFail;
    case ErrorCode::kInvalidSchedule:
    case ErrorCode::kDisabledStep:
      return kSchedule;
    case ErrorCode::kBudgetExceeded:
      return kBudget;
    default:
      return kViolation;
  }
}

Program client_named(const std::string& name) {
  if (name == "e") return client_e();
  if (name == "e-prime") return client_e_prime();
  if (name == "fig1") return client_fig1();
  throw Error(ErrorCode::kParse, "unknown client '" + name + "'");
}

Program load_program(const std::string& client, const std::string& file) {
  if (!file.empty()) return parse_program(read_file(file));
  return client_named(client.empty() ? "e" : client);
}

std::string result_set(const std::set<ValuePair>& results) {
  std::string out = "{";
  for (const ValuePair r : results) {
    if (out.size() > 1) out += ',';
    out += to_string(r);
  }
  return out + "}";
}

int print_report(const Program& prog, const ExplorationReport& rep) {
  std::cout << "program: " << prog.describe() << '\n'
            << "schedules: " << rep.schedules << '\n'
            << "states: " << rep.states << '\n'
            << "results: " << result_set(rep.results) << '\n'
            << "checks: transitions=" << rep.stats.transitions
            << " write-returns=" << rep.stats.write_returns
            << " scan-returns=" << rep.stats.scan_returns << " relinks=" << rep.stats.relinks
            << " executions=" << rep.stats.completed << '\n'
            << "violations: " << rep.violation_count << '\n';
  std::cout << rep.violations.render();
  return rep.ok() ? kOk : kViolation;
}

std::string linearization_text(const std::vector<OpRecord>& ops,
                               const std::vector<std::size_t>& order) {
  std::string out;
  for (const std::size_t i : order) {
    if (!out.empty()) out += "; ";
    out += render_call(ops[i].call);
  }
  return out;
}

// Both oracle checks on a trace; prints one line per check.
bool oracle_verdict(const Trace& trace) {
  bool ok = true;
  const std::vector<OpRecord> ops = ops_of(trace);
  if (ops.size() <= kMaxLinearizableOps) {
    const auto order = linearizable(ops, {trace.program.init_x, trace.program.init_y});
    if (order) {
      std::cout << "linearizable: " << linearization_text(ops, *order) << '\n';
    } else {
      std::cout << "linearizable: no\n";
      ok = false;
    }
  } else {
    std::cout << "linearizable: skipped (" << ops.size() << " operations)\n";
  }
  std::string why;
  bool valid = false;
  try {
    valid = validate_witness(trace, &why);
  } catch (const Error& e) {
    why = e.what();
  }
  std::cout << "witness: " << (valid ? "valid" : "invalid: " + why) << '\n';
  return ok && valid;
}

void emit(const Trace& trace, const std::string& out) {
  if (!out.empty()) write_file(out, render_trace(trace));
}

void print_scans(const Trace& trace) {
  for (const MethodRecord& m : trace.methods) {
    if (m.result) std::cout << trace.program.threads[m.tid].name << ": scan -> " << to_string(*m.result) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"jsnap: exhaustive checking of an instrumented snapshot object"};
  app.require_subcommand(1);

  std::string client, program_file, schedule_file, out_file, trace_file;
  std::uint64_t max_states = ExploreOptions{}.max_states;
  std::uint64_t seed = 1;
  std::size_t runs = 1000;

  auto* explore_cmd = app.add_subcommand("explore", "exhaustively explore all interleavings");
  auto* ex_client = explore_cmd->add_option("--client", client, "bundled client")
                        ->check(CLI::IsMember({"e", "e-prime", "fig1"}));
  explore_cmd->add_option("--program", program_file, "program file")->excludes(ex_client);
  explore_cmd->add_option("--max-states", max_states, "distinct-state budget");

  auto* random_cmd = app.add_subcommand("random", "seeded random schedules");
  auto* rn_client = random_cmd->add_option("--client", client, "bundled client")
                        ->check(CLI::IsMember({"e", "e-prime", "fig1"}));
  random_cmd->add_option("--program", program_file, "program file")->excludes(rn_client);
  random_cmd->add_option("--seed", seed, "generator seed");
  random_cmd->add_option("--runs", runs, "number of executions");

  auto* sweep_cmd = app.add_subcommand("sweep", "explore every generated small program");
  sweep_cmd->add_option("--max-states", max_states, "distinct-state budget per program");
  bool verbose = false;
  sweep_cmd->add_flag("--verbose", verbose, "one line per program");

  auto* replay_cmd = app.add_subcommand("replay", "replay one schedule");
  auto* rp_client = replay_cmd->add_option("--client", client, "bundled client")
                        ->check(CLI::IsMember({"e", "e-prime", "fig1"}));
  replay_cmd->add_option("--program", program_file, "program file")->excludes(rp_client);
  replay_cmd->add_option("--schedule", schedule_file, "schedule file")->required();
  replay_cmd->add_option("--out", out_file, "write the trace here");

  auto* demo_cmd = app.add_subcommand("demo-fig1", "replay the bundled 20-step interleaving");
  demo_cmd->add_option("--out", out_file, "write the trace here");

  auto* check_cmd = app.add_subcommand("check", "run the oracle on a trace file");
  check_cmd->add_option("--trace", trace_file, "trace file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kParseFail;
  }

  try {
    if (*explore_cmd) {
      const Program prog = load_program(client, program_file);
      ExploreOptions opt;
      opt.max_states = max_states;
      return print_report(prog, explore(prog, opt));
    }
    if (*random_cmd) {
      const Program prog = load_program(client, program_file);
      return print_report(prog, run_random(prog, seed, runs));
    }
    if (*sweep_cmd) {
      ExploreOptions opt;
      opt.max_states = max_states;
      std::uint64_t schedules = 0, states = 0, violations = 0;
      const auto progs = generated_programs();
      for (const Program& prog : progs) {
        const ExplorationReport rep = explore(prog, opt);
        schedules += rep.schedules;
        states += rep.states;
        violations += rep.violation_count;
        if (verbose) {
          std::cout << rep.states << ' ' << rep.schedules << ' ' << prog.describe() << std::endl;
        }
        if (!rep.ok()) {
          std::cout << "program: " << prog.describe() << '\n' << rep.violations.render();
        }
      }
      std::cout << "programs: " << progs.size() << '\n'
                << "schedules: " << schedules << '\n'
                << "states: " << states << '\n'
                << "violations: " << violations << '\n';
      return violations == 0 ? kOk : kViolation;
    }
    if (*replay_cmd) {
      const Program prog = load_program(client.empty() && program_file.empty() ? "fig1" : client,
                                        program_file);
      const Schedule sched = parse_schedule(prog, read_file(schedule_file));
      const Trace trace = run_schedule(prog, sched);
      emit(trace, out_file);
      if (out_file.empty()) std::cout << render_trace(trace);
      else print_scans(trace);
      std::cout << "sigma: " << render_sigma_values(trace) << '\n';
      std::cout << trace.violations.render();
      return trace.violations.empty() ? kOk : kViolation;
    }
    if (*demo_cmd) {
      const Program prog = client_fig1();
      const Trace trace = run_schedule(prog, fig1_schedule(prog));
      emit(trace, out_file);
      std::optional<ValuePair> r;
      for (const MethodRecord& m : trace.methods) {
        if (m.result) r = m.result;
      }
      std::cout << (r ? to_string(*r) : std::string("no scan")) << '\n';
      std::cout << "sigma: " << render_sigma_values(trace) << '\n';
      const bool oracle_ok = oracle_verdict(trace);
      std::cout << trace.violations.render();
      const bool expected = r == ValuePair{2, 1} &&
                            trace.sigma_values() == std::vector<Value>{5, 0, 2, 1, 3};
      return expected && oracle_ok && trace.violations.empty() ? kOk : kViolation;
    }
    if (*check_cmd) {
      const Trace trace = parse_trace(read_file(trace_file));
      return oracle_verdict(trace) ? kOk : kViolation;
    }
  } catch (const Error& e) {
    std::cerr << "jsnap: " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  }
  return kOk;
}
