#include <gtest/gtest.h>

#include <random>

#include "jsnap/harness.hpp"
#include "jsnap/trace_io.hpp"

namespace jsnap {
namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kSizeLimit;
}

TEST(TraceIo, DemoRoundTrip) {
  const Program prog = client_fig1();
  const Trace tr = run_schedule(prog, fig1_schedule(prog));
  const std::string text = render_trace(tr);
  EXPECT_EQ(parse_trace(text), tr);
  EXPECT_EQ(render_trace(parse_trace(text)), text);
  EXPECT_EQ(render_sigma_values(tr), "5 0 2 1 3");
}

TEST(TraceIo, RandomRunsRoundTrip) {
  const std::vector<Program> programs = generated_programs();
  std::mt19937_64 rng(99);
  for (int n = 0; n < 200; ++n) {
    const Program& prog = programs[rng() % programs.size()];
    Execution ex(prog);
    while (!ex.finished()) {
      const auto next = ex.enabled_threads();
      ex.advance(next[rng() % next.size()]);
    }
    ex.complete();
    Trace tr = ex.trace();
    tr.seed = n;
    ASSERT_EQ(parse_trace(render_trace(tr)), tr) << prog.describe();
  }
}

TEST(TraceIo, ViolationsRoundTrip) {
  Trace tr;
  tr.program = client_e_prime();
  tr.violations.add("colors", "hist_x colored grg", {Timestamp{3}, Timestamp{4}});
  tr.violations.add("deadlock", "no thread can move");
  tr.violations.set_step(7);
  EXPECT_EQ(parse_trace(render_trace(tr)), tr);
}

TEST(TraceIo, EmptyInputIsAnEmptyTrace) {
  EXPECT_EQ(parse_trace(""), Trace{});
  EXPECT_EQ(parse_trace("  \n\n"), Trace{});
}

TEST(TraceIo, MalformedTraceIsAParseError) {
  EXPECT_EQ(code_of([] { parse_trace("jsnap-trace 1\ninit five 0\nend\n"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { parse_trace("not a trace\n"); }), ErrorCode::kParse);
  const Program prog = client_fig1();
  std::string text = render_trace(run_schedule(prog, fig1_schedule(prog)));
  text.resize(text.size() / 2);
  EXPECT_EQ(code_of([&] { parse_trace(text); }), ErrorCode::kParse);
}

TEST(ProgramIo, RoundTripAndComments) {
  const Program p = parse_program("init 4 6\n# comment\nl: write x 2; write y 1\nc: scan\n");
  EXPECT_EQ(p.init_x, 4);
  EXPECT_EQ(p.init_y, 6);
  ASSERT_EQ(p.threads.size(), 2u);
  EXPECT_EQ(p.threads[0].calls[1], MethodCall::write(Ptr::Y, 1));
  EXPECT_EQ(parse_program(render_program(p)), p);
  for (const Program& g : generated_programs()) ASSERT_EQ(parse_program(render_program(g)), g);
}

TEST(ProgramIo, Errors) {
  EXPECT_EQ(code_of([] { parse_program("l: write z 2\n"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { parse_program("l write x 2\n"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { parse_call("read x"); }), ErrorCode::kParse);
}

TEST(ScheduleIo, NamesAndErrors) {
  const Program prog = client_fig1();
  const Schedule s = fig1_schedule(prog);
  EXPECT_EQ(render_schedule(prog, s), "c c c c c l l l l r l l l l c r r c c c");
  EXPECT_EQ(parse_schedule(prog, render_schedule(prog, s)), s);
  EXPECT_EQ(code_of([&] { parse_schedule(prog, "c c q"); }), ErrorCode::kInvalidSchedule);
}

}  // namespace
}  // namespace jsnap
