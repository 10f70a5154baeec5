#pragma once

// Line-oriented text formats for programs, schedules and traces.
//
// Trace:
//   jsnap-trace 1
//   init <vx> <vy>
//   thread <name>: <call>; <call>
//   seed <n>                                    (optional)
//   schedule <name> <name> ...
//   step <k> <name> <label> phys=<hex> aux=<hex>
//   method <name> <i> <call> inv=<k> resp=<k> [ts=<t>] [result=<x>,<y>]
//          [witness=<t>] [tx=<t>] [ty=<t>]
//   sigma <t>:<p>:<v> ...
//   kappa <t>:<g|y|r> ...
//   violation <name> <step> at=<t>,<t>|- <detail>
//   end
//
// Program: optional "init <vx> <vy>", then one "<name>: <call>; ..." line per
// thread; '#' starts a comment. Schedule: whitespace-separated thread names.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "jsnap/trace.hpp"

namespace jsnap {

std::string render_call(const MethodCall& call);
MethodCall parse_call(std::string_view text);  // throws kParse

std::string render_program(const Program& prog);
Program parse_program(std::string_view text);  // throws kParse

std::string render_schedule(const Program& prog, const Schedule& sched);
// Unknown thread names raise kInvalidSchedule; malformed text kParse.
Schedule parse_schedule(const Program& prog, std::string_view text);

std::string render_trace(const Trace& trace);
// Empty or whitespace-only input yields an empty trace.
Trace parse_trace(std::string_view text);  // throws kParse

std::string render_sigma_values(const Trace& trace);  // e.g. "5 0 2 1 3"

std::string read_file(const std::string& path);  // throws kParse if unreadable
void write_file(const std::string& path, std::string_view contents);

}  // namespace jsnap
