// cli.hpp — Subcommand front end: verify | compile | timing | protocol |
// fidelity | rwa-check. Exit codes: 0 all asserted tolerances met, 1 usage or
// validation error, 2 tolerance breach.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ioncav {

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

} // namespace ioncav
