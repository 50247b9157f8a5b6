#pragma once

#include <iostream>

namespace fdgmaa {

/// Entry point of the command-line tool. Subcommands: run, verify, sweep.
/// Returns 0 on success, 1 when an audit fails and 2 on a configuration error.
int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout,
             std::ostream& err = std::cerr);

}  // namespace fdgmaa
