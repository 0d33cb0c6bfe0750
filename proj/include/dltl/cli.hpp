#pragma once

#include <iosfwd>

namespace dltl {

// Entry point for the command-line tool; returns the process exit code.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace dltl
