#pragma once

#include <ostream>

namespace conekit {

/// Entry point of the conekit executable. Exit codes: 0 decided (or some cone
/// identified), 2 inconclusive / nothing identified, 1 on error.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace conekit
