#pragma once

#include <iosfwd>
#include <string>

#include "tpskit/core.hpp"

namespace tpskit {

/// Exit status: 0 success, 1 verification failure, 2 input error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Parses "eig=..,rank=..,res=.." (any subset, any order) over the defaults.
Tolerance parse_tolerance(const std::string& spec);

/// Errors caused by the caller's data rather than by a failed verification.
bool is_input_error(ErrorKind kind);

}  // namespace tpskit
