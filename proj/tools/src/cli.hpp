#pragma once

#include <iosfwd>

namespace rankcount::tools {

/// Entry point of the `rankcount` command. Returns the process exit code:
/// 0 on success, 1 on a domain error, 2 on an I/O or usage error. Errors are
/// reported as one `error: ...` line on `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rankcount::tools
