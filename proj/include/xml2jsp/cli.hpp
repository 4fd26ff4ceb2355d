#pragma once

#include <ostream>

namespace xml2jsp {

enum ExitCode : int { ExitSuccess = 0, ExitErrors = 1, ExitUsage = 2 };

/// The xml2jsp command. The success banner goes to `out`, diagnostics and
/// usage errors to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace xml2jsp
