#pragma once

#include <ostream>

namespace mathcast {

// Exit codes: 0 done (failed cases included), 1 input rejected
// (untranslatable expression, incomplete coverage), 2 configuration
// error, 3 backend failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mathcast
