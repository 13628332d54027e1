#pragma once

#include <ostream>

namespace casimir::cli {

// Exit status of run().
enum Exit : int { kOk = 0, kNotConverged = 1, kUsage = 2 };

/// Parses argv, computes the requested table and writes it to `out` (or the
/// --out file). Diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace casimir::cli
