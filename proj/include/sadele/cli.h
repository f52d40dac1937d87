#pragma once

#include <iosfwd>

namespace sadele::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitBackend = 2;

/// Entry point of the `sadele` tool. Data goes to `out`, diagnostics to
/// `err`; `in` is read when no --input is given.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace sadele::cli
