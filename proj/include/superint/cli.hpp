#pragma once

#include <ostream>

namespace superint::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitTolerance = 2;
inline constexpr int kExitInvalid = 3;

// the superint command line; reports go to out, diagnostics to err
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace superint::cli
