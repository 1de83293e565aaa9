#pragma once

// Command-line front end: estimate, experiment, detect-orthogonal, topk.
//
// Exit codes: 0 success (tolerance met or orthogonality detected), 1 invalid
// input or failure, 2 iteration budget exhausted (estimate still printed).

#include <iosfwd>

namespace opnorm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitBudget = 2;

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace opnorm::cli
