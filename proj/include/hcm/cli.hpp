#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hcm {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInvariant = 3;

// Entry point of hcm_sim; args exclude the program name. Writes artifacts
// plus manifest.json into the output directory and returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hcm
