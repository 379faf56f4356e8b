#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace aglab {

inline constexpr const char* kToolVersion = "0.1.0";

// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "AGLAB_OUT_DIR";

// Runs one subcommand. Exit codes: 0 success, 1 construction or evaluation
// failure, 2 usage or configuration error, 3 internal consistency failure.
// args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace aglab
