#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dosnet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInput = 3;
inline constexpr int kExitNonConvergence = 4;

inline constexpr const char* kToolVersion = "0.1.0";

/// Runs one `dosnet` invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Lower-case hex SHA-256 of a file's bytes.
std::string file_sha256(const std::string& path);

}  // namespace dosnet::cli
