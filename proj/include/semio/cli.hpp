#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace semio::cli {

// exit codes
inline constexpr int kOk = 0;
inline constexpr int kFails = 1;
inline constexpr int kInvalid = 2;
inline constexpr int kCap = 3;

// args exclude the program name; data goes to out (or --out), diagnostics to err
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace semio::cli
