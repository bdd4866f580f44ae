#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semio/workspace.hpp"

namespace semio {

struct ParseOptions {
  std::string file = "<input>";
  double eps = kDefaultEpsilon;
  std::uint64_t cap = kDefaultCap;
};

struct ParseResult {
  std::optional<Workspace> ws;
  std::vector<Diagnostic> diagnostics;  // empty iff ws is set
};

// never throws on malformed input; every problem becomes a diagnostic
ParseResult parse_spec(std::string_view text, const ParseOptions& opts = {});
// throws SpecError
Workspace load_spec(std::string_view text, const ParseOptions& opts = {});
Workspace load_spec_file(const std::string& path, ParseOptions opts = {});

}  // namespace semio
