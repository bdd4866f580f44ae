#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "semio/workspace.hpp"

namespace semio {

std::string print_spec(const Workspace& ws);

// header = port names + "value"; lexicographic rows; 9 significant digits
void emit_csv(const MultiMorphism& m, std::ostream& out);
std::string emit_csv(const MultiMorphism& m);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
// comma separated with double-quote escaping; blank lines skipped
CsvTable read_csv(const std::string& text);

}  // namespace semio
