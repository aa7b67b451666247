#pragma once

#include <string>
#include <vector>

namespace tsmstress {

// Shortest decimal string that parses back to exactly the same double.
std::string fmt_num(double v);
// Like fmt_num but drops a trailing ".0"-style tail for whole numbers.
std::string fmt_ms(double v);

std::vector<std::string> split(const std::string& s, char sep);
std::string trim(const std::string& s);

}  // namespace tsmstress
