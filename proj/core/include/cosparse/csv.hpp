#pragma once

#include <string>
#include <vector>

namespace cosparse {

// Shortest representation that round-trips, always '.' as decimal separator
// regardless of locale. Used for every CSV the pipeline writes so reruns are
// byte-identical.
std::string format_double(double value);
std::string format_int(long long value);

std::string csv_line(const std::vector<std::string>& cells);

void write_csv(const std::string& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace cosparse
