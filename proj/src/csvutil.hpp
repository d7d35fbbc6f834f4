#ifndef HOLTERISK_CSVUTIL_HPP
#define HOLTERISK_CSVUTIL_HPP

#include <optional>
#include <string>
#include <vector>

namespace holterisk {

// Minimal CSV helpers. Cells are taken verbatim (no quoting support);
// writers reject cells that would need it.

std::vector<std::string> split_csv_line(const std::string& line);

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

// Full-string parse; nullopt on anything that is not a finite decimal.
std::optional<double> parse_double(const std::string& s);

std::optional<long long> parse_int(const std::string& s);

std::string trim(const std::string& s);

} // namespace holterisk

#endif
