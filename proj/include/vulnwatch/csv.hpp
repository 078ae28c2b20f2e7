#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace vulnwatch {

/// RFC 4180-style reader: quoted fields may contain the delimiter, doubled
/// quotes, and embedded newlines. Handles \r\n line endings.
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path,
                                               char delimiter = ',');

/// Quote a field for CSV output when it needs quoting.
std::string csv_escape(const std::string& field, char delimiter = ',');

}  // namespace vulnwatch
