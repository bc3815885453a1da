#pragma once

#include <string>
#include <vector>

namespace rta {

/// Temp-file-plus-rename write; a killed run never leaves a truncated file
/// at the target path.
void atomic_write_file(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);
std::vector<std::string> read_lines(const std::string& path);

std::string timestamp_iso8601();

}  // namespace rta
