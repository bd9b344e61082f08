#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

namespace sruq {

/// Shortest decimal string that round-trips the exact double value.
std::string format_double(double value);

double parse_double(const std::string& text, const std::string& context);

std::vector<std::string> split_csv_line(const std::string& line);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// FNV-1a 64-bit content hash, hex-encoded.
std::string fnv1a_hex(const std::string& content);

}  // namespace sruq
