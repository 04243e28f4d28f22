#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace cimfem {

/// Flat "key = value" settings; '#' starts a comment, keys match the long CLI flags.
using KeyValueConfig = std::map<std::string, std::string>;

[[nodiscard]] KeyValueConfig parse_config(std::istream& in);
[[nodiscard]] KeyValueConfig load_config(const std::string& path);

/// Comma-separated list; each entry may also be a range "first:last:step".
[[nodiscard]] std::vector<double> parse_double_list(std::string_view text);
/// Comma-separated counts; entries may be powers "2^7" or ranges "first:last:step".
[[nodiscard]] std::vector<std::size_t> parse_count_list(std::string_view text);

}  // namespace cimfem
