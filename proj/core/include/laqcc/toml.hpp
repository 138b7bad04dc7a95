#pragma once

#include <map>
#include <string>

namespace laqcc {

/// Minimal reader for flat TOML files: `key = value` lines, `#` comments,
/// numeric and quoted-string values. Enough for device parameter files.
std::map<std::string, std::string> read_flat_toml(const std::string &path);

}  // namespace laqcc
