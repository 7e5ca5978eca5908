#pragma once

#include <string>

namespace srgkit::cli {

/// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(const std::string& data);

}  // namespace srgkit::cli
