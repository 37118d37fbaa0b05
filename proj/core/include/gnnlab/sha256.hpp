#pragma once

#include <string>

namespace gnnlab {

/// Hex SHA-256 digest of a byte string; used to pin input files in manifests.
std::string sha256_hex(const std::string& bytes);

std::string sha256_file(const std::string& path);

}  // namespace gnnlab
