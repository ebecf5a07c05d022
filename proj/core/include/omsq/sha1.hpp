#pragma once

#include <cstdint>
#include <string>

namespace omsq {

// SHA-1 digest as a lowercase hex string.
std::string sha1_hex(const std::string& data);

// Hash of a blob the way git computes it: sha1("blob <len>\0" + data).
std::string git_blob_hash(const std::string& data);

} // namespace omsq
