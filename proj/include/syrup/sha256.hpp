#pragma once

#include <string>
#include <string_view>

namespace syrup {

/// SHA-256 (FIPS 180-4) of the input bytes, as a lowercase hex string.
/// Used for content-addressed cache filenames and calibrator fingerprints.
std::string sha256_hex(std::string_view data);

}  // namespace syrup
