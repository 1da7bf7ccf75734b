#pragma once

#include <string>

#include "scan/pipeline.hpp"

namespace scan {

/// Model artifact container: magic, format version, length-prefixed payload
/// and a trailing CRC-32 of the payload. Loading verifies magic, version
/// and checksum before any state is constructed; saving is atomic.
void save_model(const Pipeline& pipeline, const std::string& path);
Pipeline load_model(const std::string& path);

constexpr std::uint32_t kArtifactVersion = 1;

} // namespace scan
