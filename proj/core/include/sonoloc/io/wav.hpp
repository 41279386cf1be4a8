#pragma once

#include "sonoloc/recording.hpp"

#include <filesystem>

namespace sonoloc::io {

/// Interleaved 32-bit IEEE float WAV, written atomically.
void write_wav(const std::filesystem::path& path, const MultichannelRecording& recording);

/// Reads 16/24/32-bit PCM and 32/64-bit float WAV, including the extensible
/// header variant. PCM is scaled to [-1, 1). Throws FormatError.
MultichannelRecording read_wav(const std::filesystem::path& path);

}  // namespace sonoloc::io
