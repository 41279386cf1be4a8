#pragma once

#include "sonoloc/dsp/mel.hpp"

#include <filesystem>

namespace sonoloc::io {

/// `<stem>.bin` holds little-endian float32 frames x mels, row-major; the
/// `<stem>.json` sidecar carries the spectrogram config. Returns the sidecar path.
std::filesystem::path write_mel(const std::filesystem::path& stem, const dsp::MelSpectrogram& mel,
                                const dsp::SpectrogramConfig& config);

dsp::MelSpectrogram read_mel(const std::filesystem::path& sidecar);

}  // namespace sonoloc::io
