#include "sonoloc/io/mel_io.hpp"

#include "sonoloc/errors.hpp"
#include "sonoloc/io/atomic_file.hpp"
#include "sonoloc/io/json_codec.hpp"

#include <fstream>
#include <vector>

namespace sonoloc::io {

namespace fs = std::filesystem;

fs::path write_mel(const fs::path& stem, const dsp::MelSpectrogram& mel, const dsp::SpectrogramConfig& config) {
    fs::path bin = stem, side = stem;
    bin += ".bin";
    side += ".json";
    std::vector<float> data(mel.values.begin(), mel.values.end());
    write_file_atomic(bin, std::string_view(reinterpret_cast<const char*>(data.data()), data.size() * sizeof(float)));
    const Json j = {{"format", "sonoloc-mel"},
                    {"dtype", "float32-le"},
                    {"layout", "row-major frames x mels"},
                    {"data", bin.filename().string()},
                    {"frames", mel.n_frames},
                    {"mels", mel.n_mels},
                    {"origin_time", mel.origin_time},
                    {"config", spectrogram_to_json(config)}};
    write_json_file(side, j);
    return side;
}

dsp::MelSpectrogram read_mel(const fs::path& sidecar) {
    const Json j = read_json_file(sidecar);
    dsp::MelSpectrogram mel;
    try {
        const dsp::SpectrogramConfig config = spectrogram_from_json(j.at("config"));
        mel.n_frames = j.at("frames").get<std::size_t>();
        mel.n_mels = j.at("mels").get<std::size_t>();
        mel.hop_len = config.hop_len;
        mel.origin_time = j.value("origin_time", 0.0);
        const fs::path data = sidecar.parent_path() / j.at("data").get<std::string>();
        std::ifstream in(data, std::ios::binary);
        if (!in) throw FormatError("cannot open: " + data.string());
        std::vector<float> v(mel.n_frames * mel.n_mels);
        in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(float)));
        if (in.gcount() != static_cast<std::streamsize>(v.size() * sizeof(float))) {
            throw FormatError("mel payload shorter than declared: " + data.string());
        }
        mel.values.assign(v.begin(), v.end());
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(sidecar.string() + ": " + e.what());
    }
    return mel;
}

}  // namespace sonoloc::io
