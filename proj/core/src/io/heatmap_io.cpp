#include "sonoloc/io/heatmap_io.hpp"

#include "sonoloc/errors.hpp"
#include "sonoloc/io/atomic_file.hpp"
#include "sonoloc/io/json_codec.hpp"

#include <fstream>
#include <vector>

namespace sonoloc::io {

namespace fs = std::filesystem;

namespace {

std::vector<float> read_floats(const fs::path& path, std::size_t count) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open: " + path.string());
    std::vector<float> v(count);
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(count * sizeof(float)));
    if (in.gcount() != static_cast<std::streamsize>(count * sizeof(float))) {
        throw FormatError("binary payload shorter than declared: " + path.string());
    }
    if (in.peek() != std::char_traits<char>::eof()) throw FormatError("binary payload longer than declared: " + path.string());
    return v;
}

}  // namespace

fs::path write_heatmap(const fs::path& stem, const beamform::AcousticHeatmap& heatmap) {
    heatmap.validate();
    fs::path bin = stem, side = stem;
    bin += ".bin";
    side += ".json";
    std::vector<float> data(heatmap.values.begin(), heatmap.values.end());
    write_file_atomic(bin, std::string_view(reinterpret_cast<const char*>(data.data()), data.size() * sizeof(float)));
    const Json j = {{"format", "sonoloc-heatmap"},
                    {"dtype", "float32-le"},
                    {"layout", "row-major ny x nx"},
                    {"data", bin.filename().string()},
                    {"grid", grid_to_json(heatmap.grid)},
                    {"time_window", {heatmap.time_window.start, heatmap.time_window.end}},
                    {"video_frame", heatmap.video_frame},
                    {"normalized", heatmap.normalized}};
    write_json_file(side, j);
    return side;
}

beamform::AcousticHeatmap read_heatmap(const fs::path& sidecar) {
    const Json j = read_json_file(sidecar);
    beamform::AcousticHeatmap h;
    try {
        if (j.value("dtype", "float32-le") != "float32-le") throw FormatError("unsupported heatmap dtype");
        h.grid = grid_from_json(j.at("grid"));
        const auto tw = j.at("time_window").get<std::vector<double>>();
        if (tw.size() != 2) throw FormatError("time_window needs two values");
        h.time_window = {tw[0], tw[1]};
        h.video_frame = j.at("video_frame").get<std::int64_t>();
        h.normalized = j.at("normalized").get<bool>();
        const fs::path data = sidecar.parent_path() / j.at("data").get<std::string>();
        const std::vector<float> v = read_floats(data, h.grid.cells());
        h.values.assign(v.begin(), v.end());
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(sidecar.string() + ": " + e.what());
    }
    try {
        h.validate();
    } catch (const std::exception& e) {
        throw FormatError(sidecar.string() + ": " + e.what());
    }
    return h;
}

beamform::AcousticHeatmap quantize_heatmap(beamform::AcousticHeatmap heatmap) {
    for (double& v : heatmap.values) v = static_cast<float>(v);
    return heatmap;
}

}  // namespace sonoloc::io
