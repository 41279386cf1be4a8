#include "sonoloc/io/wav.hpp"

#include "sonoloc/errors.hpp"
#include "sonoloc/io/atomic_file.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <ostream>
#include <vector>

namespace sonoloc::io {

static_assert(std::endian::native == std::endian::little, "WAV I/O assumes a little-endian host");

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

template <typename T>
void put(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(const std::vector<char>& buf, std::size_t at) {
    if (at + sizeof(T) > buf.size()) throw FormatError("truncated WAV header");
    T v;
    std::memcpy(&v, buf.data() + at, sizeof(T));
    return v;
}

}  // namespace

void write_wav(const std::filesystem::path& path, const MultichannelRecording& recording) {
    recording.validate();
    const auto channels = static_cast<std::uint16_t>(recording.channel_count());
    const std::size_t frames = recording.length();
    const std::uint64_t data_bytes = static_cast<std::uint64_t>(frames) * channels * 4;
    if (data_bytes > 0xFFFFFFFFull - 64) throw InvalidArgument("recording too large for a WAV file");
    const auto rate = static_cast<std::uint32_t>(std::lround(recording.sample_rate));

    write_file_atomic(path, [&](std::ostream& out) {
        out.write("RIFF", 4);
        put<std::uint32_t>(out, static_cast<std::uint32_t>(4 + 8 + 16 + 8 + data_bytes));
        out.write("WAVE", 4);
        out.write("fmt ", 4);
        put<std::uint32_t>(out, 16);
        put<std::uint16_t>(out, kFormatFloat);
        put<std::uint16_t>(out, channels);
        put<std::uint32_t>(out, rate);
        put<std::uint32_t>(out, rate * channels * 4u);
        put<std::uint16_t>(out, static_cast<std::uint16_t>(channels * 4));
        put<std::uint16_t>(out, 32);
        out.write("data", 4);
        put<std::uint32_t>(out, static_cast<std::uint32_t>(data_bytes));
        std::vector<float> row(channels);
        for (std::size_t i = 0; i < frames; ++i) {
            for (std::size_t c = 0; c < channels; ++c) row[c] = recording.channels[c][i];
            out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size() * 4));
        }
    });
}

MultichannelRecording read_wav(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open WAV file: " + path.string());
    std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (buf.size() < 12 || std::memcmp(buf.data(), "RIFF", 4) != 0 || std::memcmp(buf.data() + 8, "WAVE", 4) != 0) {
        throw FormatError("not a RIFF/WAVE file: " + path.string());
    }
    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t rate = 0;
    bool have_fmt = false;
    std::size_t data_at = 0, data_len = 0;
    std::size_t at = 12;
    while (at + 8 <= buf.size()) {
        const std::string id(buf.data() + at, 4);
        const auto len = get<std::uint32_t>(buf, at + 4);
        const std::size_t body = at + 8;
        if (id == "fmt ") {
            format = get<std::uint16_t>(buf, body);
            channels = get<std::uint16_t>(buf, body + 2);
            rate = get<std::uint32_t>(buf, body + 4);
            bits = get<std::uint16_t>(buf, body + 14);
            if (format == kFormatExtensible) {
                if (len < 40) throw FormatError("short extensible fmt chunk");
                format = get<std::uint16_t>(buf, body + 24);
            }
            have_fmt = true;
        } else if (id == "data") {
            data_at = body;
            data_len = std::min<std::size_t>(len, buf.size() - body);
        }
        at = body + len + (len & 1u);
    }
    if (!have_fmt || data_at == 0) throw FormatError("WAV file lacks fmt or data chunk: " + path.string());
    if (channels == 0 || rate == 0) throw FormatError("WAV file has no channels or zero rate");
    const std::size_t width = bits / 8;
    const bool is_float = format == kFormatFloat && (bits == 32 || bits == 64);
    const bool is_pcm = format == kFormatPcm && (bits == 16 || bits == 24 || bits == 32);
    if (!is_float && !is_pcm) throw FormatError("unsupported WAV sample format: " + path.string());

    const std::size_t frames = data_len / (width * channels);
    MultichannelRecording rec;
    rec.sample_rate = rate;
    rec.channels.assign(channels, std::vector<float>(frames));
    const char* p = buf.data() + data_at;
    for (std::size_t i = 0; i < frames; ++i) {
        for (std::size_t c = 0; c < channels; ++c, p += width) {
            float v = 0.0f;
            if (is_float && bits == 32) {
                std::memcpy(&v, p, 4);
            } else if (is_float) {
                double d;
                std::memcpy(&d, p, 8);
                v = static_cast<float>(d);
            } else if (bits == 16) {
                std::int16_t s;
                std::memcpy(&s, p, 2);
                v = static_cast<float>(s / 32768.0);
            } else if (bits == 24) {
                std::int32_t s = (static_cast<unsigned char>(p[0])) | (static_cast<unsigned char>(p[1]) << 8) |
                                 (static_cast<std::int32_t>(static_cast<signed char>(p[2])) << 16);
                v = static_cast<float>(s / 8388608.0);
            } else {
                std::int32_t s;
                std::memcpy(&s, p, 4);
                v = static_cast<float>(s / 2147483648.0);
            }
            rec.channels[c][i] = v;
        }
    }
    rec.validate();
    return rec;
}

}  // namespace sonoloc::io
