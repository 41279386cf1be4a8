#include "sonoloc/io/atomic_file.hpp"

#include "sonoloc/errors.hpp"

#include <fstream>
#include <sstream>

namespace sonoloc::io {

namespace fs = std::filesystem;

void write_file_atomic(const fs::path& path, const std::function<void(std::ostream&)>& writer) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw FormatError("cannot open for writing: " + tmp.string());
        try {
            writer(out);
        } catch (...) {
            out.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            throw;
        }
        out.flush();
        if (!out) {
            out.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            throw FormatError("write failed: " + path.string());
        }
    }
    fs::rename(tmp, path);
}

void write_file_atomic(const fs::path& path, std::string_view contents) {
    write_file_atomic(path, [&](std::ostream& out) { out.write(contents.data(), static_cast<std::streamsize>(contents.size())); });
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

OutputSet::~OutputSet() {
    if (committed_) return;
    for (const fs::path& p : paths_) {
        std::error_code ec;
        fs::remove(p, ec);
    }
}

const fs::path& OutputSet::add(const fs::path& path) {
    paths_.push_back(path);
    return paths_.back();
}

}  // namespace sonoloc::io
