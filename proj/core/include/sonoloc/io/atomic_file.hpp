#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace sonoloc::io {

/// Writes to a sibling temporary file and renames it over `path`, so readers
/// never observe a partially written file. Parent directories are created.
void write_file_atomic(const std::filesystem::path& path, const std::function<void(std::ostream&)>& writer);
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_text_file(const std::filesystem::path& path);

/// Tracks the files a command produces and deletes them again unless
/// commit() is reached, so a failing stage leaves no partial outputs behind.
class OutputSet {
public:
    OutputSet() = default;
    OutputSet(const OutputSet&) = delete;
    OutputSet& operator=(const OutputSet&) = delete;
    ~OutputSet();

    /// Registers `path` and returns it for chaining into a writer call.
    const std::filesystem::path& add(const std::filesystem::path& path);
    void commit() { committed_ = true; }

private:
    std::vector<std::filesystem::path> paths_;
    bool committed_ = false;
};

}  // namespace sonoloc::io
