#include "sonoloc/io/ply.hpp"

#include "sonoloc/errors.hpp"
#include "sonoloc/io/atomic_file.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace sonoloc::io {

namespace {

// Shortest text that reads back as the same float.
void put_float(std::string& line, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), static_cast<float>(v));
    line.append(buf, res.ptr);
}

struct VertexTable {
    std::vector<std::string> names;
    std::vector<bool> single;  // declared as float
    std::vector<std::vector<double>> rows;

    int column(const std::string& name) const {
        const auto it = std::find(names.begin(), names.end(), name);
        return it == names.end() ? -1 : static_cast<int>(it - names.begin());
    }
};

VertexTable read_vertices(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open PLY file: " + path.string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("ply", 0) != 0) throw FormatError("missing PLY magic: " + path.string());
    VertexTable t;
    std::size_t count = 0;
    bool in_vertex = false, seen_vertex = false;
    std::size_t elements_before_vertex = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ss(line);
        std::string word;
        ss >> word;
        if (word == "format") {
            std::string fmt;
            ss >> fmt;
            if (fmt != "ascii") throw FormatError("only ASCII PLY is supported: " + path.string());
        } else if (word == "element") {
            std::string name;
            std::size_t n = 0;
            ss >> name >> n;
            in_vertex = name == "vertex";
            if (in_vertex) {
                count = n;
                seen_vertex = true;
            } else if (!seen_vertex) {
                ++elements_before_vertex;
            }
        } else if (word == "property" && in_vertex) {
            std::string type, name;
            ss >> type;
            if (type == "list") throw FormatError("list properties on vertices are not supported");
            ss >> name;
            t.names.push_back(name);
            t.single.push_back(type == "float" || type == "float32");
        } else if (word == "end_header") {
            break;
        }
    }
    if (!seen_vertex) throw FormatError("PLY file has no vertex element: " + path.string());
    if (elements_before_vertex > 0) throw FormatError("vertex must be the first PLY element: " + path.string());
    t.rows.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (!std::getline(in, line)) throw FormatError("PLY vertex data truncated: " + path.string());
        std::vector<double> row(t.names.size());
        const char* p = line.data();
        const char* end = line.data() + line.size();
        for (std::size_t c = 0; c < row.size(); ++c) {
            while (p < end && (*p == ' ' || *p == '\t')) ++p;
            const auto res = std::from_chars(p, end, row[c]);
            if (res.ec != std::errc()) throw FormatError("bad PLY vertex value in " + path.string());
            if (t.single[c]) row[c] = static_cast<float>(row[c]);
            p = res.ptr;
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace

void write_ply(const std::filesystem::path& path, const fusion::PointCloud& cloud) {
    cloud.validate();
    const bool colored = !cloud.colors.empty();
    write_file_atomic(path, [&](std::ostream& out) {
        out << "ply\nformat ascii 1.0\nelement vertex " << cloud.size() << "\n";
        out << "property float x\nproperty float y\nproperty float z\n";
        if (colored) out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
        out << "end_header\n";
        std::string line;
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            line.clear();
            for (int a = 0; a < 3; ++a) {
                if (a) line += ' ';
                put_float(line, cloud.points[i][a]);
            }
            if (colored) {
                for (int c = 0; c < 3; ++c) {
                    line += ' ';
                    line += std::to_string(cloud.colors[i][c]);
                }
            }
            line += '\n';
            out << line;
        }
    });
}

void write_weighted_ply(const std::filesystem::path& path, const fusion::WeightedPointCloud& cloud) {
    cloud.validate();
    write_file_atomic(path, [&](std::ostream& out) {
        out << "ply\nformat ascii 1.0\ncomment source_frame " << cloud.source_frame << "\nelement vertex "
            << cloud.size() << "\n";
        out << "property float x\nproperty float y\nproperty float z\nproperty float weight\nend_header\n";
        std::string line;
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            line.clear();
            for (int a = 0; a < 3; ++a) {
                put_float(line, cloud.points[i][a]);
                line += ' ';
            }
            put_float(line, cloud.weights[i]);
            line += '\n';
            out << line;
        }
    });
}

fusion::PointCloud read_ply(const std::filesystem::path& path) {
    const VertexTable t = read_vertices(path);
    const int x = t.column("x"), y = t.column("y"), z = t.column("z");
    if (x < 0 || y < 0 || z < 0) throw FormatError("PLY vertices need x, y, z: " + path.string());
    const int r = t.column("red"), g = t.column("green"), b = t.column("blue");
    const bool colored = r >= 0 && g >= 0 && b >= 0;
    fusion::PointCloud cloud;
    cloud.points.reserve(t.rows.size());
    for (const auto& row : t.rows) {
        cloud.points.emplace_back(row[x], row[y], row[z]);
        if (colored) {
            cloud.colors.push_back({static_cast<std::uint8_t>(row[r]), static_cast<std::uint8_t>(row[g]),
                                    static_cast<std::uint8_t>(row[b])});
        }
    }
    return cloud;
}

fusion::WeightedPointCloud read_weighted_ply(const std::filesystem::path& path) {
    const VertexTable t = read_vertices(path);
    const int x = t.column("x"), y = t.column("y"), z = t.column("z"), w = t.column("weight");
    if (x < 0 || y < 0 || z < 0 || w < 0) throw FormatError("weighted PLY needs x, y, z, weight: " + path.string());
    fusion::WeightedPointCloud cloud;
    cloud.points.reserve(t.rows.size());
    cloud.weights.reserve(t.rows.size());
    for (const auto& row : t.rows) {
        cloud.points.emplace_back(row[x], row[y], row[z]);
        cloud.weights.push_back(row[w]);
    }
    // The frame index travels in a header comment; absent in foreign files.
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line) && line.rfind("end_header", 0) != 0) {
        if (line.rfind("comment source_frame ", 0) == 0) cloud.source_frame = std::stoll(line.substr(21));
    }
    cloud.validate();
    return cloud;
}

}  // namespace sonoloc::io
