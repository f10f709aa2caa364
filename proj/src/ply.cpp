#include "tripreg/ply.hpp"

#include "tripreg/error.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace tripreg {
namespace {

enum class Scalar { Int8, UInt8, Int16, UInt16, Int32, UInt32, Float32, Float64 };

std::optional<Scalar> parse_scalar(const std::string& name) {
    if (name == "char" || name == "int8") return Scalar::Int8;
    if (name == "uchar" || name == "uint8") return Scalar::UInt8;
    if (name == "short" || name == "int16") return Scalar::Int16;
    if (name == "ushort" || name == "uint16") return Scalar::UInt16;
    if (name == "int" || name == "int32") return Scalar::Int32;
    if (name == "uint" || name == "uint32") return Scalar::UInt32;
    if (name == "float" || name == "float32") return Scalar::Float32;
    if (name == "double" || name == "float64") return Scalar::Float64;
    return std::nullopt;
}

std::size_t scalar_size(Scalar s) {
    switch (s) {
    case Scalar::Int8:
    case Scalar::UInt8: return 1;
    case Scalar::Int16:
    case Scalar::UInt16: return 2;
    case Scalar::Int32:
    case Scalar::UInt32:
    case Scalar::Float32: return 4;
    case Scalar::Float64: return 8;
    }
    return 0;
}

struct Property {
    std::string name;
    Scalar type = Scalar::Float32;
    bool is_list = false;
    Scalar count_type = Scalar::UInt8;
};

struct Element {
    std::string name;
    std::size_t count = 0;
    std::vector<Property> properties;
};

enum class Format { Ascii, BinaryLittleEndian };

struct Header {
    Format format = Format::Ascii;
    std::vector<Element> elements;
    std::optional<Vec3> viewpoint;
};

[[noreturn]] void parse_error(const std::string& msg) { throw Error(ErrorKind::Parse, "PLY: " + msg); }

Header read_header(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.substr(0, 3) != "ply") parse_error("missing 'ply' magic on line 1");
    Header header;
    bool have_format = false;
    std::size_t line_no = 1;
    while (true) {
        if (!std::getline(in, line)) parse_error("header ends before end_header (line " + std::to_string(line_no) + ")");
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string word;
        ls >> word;
        if (word.empty() || word == "obj_info") continue;
        if (word == "end_header") break;
        if (word == "comment") {
            std::string tag;
            ls >> tag;
            if (tag == "viewpoint") {
                Vec3 v;
                if (!(ls >> v.x() >> v.y() >> v.z())) parse_error("bad viewpoint comment on line " + std::to_string(line_no));
                header.viewpoint = v;
            }
            continue;
        }
        if (word == "format") {
            std::string fmt, version;
            ls >> fmt >> version;
            if (fmt == "ascii") header.format = Format::Ascii;
            else if (fmt == "binary_little_endian") header.format = Format::BinaryLittleEndian;
            else parse_error("unsupported format '" + fmt + "' on line " + std::to_string(line_no));
            have_format = true;
        } else if (word == "element") {
            Element e;
            long long count = -1;
            if (!(ls >> e.name >> count) || count < 0) parse_error("bad element declaration on line " + std::to_string(line_no));
            e.count = static_cast<std::size_t>(count);
            header.elements.push_back(std::move(e));
        } else if (word == "property") {
            if (header.elements.empty()) parse_error("property before any element on line " + std::to_string(line_no));
            Property p;
            std::string type;
            ls >> type;
            if (type == "list") {
                std::string count_type, item_type;
                ls >> count_type >> item_type >> p.name;
                const auto ct = parse_scalar(count_type);
                const auto it = parse_scalar(item_type);
                if (!ct || !it || p.name.empty()) parse_error("bad list property on line " + std::to_string(line_no));
                p.is_list = true;
                p.count_type = *ct;
                p.type = *it;
            } else {
                ls >> p.name;
                const auto t = parse_scalar(type);
                if (!t || p.name.empty()) parse_error("bad property on line " + std::to_string(line_no));
                p.type = *t;
            }
            header.elements.back().properties.push_back(std::move(p));
        } else {
            parse_error("unknown header keyword '" + word + "' on line " + std::to_string(line_no));
        }
    }
    if (!have_format) parse_error("missing format line");
    return header;
}

template <typename T>
T load_le(const char* bytes) {
    T value;
    std::memcpy(&value, bytes, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        auto* raw = reinterpret_cast<unsigned char*>(&value);
        std::reverse(raw, raw + sizeof(T));
    }
    return value;
}

double decode(Scalar s, const char* bytes) {
    switch (s) {
    case Scalar::Int8: return static_cast<double>(load_le<std::int8_t>(bytes));
    case Scalar::UInt8: return static_cast<double>(load_le<std::uint8_t>(bytes));
    case Scalar::Int16: return static_cast<double>(load_le<std::int16_t>(bytes));
    case Scalar::UInt16: return static_cast<double>(load_le<std::uint16_t>(bytes));
    case Scalar::Int32: return static_cast<double>(load_le<std::int32_t>(bytes));
    case Scalar::UInt32: return static_cast<double>(load_le<std::uint32_t>(bytes));
    case Scalar::Float32: return static_cast<double>(load_le<float>(bytes));
    case Scalar::Float64: return load_le<double>(bytes);
    }
    return 0.0;
}

struct VertexSlots {
    std::array<int, 3> position{-1, -1, -1};
    std::array<int, 3> normal{-1, -1, -1};
    bool has_normals() const { return normal[0] >= 0 && normal[1] >= 0 && normal[2] >= 0; }
};

VertexSlots locate_slots(const Element& vertex) {
    VertexSlots slots;
    static constexpr std::array<const char*, 3> pos_names{"x", "y", "z"};
    static constexpr std::array<const char*, 3> nrm_names{"nx", "ny", "nz"};
    for (std::size_t p = 0; p < vertex.properties.size(); ++p) {
        const auto& prop = vertex.properties[p];
        for (int a = 0; a < 3; ++a) {
            if (prop.name == pos_names[a] && !prop.is_list) slots.position[a] = static_cast<int>(p);
            if (prop.name == nrm_names[a] && !prop.is_list) slots.normal[a] = static_cast<int>(p);
        }
    }
    if (slots.position[0] < 0 || slots.position[1] < 0 || slots.position[2] < 0) {
        parse_error("vertex element lacks x, y, z properties");
    }
    return slots;
}

void store_vertex(PointCloud& cloud, const VertexSlots& slots, const std::vector<double>& values) {
    cloud.points.emplace_back(values[slots.position[0]], values[slots.position[1]], values[slots.position[2]]);
    if (slots.has_normals()) {
        cloud.normals.emplace_back(values[slots.normal[0]], values[slots.normal[1]], values[slots.normal[2]]);
    }
}

void read_ascii(std::istream& in, const Header& header, PointCloud& cloud) {
    std::string line;
    std::size_t body_line = 0;
    for (const auto& element : header.elements) {
        const bool is_vertex = element.name == "vertex";
        const VertexSlots slots = is_vertex ? locate_slots(element) : VertexSlots{};
        std::vector<double> values(element.properties.size());
        for (std::size_t r = 0; r < element.count; ++r) {
            do {
                if (!std::getline(in, line)) {
                    parse_error("truncated body: element '" + element.name + "' has " + std::to_string(r) + " of " +
                                std::to_string(element.count) + " rows (body line " + std::to_string(body_line) + ")");
                }
                ++body_line;
            } while (line.find_first_not_of(" \t\r") == std::string::npos);
            if (!is_vertex) continue;
            std::istringstream ls(line);
            for (std::size_t p = 0; p < element.properties.size(); ++p) {
                const auto& prop = element.properties[p];
                if (prop.is_list) {
                    double count = 0;
                    if (!(ls >> count)) parse_error("bad list count on body line " + std::to_string(body_line));
                    double skip;
                    for (long i = 0; i < static_cast<long>(count); ++i) ls >> skip;
                    continue;
                }
                if (!(ls >> values[p])) parse_error("bad vertex value on body line " + std::to_string(body_line));
            }
            store_vertex(cloud, slots, values);
        }
    }
}

void read_binary(std::istream& in, const Header& header, PointCloud& cloud) {
    std::array<char, 8> buf{};
    auto read_bytes = [&](std::size_t n, const std::string& what) {
        if (!in.read(buf.data(), static_cast<std::streamsize>(n))) {
            parse_error("truncated body while reading " + what);
        }
    };
    for (const auto& element : header.elements) {
        const bool is_vertex = element.name == "vertex";
        const VertexSlots slots = is_vertex ? locate_slots(element) : VertexSlots{};
        std::vector<double> values(element.properties.size());
        for (std::size_t r = 0; r < element.count; ++r) {
            const std::string where = "element '" + element.name + "' row " + std::to_string(r);
            for (std::size_t p = 0; p < element.properties.size(); ++p) {
                const auto& prop = element.properties[p];
                if (prop.is_list) {
                    read_bytes(scalar_size(prop.count_type), where);
                    const double count = decode(prop.count_type, buf.data());
                    if (count < 0) parse_error("negative list length in " + where);
                    const auto skip = static_cast<std::streamoff>(count) *
                                      static_cast<std::streamoff>(scalar_size(prop.type));
                    in.seekg(skip, std::ios::cur);
                    if (!in) parse_error("truncated body while skipping list in " + where);
                    continue;
                }
                read_bytes(scalar_size(prop.type), where);
                values[p] = decode(prop.type, buf.data());
            }
            if (is_vertex) store_vertex(cloud, slots, values);
        }
    }
}

}  // namespace

PointCloud read_ply(std::istream& in) {
    const Header header = read_header(in);
    bool has_vertex = false;
    for (const auto& e : header.elements) has_vertex |= e.name == "vertex";
    if (!has_vertex) parse_error("no vertex element");

    PointCloud cloud;
    cloud.viewpoint = header.viewpoint;
    if (header.format == Format::Ascii) read_ascii(in, header, cloud);
    else read_binary(in, header, cloud);
    if (cloud.has_normals()) {
        for (auto& n : cloud.normals) {
            const double len = n.norm();
            if (len > 0.0) n /= len;
        }
    }
    return cloud;
}

PointCloud read_ply(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    try {
        return read_ply(in);
    } catch (const Error& e) {
        throw Error(e.kind(), path.string() + ": " + e.what());
    }
}

namespace {

void put_double(std::ostream& out, double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    out.write(buf, ptr - buf);
}

}  // namespace

void write_ply(const PointCloud& cloud, std::ostream& out) {
    const bool normals = cloud.has_normals();
    out << "ply\nformat ascii 1.0\n";
    if (cloud.viewpoint) {
        out << "comment viewpoint ";
        put_double(out, cloud.viewpoint->x());
        out << ' ';
        put_double(out, cloud.viewpoint->y());
        out << ' ';
        put_double(out, cloud.viewpoint->z());
        out << '\n';
    }
    out << "element vertex " << cloud.size() << '\n'
        << "property double x\nproperty double y\nproperty double z\n";
    if (normals) out << "property double nx\nproperty double ny\nproperty double nz\n";
    out << "end_header\n";
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const Vec3& p = cloud.points[i];
        put_double(out, p.x());
        out << ' ';
        put_double(out, p.y());
        out << ' ';
        put_double(out, p.z());
        if (normals) {
            const Vec3& n = cloud.normals[i];
            for (int a = 0; a < 3; ++a) {
                out << ' ';
                put_double(out, n[a]);
            }
        }
        out << '\n';
    }
}

void write_ply(const PointCloud& cloud, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    write_ply(cloud, out);
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace tripreg
