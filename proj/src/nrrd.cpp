#include "tgcut/nrrd.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "tgcut/error.hpp"

namespace tgcut {
namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

[[noreturn]] void fail_line(std::size_t line_no, const std::string& line, const std::string& msg) {
    throw ParseError("NRRD header line " + std::to_string(line_no) + " (\"" + line + "\"): " + msg);
}

std::optional<PixelType> parse_type(const std::string& raw) {
    static const std::map<std::string, PixelType> names = {
        {"uchar", PixelType::UInt8},         {"unsigned char", PixelType::UInt8},
        {"uint8", PixelType::UInt8},         {"uint8_t", PixelType::UInt8},
        {"short", PixelType::Int16},         {"short int", PixelType::Int16},
        {"signed short", PixelType::Int16},  {"signed short int", PixelType::Int16},
        {"int16", PixelType::Int16},         {"int16_t", PixelType::Int16},
        {"float", PixelType::Float32},
    };
    const auto it = names.find(lower(raw));
    if (it == names.end()) return std::nullopt;
    return it->second;
}

std::size_t type_size(PixelType t) {
    switch (t) {
    case PixelType::UInt8: return 1;
    case PixelType::Int16: return 2;
    case PixelType::Float32: return 4;
    }
    return 0;
}

std::vector<double> parse_numbers(const std::string& s, std::size_t line_no, const std::string& line) {
    std::vector<double> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            fail_line(line_no, line, "expected a number, got \"" + tok + "\"");
        }
    }
    return out;
}

// "(1,0,0) (0,1,0) (0,0,2.5)" -> per-axis vector lengths
std::vector<double> parse_space_directions(const std::string& s, std::size_t line_no,
                                           const std::string& line) {
    std::vector<double> lengths;
    std::size_t pos = 0;
    while ((pos = s.find('(', pos)) != std::string::npos) {
        const auto close = s.find(')', pos);
        if (close == std::string::npos) fail_line(line_no, line, "unbalanced parenthesis");
        std::string inner = s.substr(pos + 1, close - pos - 1);
        std::replace(inner.begin(), inner.end(), ',', ' ');
        const auto v = parse_numbers(inner, line_no, line);
        double sq = 0.0;
        for (double c : v) sq += c * c;
        lengths.push_back(std::sqrt(sq));
        pos = close + 1;
    }
    return lengths;
}

float decode_value(const unsigned char* p, PixelType t, bool swap) {
    unsigned char buf[4];
    const std::size_t n = type_size(t);
    std::memcpy(buf, p, n);
    if (swap) std::reverse(buf, buf + n);
    switch (t) {
    case PixelType::UInt8: return static_cast<float>(buf[0]);
    case PixelType::Int16: {
        std::int16_t v;
        std::memcpy(&v, buf, 2);
        return static_cast<float>(v);
    }
    case PixelType::Float32: {
        float v;
        std::memcpy(&v, buf, 4);
        return v;
    }
    }
    return 0.0f;
}

void append_value(std::string& out, float v, PixelType t) {
    unsigned char buf[4];
    switch (t) {
    case PixelType::UInt8: {
        buf[0] = static_cast<unsigned char>(std::clamp(std::lround(v), 0L, 255L));
        break;
    }
    case PixelType::Int16: {
        const auto s = static_cast<std::int16_t>(std::clamp(std::lround(v), -32768L, 32767L));
        std::memcpy(buf, &s, 2);
        break;
    }
    case PixelType::Float32: std::memcpy(buf, &v, 4); break;
    }
    const std::size_t n = type_size(t);
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + n);
    out.append(reinterpret_cast<const char*>(buf), n);
}

std::string header(const VolumeGeometry& g, PixelType t) {
    std::string h = "NRRD0004\n";
    h += "# Complete NRRD file format specification at:\n";
    h += "# http://teem.sourceforge.net/nrrd/format.html\n";
    h += "type: " + std::string(to_string(t)) + "\n";
    h += "dimension: 3\n";
    h += "sizes: " + std::to_string(g.sizes[0]) + " " + std::to_string(g.sizes[1]) + " " +
         std::to_string(g.sizes[2]) + "\n";
    h += "spacings: " + format_decimal(g.spacing[0]) + " " + format_decimal(g.spacing[1]) + " " +
         format_decimal(g.spacing[2]) + "\n";
    h += "encoding: raw\n";
    if (type_size(t) > 1) h += "endian: little\n";
    h += "\n";
    return h;
}

} // namespace

std::string format_decimal(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    std::string s(buf, res.ptr);
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

Volume3D read_nrrd(std::string_view bytes) {
    std::size_t pos = 0;
    std::size_t line_no = 0;
    auto next_line = [&]() -> std::optional<std::string> {
        if (pos >= bytes.size()) return std::nullopt;
        const auto nl = bytes.find('\n', pos);
        std::string_view l = nl == std::string_view::npos ? bytes.substr(pos) : bytes.substr(pos, nl - pos);
        pos = nl == std::string_view::npos ? bytes.size() : nl + 1;
        ++line_no;
        if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
        return std::string(l);
    };

    const auto magic = next_line();
    if (!magic || magic->size() != 8 || magic->rfind("NRRD000", 0) != 0 || (*magic)[7] < '1' ||
        (*magic)[7] > '5') {
        throw ParseError("missing NRRD magic on line 1");
    }

    std::optional<int> dimension;
    std::optional<PixelType> type;
    std::optional<std::vector<double>> sizes;
    std::optional<std::vector<double>> spacings;
    std::string encoding;
    std::string endian = "little";
    bool ended = false;

    while (auto line = next_line()) {
        if (line->empty()) {
            ended = true;
            break;
        }
        if ((*line)[0] == '#') continue;
        if (line->find(":=") != std::string::npos) continue;  // key/value pairs carry no geometry
        const auto colon = line->find(": ");
        if (colon == std::string::npos) fail_line(line_no, *line, "expected \"field: value\"");
        const std::string key = lower(trim(std::string_view(*line).substr(0, colon)));
        const std::string value = trim(std::string_view(*line).substr(colon + 2));

        if (key == "dimension") {
            const auto v = parse_numbers(value, line_no, *line);
            if (v.size() != 1) fail_line(line_no, *line, "dimension needs one value");
            dimension = static_cast<int>(v[0]);
            if (*dimension != 3) {
                throw UnsupportedFormatError("only 3-dimensional NRRD is supported (line " +
                                             std::to_string(line_no) + ")");
            }
        } else if (key == "type") {
            type = parse_type(value);
            if (!type) throw UnsupportedFormatError("unsupported NRRD type \"" + value + "\"");
        } else if (key == "sizes") {
            sizes = parse_numbers(value, line_no, *line);
            if (sizes->size() != 3) fail_line(line_no, *line, "expected three sizes");
            for (double s : *sizes) {
                if (s < 1 || s != std::floor(s)) fail_line(line_no, *line, "sizes must be positive integers");
            }
        } else if (key == "spacings") {
            spacings = parse_numbers(value, line_no, *line);
            if (spacings->size() != 3) fail_line(line_no, *line, "expected three spacings");
        } else if (key == "space directions") {
            if (!spacings) {
                spacings = parse_space_directions(value, line_no, *line);
                if (spacings->size() != 3) fail_line(line_no, *line, "expected three direction vectors");
            }
        } else if (key == "encoding") {
            encoding = lower(value);
        } else if (key == "endian") {
            endian = lower(value);
            if (endian != "little" && endian != "big") fail_line(line_no, *line, "unknown endian");
        } else if (key == "data file" || key == "datafile") {
            throw UnsupportedFormatError("detached NRRD data files are not supported");
        }
    }

    if (!ended) throw TruncationError("NRRD header is not terminated by a blank line");
    if (!dimension) throw ParseError("NRRD header lacks a dimension field");
    if (!type) throw ParseError("NRRD header lacks a type field");
    if (!sizes) throw ParseError("NRRD header lacks a sizes field");
    if (encoding.empty()) throw ParseError("NRRD header lacks an encoding field");

    VolumeGeometry g;
    for (int a = 0; a < 3; ++a) {
        g.sizes[a] = static_cast<std::size_t>((*sizes)[a]);
        g.spacing[a] = spacings ? (*spacings)[a] : 1.0;
        if (!(g.spacing[a] > 0.0) || !std::isfinite(g.spacing[a])) {
            throw ParseError("NRRD spacing along axis " + std::to_string(a) + " must be positive");
        }
    }

    const std::size_t count = g.voxel_count();
    std::vector<float> values;
    values.reserve(count);
    const std::string_view payload = bytes.substr(pos);

    if (encoding == "raw") {
        const std::size_t need = count * type_size(*type);
        if (payload.size() < need) {
            throw TruncationError("NRRD payload has " + std::to_string(payload.size()) +
                                  " bytes, expected " + std::to_string(need));
        }
        if (payload.size() > need) {
            throw ParseError("NRRD payload has " + std::to_string(payload.size() - need) +
                             " trailing bytes");
        }
        const bool file_big = endian == "big";
        const bool swap = type_size(*type) > 1 && file_big != (std::endian::native == std::endian::big);
        const auto* p = reinterpret_cast<const unsigned char*>(payload.data());
        for (std::size_t i = 0; i < count; ++i) {
            values.push_back(decode_value(p + i * type_size(*type), *type, swap));
        }
    } else if (encoding == "ascii" || encoding == "text" || encoding == "txt") {
        std::istringstream in{std::string(payload)};
        std::string tok;
        while (in >> tok) {
            if (values.size() == count) throw ParseError("NRRD ascii payload has extra values");
            try {
                values.push_back(std::stof(tok));
            } catch (const std::exception&) {
                throw ParseError("NRRD ascii payload contains non-numeric token \"" + tok + "\"");
            }
        }
        if (values.size() < count) {
            throw TruncationError("NRRD ascii payload has " + std::to_string(values.size()) +
                                  " values, expected " + std::to_string(count));
        }
    } else {
        throw UnsupportedFormatError("unsupported NRRD encoding \"" + encoding + "\"");
    }

    return Volume3D(g, *type, std::move(values));
}

std::string write_nrrd(const Volume3D& vol) {
    std::string out = header(vol.geometry(), vol.pixel_type());
    out.reserve(out.size() + vol.values().size() * type_size(vol.pixel_type()));
    for (float v : vol.values()) append_value(out, v, vol.pixel_type());
    return out;
}

std::string write_nrrd(const MaskVolume& mask) {
    std::string out = header(mask.geometry(), PixelType::UInt8);
    out.append(reinterpret_cast<const char*>(mask.values().data()), mask.values().size());
    return out;
}

MaskVolume to_mask(const Volume3D& vol) {
    std::vector<std::uint8_t> v(vol.values().size());
    std::transform(vol.values().begin(), vol.values().end(), v.begin(),
                   [](float x) { return static_cast<std::uint8_t>(x != 0.0f ? 1 : 0); });
    return MaskVolume(vol.geometry(), std::move(v));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ArgumentError("cannot open " + path, "io-error");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ArgumentError("cannot write " + path, "io-error");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw ArgumentError("write failed for " + path, "io-error");
}

} // namespace tgcut
