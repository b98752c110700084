#include "nlpm/imageio.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <numeric>
#include <random>
#include <sstream>

namespace nlpm::imageio {

namespace {

class PgmReader {
public:
    explicit PgmReader(std::span<const unsigned char> bytes) : bytes_(bytes) {}

    GrayImage read()
    {
        if (bytes_.size() < 2 || bytes_[0] != 'P') throw ParseError("missing PGM magic number", 0);
        const unsigned char kind = bytes_[1];
        if (kind != '2' && kind != '5') {
            throw UnsupportedFormat(std::string("unsupported magic number P") + static_cast<char>(kind), 1);
        }
        pos_ = 2;
        GrayImage img;
        img.width = header_number("width");
        img.height = header_number("height");
        const std::size_t maxval = header_number("maxval");
        if (img.width == 0 || img.height == 0) throw ParseError("image has zero size", pos_);
        if (maxval == 0 || maxval > 65535) throw ParseError("maxval must lie in 1..65535", pos_);

        const std::size_t count = img.width * img.height;
        img.pixels.resize(count);
        const double scale = 1.0 / static_cast<double>(maxval);
        if (kind == '5') {
            if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
                throw ParseError("expected a single whitespace byte after maxval", pos_);
            }
            ++pos_;
            const std::size_t bpp = maxval < 256 ? 1 : 2;
            if (bytes_.size() - pos_ < count * bpp) throw ParseError("truncated pixel data", bytes_.size());
            for (std::size_t k = 0; k < count; ++k) {
                std::size_t v = bytes_[pos_];
                if (bpp == 2) v = (v << 8) | bytes_[pos_ + 1];
                if (v > maxval) throw ParseError("pixel value exceeds maxval", pos_);
                img.pixels[k] = static_cast<double>(v) * scale;
                pos_ += bpp;
            }
            if (pos_ != bytes_.size()) throw ParseError("trailing bytes after pixel data", pos_);
        } else {
            for (std::size_t k = 0; k < count; ++k) {
                const std::size_t v = ascii_number("pixel value", true);
                if (v > maxval) throw ParseError("pixel value exceeds maxval", pos_);
                img.pixels[k] = static_cast<double>(v) * scale;
            }
            skip_whitespace(false);
            if (pos_ != bytes_.size()) throw ParseError("trailing data after pixel values", pos_);
        }
        return img;
    }

private:
    void skip_whitespace(bool comments)
    {
        while (pos_ < bytes_.size()) {
            if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else if (comments && bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    std::size_t header_number(const char* what) { return ascii_number(what, true); }

    std::size_t ascii_number(const char* what, bool comments)
    {
        const std::size_t before = pos_;
        skip_whitespace(comments);
        if (pos_ == before && pos_ < bytes_.size()) {
            throw ParseError(std::string("expected whitespace before ") + what, pos_);
        }
        if (pos_ >= bytes_.size()) throw ParseError(std::string("truncated data while reading ") + what, pos_);
        if (!std::isdigit(bytes_[pos_])) throw ParseError(std::string("malformed ") + what, pos_);
        std::size_t value = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            value = value * 10 + static_cast<std::size_t>(bytes_[pos_] - '0');
            if (value > 1'000'000'000) throw ParseError(std::string(what) + " out of range", pos_);
            ++pos_;
        }
        return value;
    }

    std::span<const unsigned char> bytes_;
    std::size_t pos_ = 0;
};

std::vector<unsigned char> slurp(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

GrayImage parse_pgm(std::span<const unsigned char> bytes) { return PgmReader(bytes).read(); }

GrayImage read_pgm(const std::filesystem::path& path)
{
    const auto bytes = slurp(path);
    try {
        return parse_pgm(bytes);
    } catch (const UnsupportedFormat& e) {
        throw UnsupportedFormat(path.string() + ": " + e.what(), e.offset());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), e.offset());
    }
}

std::vector<unsigned char> encode_pgm(const GrayImage& img, unsigned maxval)
{
    if (maxval == 0 || maxval > 65535) throw InvalidArgument("maxval must lie in 1..65535");
    if (img.pixels.size() != img.width * img.height) throw InvalidArgument("pixel count does not match image size");
    const std::string header = "P5\n# nlpm\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n" +
                               std::to_string(maxval) + "\n";
    std::vector<unsigned char> out(header.begin(), header.end());
    const bool wide = maxval > 255;
    out.reserve(out.size() + img.pixels.size() * (wide ? 2 : 1));
    for (double p : img.pixels) {
        const double clamped = std::clamp(p, 0.0, 1.0);
        const auto v = static_cast<unsigned>(std::lround(clamped * maxval));
        if (wide) out.push_back(static_cast<unsigned char>(v >> 8));
        out.push_back(static_cast<unsigned char>(v & 0xff));
    }
    return out;
}

void write_pgm(const GrayImage& img, const std::filesystem::path& path, unsigned maxval)
{
    const auto bytes = encode_pgm(img, maxval);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

GrayImage salt_pepper(const GrayImage& img, double fraction, std::uint64_t seed)
{
    if (!(fraction >= 0.0 && fraction <= 1.0)) throw InvalidArgument("noise fraction must lie in [0, 1]");
    const std::size_t total = img.pixels.size();
    const auto count = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(total)));

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> all(total);
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::vector<std::size_t> chosen;
    chosen.reserve(count);
    std::sample(all.begin(), all.end(), std::back_inserter(chosen), count, rng);
    std::shuffle(chosen.begin(), chosen.end(), rng);

    GrayImage out = img;
    const std::size_t salt = (count + 1) / 2;
    for (std::size_t k = 0; k < chosen.size(); ++k) out.pixels[chosen[k]] = k < salt ? 1.0 : 0.0;
    return out;
}

GrayImage make_cartoon(std::size_t n)
{
    using G = CartoonGeometry;
    if (n == 0) throw InvalidSize("cartoon size must be positive");
    // Signed area test: inside when the point is on the same side of all three edges.
    const auto edge = [](double ax, double ay, double bx, double by, double px, double py) {
        return (bx - ax) * (py - ay) - (by - ay) * (px - ax);
    };
    GrayImage img{n, n, std::vector<double>(n * n, G::background)};
    for (std::size_t i = 0; i < n; ++i) {
        const double y = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double x = (static_cast<double>(j) + 0.5) / static_cast<double>(n);
            double& p = img.at(j, i);
            if (std::hypot(x - G::disk_cx, y - G::disk_cy) <= G::disk_r) {
                p = G::disk_level;
            } else if (x >= G::rect_x0 && x <= G::rect_x1 && y >= G::rect_y0 && y <= G::rect_y1) {
                p = G::rect_level;
            } else {
                const double e1 = edge(G::wedge_ax, G::wedge_ay, G::wedge_bx, G::wedge_by, x, y);
                const double e2 = edge(G::wedge_bx, G::wedge_by, G::wedge_cx, G::wedge_cy, x, y);
                const double e3 = edge(G::wedge_cx, G::wedge_cy, G::wedge_ax, G::wedge_ay, x, y);
                if ((e1 >= 0 && e2 >= 0 && e3 >= 0) || (e1 <= 0 && e2 <= 0 && e3 <= 0)) p = G::wedge_level;
            }
        }
    }
    return img;
}

GridField to_field(const GrayImage& img)
{
    if (img.width != img.height || !is_power_of_two(img.width)) {
        throw InvalidSize("image must be square with a power-of-two side, got " + std::to_string(img.width) + "x" +
                          std::to_string(img.height));
    }
    return GridField(img.width, 2, BoundaryCondition::Neumann, img.pixels);
}

GrayImage from_field(const GridField& f)
{
    if (f.dim() != 2) throw InvalidArgument("only 2D fields convert to images");
    GrayImage img{f.n(), f.n(), std::vector<double>(f.values().begin(), f.values().end())};
    for (double& p : img.pixels) p = std::clamp(p, 0.0, 1.0);
    return img;
}

void write_csv(const std::filesystem::path& path, std::span<const CsvColumn> columns,
               std::span<const std::string> comments)
{
    const std::size_t rows = columns.empty() ? 0 : columns.front().values.size();
    for (const auto& c : columns) {
        if (c.values.size() != rows) {
            throw InvalidArgument("CSV column '" + c.name + "' has " + std::to_string(c.values.size()) +
                                  " rows, expected " + std::to_string(rows));
        }
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    for (const auto& line : comments) out << "# " << line << '\n';
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c].name;
    out << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << format_double(columns[c].values[r]);
        out << '\n';
    }
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<CsvColumn> read_csv(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::vector<CsvColumn> columns;
    std::string line;
    bool header = true;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.front() == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (header) {
            for (auto& name : cells) columns.push_back({name, {}});
            header = false;
            continue;
        }
        if (cells.size() != columns.size()) {
            throw ParseError(path.string() + ": row " + std::to_string(line_no) + " has " +
                                 std::to_string(cells.size()) + " cells",
                             static_cast<std::size_t>(in.tellg()));
        }
        for (std::size_t c = 0; c < cells.size(); ++c) columns[c].values.push_back(std::stod(cells[c]));
    }
    return columns;
}

} // namespace nlpm::imageio
