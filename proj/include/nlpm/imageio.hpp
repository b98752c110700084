#pragma once

// PGM and CSV files, salt-and-pepper noise, and a synthetic test image.

#include "nlpm/errors.hpp"
#include "nlpm/grid.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace nlpm::imageio {

class UnsupportedFormat : public ParseError {
public:
    using ParseError::ParseError;
};

// Row-major gray image, pixel values in [0,1], row 0 at the top.
struct GrayImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> pixels;

    double at(std::size_t x, std::size_t y) const { return pixels[y * width + x]; }
    double& at(std::size_t x, std::size_t y) { return pixels[y * width + x]; }
};

// P2 (ASCII) or P5 (binary) with maxval <= 65535.
GrayImage parse_pgm(std::span<const unsigned char> bytes);
GrayImage read_pgm(const std::filesystem::path& path);

// Always P5 with a single generator comment line.
std::vector<unsigned char> encode_pgm(const GrayImage& img, unsigned maxval = 255);
void write_pgm(const GrayImage& img, const std::filesystem::path& path, unsigned maxval = 255);

// Replaces exactly round(fraction * N) distinct pixels, ceil(k/2) by 1 and the rest by 0.
GrayImage salt_pepper(const GrayImage& img, double fraction, std::uint64_t seed);

// Piecewise-constant n x n image: a disk, a rectangle and a triangular wedge on
// a flat background, four gray levels in total.
GrayImage make_cartoon(std::size_t n);

struct CartoonGeometry {
    static constexpr double background = 0.1;
    static constexpr double disk_level = 0.8, disk_cx = 0.32, disk_cy = 0.34, disk_r = 0.2;
    static constexpr double rect_level = 0.55, rect_x0 = 0.58, rect_x1 = 0.9, rect_y0 = 0.12, rect_y1 = 0.46;
    static constexpr double wedge_level = 0.3;
    static constexpr double wedge_ax = 0.15, wedge_ay = 0.88, wedge_bx = 0.85, wedge_by = 0.88, wedge_cx = 0.5,
                            wedge_cy = 0.6;
};

// Pixels become Neumann midpoint samples of a 2D field; the image must be square
// with a power-of-two side.
GridField to_field(const GrayImage& img);
// Values are clamped to [0,1].
GrayImage from_field(const GridField& f);

struct CsvColumn {
    std::string name;
    std::vector<double> values;
};

// Optional "# " comment lines, a header row, then one row per entry with 17
// significant digits. All columns must have equal length.
void write_csv(const std::filesystem::path& path, std::span<const CsvColumn> columns,
               std::span<const std::string> comments = {});
std::vector<CsvColumn> read_csv(const std::filesystem::path& path);

} // namespace nlpm::imageio
