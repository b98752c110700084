#include "doctest.h"

#include "nlpm/diagnostics.hpp"
#include "nlpm/errors.hpp"
#include "nlpm/imageio.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <set>
#include <string>

using namespace nlpm;
using namespace nlpm::imageio;

namespace {

std::vector<unsigned char> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

std::filesystem::path scratch(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / "nlpm_test_imageio";
    std::filesystem::create_directories(dir);
    return dir / name;
}

GrayImage random_image(std::size_t w, std::size_t h, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    GrayImage img{w, h, std::vector<double>(w * h)};
    for (double& p : img.pixels) p = u(rng);
    return img;
}

std::size_t parse_offset(const std::string& text)
{
    try {
        (void)parse_pgm(bytes_of(text));
    } catch (const ParseError& e) {
        return e.offset();
    }
    FAIL("expected a parse error");
    return 0;
}

} // namespace

TEST_CASE("binary PGM scaling")
{
    std::string text = "P5\n2 2\n255\n";
    text += std::string{'\x00', '\x80', '\xff', '\x40'};
    const auto img = parse_pgm(bytes_of(text));
    REQUIRE(img.width == 2);
    REQUIRE(img.height == 2);
    CHECK(img.pixels[0] == 0.0);
    CHECK(img.pixels[1] == doctest::Approx(128.0 / 255));
    CHECK(img.pixels[2] == 1.0);
    CHECK(img.pixels[3] == doctest::Approx(64.0 / 255));
}

TEST_CASE("ASCII PGM with comments and 16-bit binary PGM")
{
    const auto ascii = parse_pgm(bytes_of("P2\n# made by hand\n3 1 # width height\n10\n0 5\n10\n"));
    REQUIRE(ascii.pixels.size() == 3);
    CHECK(ascii.pixels[1] == doctest::Approx(0.5));
    CHECK(ascii.at(2, 0) == 1.0);

    std::string wide = "P5 2 1 65535\n";
    wide += std::string{'\x01', '\x00', '\xff', '\xff'};
    const auto img = parse_pgm(bytes_of(wide));
    CHECK(img.pixels[0] == doctest::Approx(256.0 / 65535));
    CHECK(img.pixels[1] == 1.0);
}

TEST_CASE("malformed PGM input is rejected with a byte offset")
{
    try {
        (void)parse_pgm(bytes_of("P3\n1 1\n255\n0 0 0\n"));
        FAIL("expected UnsupportedFormat");
    } catch (const UnsupportedFormat& e) {
        CHECK(e.offset() == 1);
    }
    CHECK(parse_offset("") == 0);
    CHECK(parse_offset("GIF89a") == 0);
    CHECK(parse_offset("P5\n2 2\n255\nabc") == 14);          // truncated: offset at end of data
    CHECK(parse_offset("P2\n2 1\n9\n3 12\n") > 0);           // value above maxval
    CHECK(parse_offset("P2\n2 1\n9\n3\n") > 0);              // missing value
    CHECK(parse_offset("P5\n1 1\n255\nab") == 12);           // trailing byte
    CHECK(parse_offset("P5\n1 x\n255\na") == 5);             // bad height
    CHECK(parse_offset("P5\n1 1\n70000\na") > 0);            // maxval out of range
    CHECK(parse_offset("P5\n0 1\n255\n") > 0);               // empty image
    CHECK_THROWS_AS(read_pgm(scratch("does_not_exist.pgm")), IoError);
}

TEST_CASE("write then read stays within half a quantization step")
{
    const auto img = random_image(13, 7, 5);
    const auto path = scratch("roundtrip.pgm");
    write_pgm(img, path);
    const auto back = read_pgm(path);
    REQUIRE(back.width == 13);
    REQUIRE(back.height == 7);
    for (std::size_t k = 0; k < img.pixels.size(); ++k) CHECK(std::abs(back.pixels[k] - img.pixels[k]) <= 1.0 / 510 + 1e-15);

    const auto deep = parse_pgm(encode_pgm(img, 65535));
    for (std::size_t k = 0; k < img.pixels.size(); ++k) CHECK(std::abs(deep.pixels[k] - img.pixels[k]) <= 1.0 / 131070 + 1e-15);
}

TEST_CASE("encoded files survive a second round trip bit for bit")
{
    for (unsigned maxval : {255u, 1000u, 65535u}) {
        const auto first = encode_pgm(random_image(9, 4, maxval), maxval);
        CHECK(encode_pgm(parse_pgm(first), maxval) == first);
        const std::string head(first.begin(), first.begin() + 3);
        CHECK(head == "P5\n");
    }
}

TEST_CASE("salt and pepper replaces an exact number of pixels")
{
    const auto clean = make_cartoon(128);
    CHECK(salt_pepper(clean, 0.0, 3).pixels == clean.pixels);

    const auto noisy = salt_pepper(clean, 0.15, 7);
    std::size_t changed = 0, salt = 0, pepper = 0;
    for (std::size_t k = 0; k < clean.pixels.size(); ++k) {
        if (noisy.pixels[k] == clean.pixels[k]) continue;
        ++changed;
        if (noisy.pixels[k] == 1.0) ++salt;
        if (noisy.pixels[k] == 0.0) ++pepper;
    }
    CHECK(changed == 2458);
    CHECK(salt == 1229);
    CHECK(pepper == 1229);

    // odd count: the extra pixel is salt
    const GrayImage gray{5, 5, std::vector<double>(25, 0.5)};
    const auto odd = salt_pepper(gray, 0.2, 1);
    std::size_t odd_salt = 0, odd_pepper = 0;
    for (double p : odd.pixels) {
        odd_salt += p == 1.0;
        odd_pepper += p == 0.0;
    }
    CHECK(odd_salt == 3);
    CHECK(odd_pepper == 2);

    CHECK(salt_pepper(clean, 0.15, 7).pixels == noisy.pixels);
    CHECK(salt_pepper(clean, 0.15, 8).pixels != noisy.pixels);
    CHECK_THROWS_AS(salt_pepper(clean, 1.5, 1), InvalidArgument);
    CHECK_THROWS_AS(salt_pepper(clean, -0.1, 1), InvalidArgument);
}

TEST_CASE("cartoon image")
{
    using G = CartoonGeometry;
    const std::size_t n = 256;
    const auto img = make_cartoon(n);
    std::set<double> levels(img.pixels.begin(), img.pixels.end());
    CHECK(levels.size() <= 4);

    const auto nd = static_cast<double>(n);
    for (std::size_t y = 0; y < n; ++y)
        for (std::size_t x = 0; x < n; ++x) {
            const double px = (x + 0.5) / nd, py = (y + 0.5) / nd;
            if (std::hypot(px - G::disk_cx, py - G::disk_cy) < G::disk_r - 2 / nd) CHECK(img.at(x, y) == G::disk_level);
        }

    // anisotropic TV of a piecewise-constant image tends to n * sum over edges of
    // jump * (|dx| + |dy|) along the boundary
    const double disk = (G::disk_level - G::background) * 8 * G::disk_r;
    const double rect = (G::rect_level - G::background) * 2 * ((G::rect_x1 - G::rect_x0) + (G::rect_y1 - G::rect_y0));
    const auto l1 = [](double ax, double ay, double bx, double by) { return std::abs(ax - bx) + std::abs(ay - by); };
    const double wedge = (G::wedge_level - G::background) *
                         (l1(G::wedge_ax, G::wedge_ay, G::wedge_bx, G::wedge_by) + l1(G::wedge_bx, G::wedge_by, G::wedge_cx, G::wedge_cy) +
                          l1(G::wedge_cx, G::wedge_cy, G::wedge_ax, G::wedge_ay));
    const double expected = disk + rect + wedge;
    for (std::size_t m : {128u, 256u, 512u}) {
        const auto field = to_field(make_cartoon(m));
        CHECK(diagnostics::total_variation(field) / static_cast<double>(m) == doctest::Approx(expected).epsilon(0.03));
    }
}

TEST_CASE("image <-> field conversion")
{
    const auto img = random_image(16, 16, 9);
    const auto f = to_field(img);
    CHECK(f.dim() == 2);
    CHECK(f.bc() == BoundaryCondition::Neumann);
    CHECK(f.at(3, 5) == img.at(5, 3));
    CHECK(from_field(f).pixels == img.pixels);

    GridField wild(4, 2, BoundaryCondition::Neumann, std::vector<double>(16, 2.0));
    wild[0] = -1.0;
    const auto clamped = from_field(wild);
    CHECK(clamped.pixels[0] == 0.0);
    CHECK(clamped.pixels[1] == 1.0);

    CHECK_THROWS_AS(to_field(random_image(16, 8, 1)), InvalidSize);
    CHECK_THROWS_AS(to_field(random_image(12, 12, 1)), InvalidSize);
}

TEST_CASE("CSV files")
{
    const auto path = scratch("table.csv");
    const std::vector<CsvColumn> empty = {{"a", {}}, {"b", {}}};
    write_csv(path, empty);
    std::ifstream in(path);
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(text == "a,b\n");

    const std::vector<CsvColumn> cols = {{"x", {0.1, 1.0 / 3, -2.5e10}}, {"y", {1e-300, -0.0, 6.02214076e23}}};
    const std::vector<std::string> comments = {"generated for a test", "second line"};
    write_csv(path, cols, comments);
    const auto back = read_csv(path);
    REQUIRE(back.size() == 2);
    CHECK(back[0].name == "x");
    CHECK(back[1].name == "y");
    CHECK(back[0].values == cols[0].values);
    CHECK(back[1].values == cols[1].values);

    const std::vector<CsvColumn> ragged = {{"x", {1.0, 2.0}}, {"y", {1.0}}};
    CHECK_THROWS_AS(write_csv(path, ragged), InvalidArgument);
    CHECK_THROWS_AS(write_csv(scratch("missing_dir") / "x" / "t.csv", cols), IoError);
}
