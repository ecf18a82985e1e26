#include "dctnet/image_io.hpp"

#include <png.h>

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "temp_dir.hpp"

namespace dctnet {
namespace {

using testutil::TempDir;

void write_bytes(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  ASSERT_TRUE(out.good()) << "failed to write " << path;
}

std::string expect_load_error(const std::string& path) {
  try {
    load_pgm(path);
  } catch (const std::exception& e) {
    return e.what();
  }
  ADD_FAILURE() << "expected load_pgm to reject " << path;
  return "";
}

// Minimal libpng writer for fixture images. Rows are raw scanline bytes in
// the layout the chosen color type / bit depth demands.
void write_png_file(const std::string& path, int rows, int cols, int bit_depth,
                    int color_type, const std::vector<png_color>& palette,
                    const std::vector<std::vector<png_byte>>& scanlines) {
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (fp == nullptr) throw std::runtime_error("cannot open " + path);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                            nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (png == nullptr || info == nullptr || setjmp(png_jmpbuf(png))) {
    if (png != nullptr) png_destroy_write_struct(&png, info ? &info : nullptr);
    std::fclose(fp);
    throw std::runtime_error("libpng failed writing " + path);
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, static_cast<png_uint_32>(cols),
               static_cast<png_uint_32>(rows), bit_depth, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  if (!palette.empty()) {
    png_set_PLTE(png, info, palette.data(), static_cast<int>(palette.size()));
  }
  png_write_info(png, info);
  for (const auto& line : scanlines) {
    png_write_row(png, const_cast<png_bytep>(line.data()));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

TEST(Pgm, RoundTripIsExact) {
  TempDir dir;
  Image image(5, 7);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 7; ++j) image(i, j) = (i * 37 + j * 11) % 256;
  }
  const std::string path = dir.file("round.pgm");
  save_pgm(path, image);
  const Image loaded = load_pgm(path);
  ASSERT_EQ(loaded.rows(), 5);
  ASSERT_EQ(loaded.cols(), 7);
  EXPECT_EQ(loaded, image);
}

TEST(Pgm, HeaderAllowsCommentsAndWhitespace) {
  TempDir dir;
  std::string bytes = "P5\n# written by hand\n4 3 # trailing note\n# more\n255\n";
  for (int v = 0; v < 12; ++v) bytes.push_back(static_cast<char>(v));
  const std::string path = dir.file("commented.pgm");
  write_bytes(path, bytes);
  const Image image = load_pgm(path);
  ASSERT_EQ(image.rows(), 3);
  ASSERT_EQ(image.cols(), 4);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 4; ++j) EXPECT_EQ(image(i, j), i * 4 + j);
  }
}

TEST(Pgm, RejectsAsciiVariant) {
  TempDir dir;
  const std::string path = dir.file("ascii.pgm");
  write_bytes(path, "P2\n2 2\n255\n0 1 2 3\n");
  EXPECT_NE(expect_load_error(path).find("expected magic P5"),
            std::string::npos);
}

TEST(Pgm, RejectsTruncatedRaster) {
  TempDir dir;
  const std::string path = dir.file("short.pgm");
  write_bytes(path, std::string("P5\n4 3\n255\n") + "abcde");
  EXPECT_NE(expect_load_error(path).find("truncated raster"),
            std::string::npos);
}

TEST(Pgm, RejectsWideMaxval) {
  TempDir dir;
  const std::string path = dir.file("wide.pgm");
  write_bytes(path, "P5\n2 2\n65535\n\0\0\0\0");
  EXPECT_NE(expect_load_error(path).find("unsupported maxval"),
            std::string::npos);
}

TEST(Pgm, RejectsMissingFile) {
  TempDir dir;
  EXPECT_NE(expect_load_error(dir.file("absent.pgm")).find("cannot open"),
            std::string::npos);
}

TEST(Pgm, SaveClampsAndRoundsToBytes) {
  TempDir dir;
  Image image(1, 4);
  image(0, 0) = -5.0;
  image(0, 1) = 255.9;
  image(0, 2) = 100.4;
  image(0, 3) = 99.5;
  const std::string path = dir.file("clamp.pgm");
  save_pgm(path, image);
  const Image loaded = load_pgm(path);
  EXPECT_EQ(loaded(0, 0), 0.0);
  EXPECT_EQ(loaded(0, 1), 255.0);
  EXPECT_EQ(loaded(0, 2), 100.0);
  EXPECT_EQ(loaded(0, 3), 100.0);
}

TEST(Png, GrayRoundTripKeepsValues) {
  TempDir dir;
  const int rows = 6, cols = 9;
  std::vector<std::vector<png_byte>> lines(rows);
  for (int i = 0; i < rows; ++i) {
    lines[i].resize(cols);
    for (int j = 0; j < cols; ++j) {
      lines[i][j] = static_cast<png_byte>((i * 41 + j * 17) % 256);
    }
  }
  const std::string path = dir.file("gray.png");
  write_png_file(path, rows, cols, 8, PNG_COLOR_TYPE_GRAY, {}, lines);
  const Image image = load_image_grayscale(path, rows, cols);
  ASSERT_EQ(image.rows(), rows);
  ASSERT_EQ(image.cols(), cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      // Gray expands to R=G=B=v, and the luminance weights sum to 1.
      EXPECT_NEAR(image(i, j), lines[i][j], 1e-9);
    }
  }
}

TEST(Png, ColorConvertsWithLuminanceWeights) {
  TempDir dir;
  std::vector<png_byte> line = {255, 0, 0, 0, 255, 0, 0, 0, 255};
  const std::string path = dir.file("rgb.png");
  write_png_file(path, 1, 3, 8, PNG_COLOR_TYPE_RGB, {}, {line});
  const Image image = load_image_grayscale(path, 1, 3);
  EXPECT_NEAR(image(0, 0), 0.299 * 255, 1e-9);  // 76.245
  EXPECT_NEAR(image(0, 1), 0.587 * 255, 1e-9);  // 149.685
  EXPECT_NEAR(image(0, 2), 0.114 * 255, 1e-9);  // 29.07
}

TEST(Png, PaletteImagesAreExpanded) {
  TempDir dir;
  const std::vector<png_color> palette = {{255, 0, 0}, {0, 0, 255}};
  std::vector<png_byte> line = {0, 1};
  const std::string path = dir.file("palette.png");
  write_png_file(path, 1, 2, 8, PNG_COLOR_TYPE_PALETTE, palette, {line});
  const Image image = load_image_grayscale(path, 1, 2);
  EXPECT_NEAR(image(0, 0), 0.299 * 255, 1e-9);
  EXPECT_NEAR(image(0, 1), 0.114 * 255, 1e-9);
}

TEST(Png, RejectsSixteenBitDepth) {
  TempDir dir;
  // 16-bit gray: two big-endian bytes per pixel.
  std::vector<png_byte> line = {0x12, 0x34, 0xab, 0xcd};
  const std::string path = dir.file("deep.png");
  write_png_file(path, 1, 2, 16, PNG_COLOR_TYPE_GRAY, {}, {line});
  try {
    load_image_grayscale(path, 1, 2);
    FAIL() << "16-bit PNG must be rejected";
  } catch (const std::exception& e) {
    EXPECT_NE(std::string(e.what()).find("unsupported bit depth 16"),
              std::string::npos);
  }
}

TEST(Loading, DispatchLooksAtContentNotExtension) {
  TempDir dir;
  // PGM bytes behind a .png name must still load as PGM.
  std::string bytes = "P5\n2 2\n255\n";
  const char raster[] = {10, 20, 30, 40};
  bytes.append(raster, 4);
  const std::string path = dir.file("mislabeled.png");
  write_bytes(path, bytes);
  const Image image = load_image_grayscale(path, 2, 2);
  EXPECT_EQ(image(0, 0), 10.0);
  EXPECT_EQ(image(1, 1), 40.0);
}

TEST(Loading, NativeDimensionsPassThroughUnchanged) {
  TempDir dir;
  Image image(6, 5);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 5; ++j) image(i, j) = (7 * i + 3 * j) % 250;
  }
  const std::string path = dir.file("native.pgm");
  save_pgm(path, image);
  const Image loaded = load_image_grayscale(path, 6, 5);
  EXPECT_EQ(loaded, image);
}

TEST(Resize, ConstantImageStaysConstant) {
  Image image = Image::Constant(9, 7, 37.0);
  const Image small = bilinear_resize(image, 4, 3);
  const Image large = bilinear_resize(image, 20, 31);
  for (int i = 0; i < small.rows(); ++i) {
    for (int j = 0; j < small.cols(); ++j) EXPECT_NEAR(small(i, j), 37.0, 1e-12);
  }
  for (int i = 0; i < large.rows(); ++i) {
    for (int j = 0; j < large.cols(); ++j) EXPECT_NEAR(large(i, j), 37.0, 1e-12);
  }
}

TEST(Resize, KnownBilinearGrid) {
  Image image(2, 2);
  image << 0, 100, 100, 200;
  const Image out = bilinear_resize(image, 4, 4);
  const double expected[4][4] = {{0, 25, 75, 100},
                                 {25, 50, 100, 125},
                                 {75, 100, 150, 175},
                                 {100, 125, 175, 200}};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      EXPECT_NEAR(out(i, j), expected[i][j], 1e-12) << i << "," << j;
    }
  }
}

TEST(Resize, RejectsNonPositiveTargets) {
  Image image = Image::Zero(3, 3);
  EXPECT_THROW(bilinear_resize(image, 0, 3), std::invalid_argument);
  EXPECT_THROW(center_crop_resize(image, 3, -1), std::invalid_argument);
}

TEST(Crop, WideImageKeepsCenterColumns) {
  Image image(8, 16);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 16; ++j) image(i, j) = i * 16 + j;
  }
  const Image out = center_crop_resize(image, 8, 8);
  ASSERT_EQ(out.rows(), 8);
  ASSERT_EQ(out.cols(), 8);
  // Crop lands on columns 4..11 and the resize is then the identity.
  EXPECT_EQ(out, Image(image.block(0, 4, 8, 8)));
}

TEST(Crop, TallImageKeepsCenterRows) {
  Image image(16, 8);
  for (int i = 0; i < 16; ++i) {
    for (int j = 0; j < 8; ++j) image(i, j) = i * 8 + j;
  }
  const Image out = center_crop_resize(image, 8, 8);
  EXPECT_EQ(out, Image(image.block(4, 0, 8, 8)));
}

TEST(Crop, MatchingAspectRatioOnlyRescales) {
  // 4x6 -> 2x3 halves both axes with no crop; pixel centers land exactly
  // between source pairs, so each output is the mean of a 2x2 cell.
  Image image(4, 6);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 6; ++j) image(i, j) = i * 6 + j;
  }
  const Image out = center_crop_resize(image, 2, 3);
  ASSERT_EQ(out.rows(), 2);
  ASSERT_EQ(out.cols(), 3);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double mean = (image(2 * i, 2 * j) + image(2 * i, 2 * j + 1) +
                           image(2 * i + 1, 2 * j) +
                           image(2 * i + 1, 2 * j + 1)) /
                          4.0;
      EXPECT_NEAR(out(i, j), mean, 1e-12);
    }
  }
}

}  // namespace
}  // namespace dctnet
