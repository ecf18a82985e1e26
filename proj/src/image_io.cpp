#include "dctnet/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <vector>

namespace dctnet {
namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::runtime_error(path + ": " + what);
}

// Reads the next whitespace-delimited token, skipping '#' comment lines as
// PGM headers allow.
std::string next_pgm_token(std::istream& in) {
  std::string token;
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      // keep skipping
    } else {
      break;
    }
    c = in.get();
  }
  while (c != EOF && !std::isspace(static_cast<unsigned char>(c)) &&
         c != '#') {
    token.push_back(static_cast<char>(c));
    if (std::isspace(static_cast<unsigned char>(in.peek())) ||
        in.peek() == '#') {
      break;
    }
    c = in.get();
  }
  return token;
}

int parse_pgm_int(std::istream& in, const std::string& path,
                  const std::string& field) {
  std::string token = next_pgm_token(in);
  if (token.empty()) fail(path, "truncated header (missing " + field + ")");
  try {
    size_t pos = 0;
    int value = std::stoi(token, &pos);
    if (pos != token.size()) throw std::invalid_argument(token);
    return value;
  } catch (const std::exception&) {
    fail(path, "invalid " + field + " '" + token + "'");
  }
}

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};

Image load_png(const std::string& path) {
  std::unique_ptr<std::FILE, FileCloser> file(std::fopen(path.c_str(), "rb"));
  if (!file) fail(path, "cannot open file");

  png_byte header[8];
  if (std::fread(header, 1, 8, file.get()) != 8 ||
      png_sig_cmp(header, 0, 8) != 0) {
    fail(path, "not a PNG file");
  }

  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) fail(path, "png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    fail(path, "png_create_info_struct failed");
  }

  std::vector<png_bytep> row_ptrs;
  std::vector<png_byte> pixels;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(path, "corrupt PNG data");
  }

  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);

  if (bit_depth > 8) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(path, "unsupported bit depth " + std::to_string(bit_depth) +
                   " (only 8-bit images are supported)");
  }

  // Normalize every variant to 8-bit RGB so one conversion path suffices.
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type == PNG_COLOR_TYPE_GRAY ||
      color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
    png_set_gray_to_rgb(png);
  }
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  const size_t row_bytes = png_get_rowbytes(png, info);
  pixels.resize(row_bytes * height);
  row_ptrs.resize(height);
  for (png_uint_32 y = 0; y < height; ++y) {
    row_ptrs[y] = pixels.data() + y * row_bytes;
  }
  png_read_image(png, row_ptrs.data());
  png_destroy_read_struct(&png, &info, nullptr);

  Image out(static_cast<int>(height), static_cast<int>(width));
  for (png_uint_32 y = 0; y < height; ++y) {
    const png_byte* row = pixels.data() + y * row_bytes;
    for (png_uint_32 x = 0; x < width; ++x) {
      const double r = row[3 * x + 0];
      const double g = row[3 * x + 1];
      const double b = row[3 * x + 2];
      out(static_cast<int>(y), static_cast<int>(x)) =
          0.299 * r + 0.587 * g + 0.114 * b;
    }
  }
  return out;
}

bool has_png_signature(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open file");
  unsigned char sig[8] = {};
  in.read(reinterpret_cast<char*>(sig), 8);
  static const unsigned char kPngSig[8] = {0x89, 'P',  'N',  'G',
                                           0x0d, 0x0a, 0x1a, 0x0a};
  return in.gcount() == 8 && std::equal(sig, sig + 8, kPngSig);
}

}  // namespace

Image load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open file");

  std::string magic = next_pgm_token(in);
  if (magic != "P5") fail(path, "not a binary PGM (expected magic P5)");

  const int cols = parse_pgm_int(in, path, "width");
  const int rows = parse_pgm_int(in, path, "height");
  const int maxval = parse_pgm_int(in, path, "maxval");
  if (cols <= 0 || rows <= 0) fail(path, "non-positive image dimensions");
  if (maxval <= 0 || maxval > 255) {
    fail(path, "unsupported maxval " + std::to_string(maxval) +
                   " (only 8-bit images are supported)");
  }
  // Exactly one whitespace byte separates the maxval from the raster data.
  const int separator = in.get();
  if (separator == EOF ||
      !std::isspace(static_cast<unsigned char>(separator))) {
    fail(path, "missing whitespace separator before raster data");
  }

  std::vector<unsigned char> raster(static_cast<size_t>(rows) * cols);
  in.read(reinterpret_cast<char*>(raster.data()),
          static_cast<std::streamsize>(raster.size()));
  if (static_cast<size_t>(in.gcount()) != raster.size()) {
    fail(path, "truncated raster data");
  }

  Image out(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      out(i, j) = raster[static_cast<size_t>(i) * cols + j];
    }
  }
  return out;
}

void save_pgm(const std::string& path, const Image& image) {
  if (image.rows() <= 0 || image.cols() <= 0) {
    fail(path, "cannot write empty image");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open file for writing");

  out << "P5\n" << image.cols() << " " << image.rows() << "\n255\n";
  std::vector<unsigned char> raster(
      static_cast<size_t>(image.rows()) * image.cols());
  for (int i = 0; i < image.rows(); ++i) {
    for (int j = 0; j < image.cols(); ++j) {
      const double v = std::clamp(std::round(image(i, j)), 0.0, 255.0);
      raster[static_cast<size_t>(i) * image.cols() + j] =
          static_cast<unsigned char>(v);
    }
  }
  out.write(reinterpret_cast<const char*>(raster.data()),
            static_cast<std::streamsize>(raster.size()));
  if (!out) fail(path, "write failed");
}

Image bilinear_resize(const Image& image, int target_rows, int target_cols) {
  if (target_rows <= 0 || target_cols <= 0) {
    throw std::invalid_argument("bilinear_resize: target dims must be >= 1");
  }
  if (image.rows() == target_rows && image.cols() == target_cols) {
    return image;
  }

  Image out(target_rows, target_cols);
  const double row_scale =
      static_cast<double>(image.rows()) / static_cast<double>(target_rows);
  const double col_scale =
      static_cast<double>(image.cols()) / static_cast<double>(target_cols);

  for (int i = 0; i < target_rows; ++i) {
    // Pixel-center alignment: dst center (i + 0.5) maps to src coordinate
    // (i + 0.5) * scale, whose center offset is -0.5.
    double sy = (i + 0.5) * row_scale - 0.5;
    sy = std::clamp(sy, 0.0, static_cast<double>(image.rows() - 1));
    const int y0 = static_cast<int>(std::floor(sy));
    const int y1 = std::min(y0 + 1, static_cast<int>(image.rows()) - 1);
    const double fy = sy - y0;
    for (int j = 0; j < target_cols; ++j) {
      double sx = (j + 0.5) * col_scale - 0.5;
      sx = std::clamp(sx, 0.0, static_cast<double>(image.cols() - 1));
      const int x0 = static_cast<int>(std::floor(sx));
      const int x1 = std::min(x0 + 1, static_cast<int>(image.cols()) - 1);
      const double fx = sx - x0;
      const double top =
          (1.0 - fx) * image(y0, x0) + fx * image(y0, x1);
      const double bottom =
          (1.0 - fx) * image(y1, x0) + fx * image(y1, x1);
      out(i, j) = (1.0 - fy) * top + fy * bottom;
    }
  }
  return out;
}

Image center_crop_resize(const Image& image, int target_rows,
                         int target_cols) {
  if (target_rows <= 0 || target_cols <= 0) {
    throw std::invalid_argument(
        "center_crop_resize: target dims must be >= 1");
  }
  if (image.rows() == target_rows && image.cols() == target_cols) {
    return image;
  }

  // Largest centered window matching the target aspect ratio. Compare
  // rows/cols ratios via cross-multiplication to stay in exact integers.
  const long long src_r = image.rows();
  const long long src_c = image.cols();
  long long crop_rows = src_r;
  long long crop_cols = src_c;
  if (src_r * target_cols > src_c * target_rows) {
    // Source is taller than the target shape: trim rows.
    crop_rows = std::max<long long>(
        1, (src_c * target_rows + target_cols / 2) / target_cols);
  } else if (src_r * target_cols < src_c * target_rows) {
    // Source is wider: trim columns.
    crop_cols = std::max<long long>(
        1, (src_r * target_cols + target_rows / 2) / target_rows);
  }
  crop_rows = std::min(crop_rows, src_r);
  crop_cols = std::min(crop_cols, src_c);

  const long long row0 = (src_r - crop_rows) / 2;
  const long long col0 = (src_c - crop_cols) / 2;
  Image cropped = image.block(row0, col0, crop_rows, crop_cols);
  return bilinear_resize(cropped, target_rows, target_cols);
}

Image load_image_grayscale(const std::string& path, int target_rows,
                           int target_cols) {
  Image raw = has_png_signature(path) ? load_png(path) : load_pgm(path);
  return center_crop_resize(raw, target_rows, target_cols);
}

}  // namespace dctnet
