#pragma once

#include "dctnet/types.hpp"

#include <string>

namespace dctnet {

// Loads an 8-bit PGM (binary P5) or PNG image as a grayscale matrix with
// values in [0, 255]. Color inputs are converted with BT.601 luminance
// (0.299 R + 0.587 G + 0.114 B). When the source dims differ from the target,
// the image is center-cropped to the target aspect ratio and bilinearly
// resized; at the target dims already, values pass through unchanged.
Image load_image_grayscale(const std::string& path, int target_rows,
                           int target_cols);

Image load_pgm(const std::string& path);
void save_pgm(const std::string& path, const Image& image);

// Largest centered sub-rectangle with the target aspect ratio, then bilinear
// resize. Identity when dims already match.
Image center_crop_resize(const Image& image, int target_rows, int target_cols);

Image bilinear_resize(const Image& image, int target_rows, int target_cols);

}  // namespace dctnet
