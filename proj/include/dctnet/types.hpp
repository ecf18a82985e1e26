#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace dctnet {

// Grayscale image or response map; input pixel values live in [0, 255].
using Image = Eigen::MatrixXd;

enum class ScanPolicy : std::uint8_t { kZigzag = 0, kHorizontalMajor = 1, kLearned = 2 };

std::string to_string(ScanPolicy policy);
ScanPolicy scan_policy_from_string(const std::string& name);

// One k x k convolution filter. (u, v) are frequency indices along image
// rows and columns; learned filters carry (-1, -1).
struct Filter {
  Eigen::MatrixXd coefficients;
  int layer = 0;
  int u = -1;
  int v = -1;
};

struct FilterBank {
  std::vector<Filter> filters;
  int k = 0;
  ScanPolicy policy = ScanPolicy::kHorizontalMajor;

  int count() const { return static_cast<int>(filters.size()); }
};

// Response maps produced by one bank applied to one input channel; every map
// has the same dims as the input (zero padding preserves size).
struct ResponseStack {
  std::vector<Image> maps;
  int layer = 0;
};

using CodeMatrix = Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic>;

// Integer-coded map packing the response signs of one stack; values in
// [0, 2^bits - 1].
struct CodeImage {
  CodeMatrix codes;
  int bits = 0;
};

struct BlockGeometry {
  int block_rows = 0;  // nominal block size; edge blocks may be smaller
  int block_cols = 0;
  int grid_rows = 0;
  int grid_cols = 0;

  int block_count() const { return grid_rows * grid_cols; }
};

// Per-channel, per-block code histograms: histograms[d][b][bin], blocks in
// row-major grid order.
struct BlockHistogramSet {
  int bins = 0;
  BlockGeometry geometry;
  std::vector<std::vector<std::vector<std::uint32_t>>> histograms;

  int channels() const { return static_cast<int>(histograms.size()); }
};

enum class FeatureStage : std::uint8_t { kRawHist = 0, kTrNormalized = 1, kWpca = 2 };

std::string to_string(FeatureStage stage);

struct FeatureVector {
  Eigen::VectorXd values;
  FeatureStage stage = FeatureStage::kRawHist;
};

}  // namespace dctnet
