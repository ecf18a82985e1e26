#pragma once

#include "dctnet/types.hpp"

namespace dctnet {

// Columns are vectorized k x k patches (column-major), one per stride-1
// position, each with its own mean removed.
struct PatchMatrix {
  Eigen::MatrixXd patches;  // k^2 x M
  int k = 0;
  int source_rows = 0;
  int source_cols = 0;
};

// All stride-1 overlapping patches of the valid (unpadded) region, positions
// traversed row-major.
PatchMatrix extract_patches(const Image& image, int k);

// Streaming accumulator for the k^2 x k^2 patch scatter matrix; galleries can
// contribute millions of patches without materializing them.
class PatchScatter {
 public:
  explicit PatchScatter(int k);

  void accumulate(const Image& image);
  void merge(const PatchScatter& other);

  long long patch_count() const { return count_; }
  Eigen::MatrixXd covariance() const;  // (1/M) * sum of x x^T

 private:
  int k_;
  long long count_ = 0;
  Eigen::MatrixXd scatter_;
};

// Top-P covariance eigenvectors by descending eigenvalue, reshaped to k x k,
// with the deterministic sign convention. Per-patch mean removal annihilates
// exactly the constant direction, so a single numerically-zero eigenvalue
// still has a unique eigendirection and counts as usable; more than one
// leaves arbitrary directions and raises an error naming the usable rank.
FilterBank learn_pca_bank(const PatchMatrix& patches, int p,
                          Eigen::VectorXd* eigenvalues_out = nullptr);
FilterBank learn_pca_bank(const Eigen::MatrixXd& covariance,
                          long long patch_count, int k, int p,
                          Eigen::VectorXd* eigenvalues_out = nullptr);

// Layer 1 learns from the input images; each further layer learns from the
// response maps of the previous layer's bank, pooled across all filters.
std::vector<FilterBank> learn_layered_pca(const std::vector<Image>& images,
                                          int layers,
                                          const std::vector<int>& k_per_layer,
                                          const std::vector<int>& p_per_layer);

}  // namespace dctnet
