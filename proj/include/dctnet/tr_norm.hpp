#pragma once

#include "dctnet/types.hpp"

namespace dctnet {

// Ascending tied ranks of the nonzero bins (1..#nonzero, ties averaged);
// zero-count bins are not samples and map to 0.
std::vector<double> tied_rank_nonzero(const std::vector<std::uint32_t>& hist);

// Per block: tied rank -> elementwise square root -> L2 normalization.
// Segments concatenate block-inner, channel-outer; all-zero blocks pass
// through as zero segments. Output length is bins * B * D.
FeatureVector tr_normalize(const BlockHistogramSet& hists);

// Raw counts in the same concatenation order (the no-normalization path).
FeatureVector flatten_histograms(const BlockHistogramSet& hists);

// Whitening PCA learned from gallery features: projection rows are the top
// covariance eigenvectors scaled by 1/sqrt(lambda + eps).
struct WpcaModel {
  Eigen::VectorXd mean;
  Eigen::MatrixXd projection;  // d_out x dim

  int output_dim() const { return static_cast<int>(projection.rows()); }
  int input_dim() const { return static_cast<int>(projection.cols()); }
};

WpcaModel fit_wpca(const std::vector<FeatureVector>& gallery, int d_out);
FeatureVector project_wpca(const WpcaModel& model, const FeatureVector& f);

}  // namespace dctnet
