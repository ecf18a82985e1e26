#include "dctnet/tr_norm.hpp"

#include "dctnet/markov_klt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace dctnet {

std::string to_string(FeatureStage stage) {
  switch (stage) {
    case FeatureStage::kRawHist:
      return "raw-hist";
    case FeatureStage::kTrNormalized:
      return "tr-normalized";
    case FeatureStage::kWpca:
      return "wpca";
  }
  throw std::invalid_argument("unknown feature stage");
}

std::vector<double> tied_rank_nonzero(const std::vector<std::uint32_t>& hist) {
  std::vector<double> out(hist.size(), 0.0);

  std::vector<std::size_t> nonzero;
  nonzero.reserve(hist.size());
  for (std::size_t i = 0; i < hist.size(); ++i)
    if (hist[i] != 0) nonzero.push_back(i);
  if (nonzero.empty()) return out;

  std::stable_sort(nonzero.begin(), nonzero.end(),
                   [&](std::size_t a, std::size_t b) { return hist[a] < hist[b]; });

  // Runs of equal counts share the average of their positional ranks.
  std::size_t i = 0;
  while (i < nonzero.size()) {
    std::size_t j = i;
    while (j + 1 < nonzero.size() && hist[nonzero[j + 1]] == hist[nonzero[i]])
      ++j;
    const double avg_rank = 0.5 * ((i + 1) + (j + 1));
    for (std::size_t t = i; t <= j; ++t) out[nonzero[t]] = avg_rank;
    i = j + 1;
  }
  return out;
}

namespace {

FeatureVector concatenate_blocks(
    const BlockHistogramSet& hists, bool tr,
    FeatureStage stage) {
  if (hists.channels() < 1 || hists.bins < 1)
    throw std::invalid_argument("empty histogram set");
  const int b_count = hists.geometry.block_count();
  const Eigen::Index seg = hists.bins;

  FeatureVector f;
  f.stage = stage;
  f.values.resize(seg * b_count * hists.channels());
  Eigen::Index offset = 0;
  for (const auto& channel : hists.histograms) {
    if (static_cast<int>(channel.size()) != b_count)
      throw std::invalid_argument("histogram set: block count mismatch");
    for (const auto& hist : channel) {
      if (static_cast<Eigen::Index>(hist.size()) != seg)
        throw std::invalid_argument("histogram set: bin count mismatch");
      if (tr) {
        const std::vector<double> ranks = tied_rank_nonzero(hist);
        double sq = 0.0;
        for (Eigen::Index i = 0; i < seg; ++i) {
          f.values[offset + i] = std::sqrt(ranks[i]);
          sq += ranks[i];  // sum of sqrt(rank)^2
        }
        if (sq > 0.0) f.values.segment(offset, seg) /= std::sqrt(sq);
      } else {
        for (Eigen::Index i = 0; i < seg; ++i)
          f.values[offset + i] = static_cast<double>(hist[i]);
      }
      offset += seg;
    }
  }
  return f;
}

}  // namespace

FeatureVector tr_normalize(const BlockHistogramSet& hists) {
  return concatenate_blocks(hists, true, FeatureStage::kTrNormalized);
}

FeatureVector flatten_histograms(const BlockHistogramSet& hists) {
  return concatenate_blocks(hists, false, FeatureStage::kRawHist);
}

WpcaModel fit_wpca(const std::vector<FeatureVector>& gallery, int d_out) {
  const Eigen::Index n = static_cast<Eigen::Index>(gallery.size());
  if (n < 2) throw std::invalid_argument("fit_wpca: need at least 2 features");
  const Eigen::Index dim = gallery[0].values.size();
  for (const auto& f : gallery)
    if (f.values.size() != dim)
      throw std::invalid_argument("fit_wpca: feature dim mismatch");
  if (d_out < 1 || d_out > std::min<Eigen::Index>(n - 1, dim)) {
    std::ostringstream msg;
    msg << "fit_wpca: d_out=" << d_out << " must be in [1, "
        << std::min<Eigen::Index>(n - 1, dim) << "] for " << n
        << " gallery features of dim " << dim;
    throw std::invalid_argument(msg.str());
  }

  WpcaModel model;
  model.mean = Eigen::VectorXd::Zero(dim);
  for (const auto& f : gallery) model.mean += f.values;
  model.mean /= static_cast<double>(n);

  Eigen::MatrixXd centered(dim, n);
  for (Eigen::Index i = 0; i < n; ++i)
    centered.col(i) = gallery[i].values - model.mean;

  // Eigenvectors of the covariance, descending. When samples are fewer than
  // dimensions, solve the n x n Gram problem instead: if G w = lambda w with
  // G = X^T X / n, then X w / sqrt(n lambda) is a unit covariance eigenvector
  // for the same lambda.
  Eigen::VectorXd evals;
  Eigen::MatrixXd evecs;
  if (dim <= n) {
    const Eigen::MatrixXd cov =
        centered * centered.transpose() / static_cast<double>(n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("fit_wpca: eigensolver failed");
    evals = solver.eigenvalues().reverse();
    evecs = solver.eigenvectors().rowwise().reverse();
  } else {
    const Eigen::MatrixXd gram =
        centered.transpose() * centered / static_cast<double>(n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("fit_wpca: eigensolver failed");
    const Eigen::VectorXd gram_evals = solver.eigenvalues().reverse();
    const Eigen::MatrixXd gram_evecs = solver.eigenvectors().rowwise().reverse();
    evals = gram_evals.head(n);
    evecs.resize(dim, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double lam = std::max(gram_evals[i], 0.0);
      const double denom = std::sqrt(static_cast<double>(n) * lam);
      if (denom > 0.0)
        evecs.col(i) = centered * gram_evecs.col(i) / denom;
      else
        evecs.col(i).setZero();
    }
  }

  const double lambda_max = std::max(evals[0], 0.0);
  Eigen::Index rank = 0;
  while (rank < evals.size() && evals[rank] > lambda_max * 1e-10) ++rank;
  if (d_out > rank) {
    std::ostringstream msg;
    msg << "fit_wpca: d_out=" << d_out
        << " exceeds the numeric rank of the centered gallery (" << rank << ")";
    throw std::invalid_argument(msg.str());
  }

  // Whitening floor keeps near-zero eigenvalues from blowing up the scale.
  const double eps = 1e-10 * lambda_max;
  model.projection.resize(d_out, dim);
  for (int i = 0; i < d_out; ++i) {
    Eigen::VectorXd v = evecs.col(i);
    fix_sign_convention(v);
    model.projection.row(i) = v.transpose() / std::sqrt(evals[i] + eps);
  }
  return model;
}

FeatureVector project_wpca(const WpcaModel& model, const FeatureVector& f) {
  if (f.values.size() != model.projection.cols())
    throw std::invalid_argument("project_wpca: dimension mismatch");
  FeatureVector out;
  out.stage = FeatureStage::kWpca;
  out.values = model.projection * (f.values - model.mean);
  return out;
}

}  // namespace dctnet
