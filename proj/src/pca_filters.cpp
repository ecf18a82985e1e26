#include "dctnet/pca_filters.hpp"

#include "dctnet/markov_klt.hpp"
#include "dctnet/network.hpp"

#include <sstream>
#include <stdexcept>

namespace dctnet {

PatchMatrix extract_patches(const Image& image, int k) {
  if (k < 1) throw std::invalid_argument("extract_patches: k < 1");
  if (image.rows() < k || image.cols() < k)
    throw std::invalid_argument("extract_patches: image smaller than patch");

  const Eigen::Index nr = image.rows() - k + 1;
  const Eigen::Index nc = image.cols() - k + 1;
  PatchMatrix pm;
  pm.k = k;
  pm.source_rows = static_cast<int>(image.rows());
  pm.source_cols = static_cast<int>(image.cols());
  pm.patches.resize(static_cast<Eigen::Index>(k) * k, nr * nc);

  Eigen::Index idx = 0;
  Eigen::MatrixXd patch(k, k);
  for (Eigen::Index i = 0; i < nr; ++i) {
    for (Eigen::Index j = 0; j < nc; ++j, ++idx) {
      patch = image.block(i, j, k, k);
      Eigen::Map<const Eigen::VectorXd> vec(patch.data(),
                                            static_cast<Eigen::Index>(k) * k);
      pm.patches.col(idx) = vec.array() - vec.mean();
    }
  }
  return pm;
}

PatchScatter::PatchScatter(int k) : k_(k) {
  if (k < 1) throw std::invalid_argument("PatchScatter: k < 1");
  scatter_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k) * k,
                                   static_cast<Eigen::Index>(k) * k);
}

void PatchScatter::accumulate(const Image& image) {
  const PatchMatrix pm = extract_patches(image, k_);
  scatter_.selfadjointView<Eigen::Lower>().rankUpdate(pm.patches);
  count_ += pm.patches.cols();
}

void PatchScatter::merge(const PatchScatter& other) {
  if (other.k_ != k_) throw std::invalid_argument("PatchScatter: k mismatch");
  scatter_ += other.scatter_;
  count_ += other.count_;
}

Eigen::MatrixXd PatchScatter::covariance() const {
  if (count_ == 0) throw std::runtime_error("PatchScatter: no patches");
  Eigen::MatrixXd cov =
      scatter_.selfadjointView<Eigen::Lower>();
  return cov / static_cast<double>(count_);
}

FilterBank learn_pca_bank(const Eigen::MatrixXd& covariance,
                          long long patch_count, int k, int p,
                          Eigen::VectorXd* eigenvalues_out) {
  const Eigen::Index dim = static_cast<Eigen::Index>(k) * k;
  if (covariance.rows() != dim || covariance.cols() != dim)
    throw std::invalid_argument("learn_pca_bank: covariance size mismatch");
  if (patch_count < dim)
    throw std::invalid_argument(
        "learn_pca_bank: need at least k^2 patches");
  if (p < 1 || p > dim)
    throw std::invalid_argument("learn_pca_bank: P out of range");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("learn_pca_bank: eigensolver failed");

  // Ascending from Eigen; flip to descending. Ties keep the solver's stable
  // relative order.
  Eigen::VectorXd evals = solver.eigenvalues().reverse();
  Eigen::MatrixXd evecs = solver.eigenvectors().rowwise().reverse();

  const double lambda_max = std::max(evals[0], 0.0);
  const double tol = lambda_max * 1e-10;
  Eigen::Index rank = 0;
  while (rank < dim && evals[rank] > tol) ++rank;
  const Eigen::Index usable = (dim - rank <= 1) ? dim : rank;
  if (p > usable) {
    std::ostringstream msg;
    msg << "learn_pca_bank: P=" << p << " exceeds usable rank " << usable
        << " of the patch covariance";
    throw std::invalid_argument(msg.str());
  }

  if (eigenvalues_out) *eigenvalues_out = evals;

  FilterBank bank;
  bank.k = k;
  bank.policy = ScanPolicy::kLearned;
  bank.filters.reserve(p);
  for (int i = 0; i < p; ++i) {
    Eigen::VectorXd v = evecs.col(i);
    fix_sign_convention(v);
    Filter f;
    // Inverse of the column-major patch vectorization.
    f.coefficients = Eigen::Map<const Eigen::MatrixXd>(v.data(), k, k);
    bank.filters.push_back(std::move(f));
  }
  return bank;
}

FilterBank learn_pca_bank(const PatchMatrix& patches, int p,
                          Eigen::VectorXd* eigenvalues_out) {
  const Eigen::MatrixXd cov = (patches.patches * patches.patches.transpose()) /
                              static_cast<double>(patches.patches.cols());
  return learn_pca_bank(cov, patches.patches.cols(), patches.k, p,
                        eigenvalues_out);
}

std::vector<FilterBank> learn_layered_pca(const std::vector<Image>& images,
                                          int layers,
                                          const std::vector<int>& k_per_layer,
                                          const std::vector<int>& p_per_layer) {
  if (layers < 1) throw std::invalid_argument("learn_layered_pca: layers < 1");
  if (static_cast<int>(k_per_layer.size()) != layers ||
      static_cast<int>(p_per_layer.size()) != layers)
    throw std::invalid_argument(
        "learn_layered_pca: need k and P for every layer");
  if (images.empty())
    throw std::invalid_argument("learn_layered_pca: no images");

  std::vector<FilterBank> banks;
  banks.reserve(layers);
  for (int l = 0; l < layers; ++l) {
    PatchScatter scatter(k_per_layer[l]);
    for (const auto& image : images) {
      if (l == 0) {
        scatter.accumulate(image);
      } else {
        // Pool patches from every response map of the cascade so far.
        std::vector<Image> maps{image};
        for (int prev = 0; prev < l; ++prev) {
          std::vector<Image> next;
          next.reserve(maps.size() * banks[prev].filters.size());
          for (const auto& m : maps) {
            ResponseStack stack = convolve_bank(m, banks[prev]);
            for (auto& r : stack.maps) next.push_back(std::move(r));
          }
          maps = std::move(next);
        }
        for (const auto& m : maps) scatter.accumulate(m);
      }
    }
    FilterBank bank = learn_pca_bank(scatter.covariance(),
                                     scatter.patch_count(), k_per_layer[l],
                                     p_per_layer[l]);
    for (auto& f : bank.filters) f.layer = l;
    banks.push_back(std::move(bank));
  }
  return banks;
}

}  // namespace dctnet
