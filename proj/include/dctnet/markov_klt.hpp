#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace dctnet {

// First-order Markov signal model: correlation r^|i-j| between samples i, j.
// r = 1 is rejected; the correlation matrix becomes all-ones and its
// eigenvectors are no longer unique.
struct MarkovModel {
  double r = 0.0;
  int n = 0;

  MarkovModel(double r_, int n_);
};

// The closed-form eigenvalue expression circulates with two numerators.
// Both are computed; compare_klt_dct reports which one the dense
// eigensolver confirms (it is 1 - r^2).
enum class EigenvalueForm { kOneMinusRSquared, kOneMinusR };

std::string to_string(EigenvalueForm form);

// Deterministic eigenvector sign: the first element of largest magnitude is
// made positive.
void fix_sign_convention(Eigen::Ref<Eigen::VectorXd> v);

// Toeplitz correlation matrix with entry (i, j) = r^|i-j|.
Eigen::MatrixXd build_correlation_matrix(const MarkovModel& model);

// The N real frequencies in (0, pi), ascending, satisfying the transcendental
// characteristic equation of the Toeplitz eigenproblem. Requires 0 < r < 1.
// Throws if the bracketing scan does not isolate exactly N roots.
std::vector<double> solve_omega_roots(const MarkovModel& model);

double klt_eigenvalue(const MarkovModel& model, double omega,
                      EigenvalueForm form = EigenvalueForm::kOneMinusRSquared);

// Closed-form unit eigenvector for the n-th root; eigenvalues are descending
// in n (low frequency <-> large eigenvalue).
Eigen::VectorXd klt_eigenvector(const MarkovModel& model,
                                const std::vector<double>& omegas, int n);
Eigen::VectorXd klt_eigenvector(const MarkovModel& model, int n);

struct KltEigenSystem {
  std::vector<double> omegas;                 // strictly increasing
  std::vector<double> eigenvalues;            // descending, paired with omegas
  std::vector<Eigen::VectorXd> eigenvectors;  // unit norm, orthonormal
};

KltEigenSystem solve_klt_eigensystem(
    const MarkovModel& model,
    EigenvalueForm form = EigenvalueForm::kOneMinusRSquared);

// 1D DCT-II basis vector; index 0 is the constant basis. These are the
// r -> 1 limits of the Markov eigenvectors.
Eigen::VectorXd dct_limit_basis(int length, int index);

// Side-by-side comparison of the closed-form eigensystem, the dense numeric
// eigensolver, and the DCT bases.
struct KltDctComparison {
  struct Entry {
    int n = 0;
    double omega = 0.0;
    double lambda_formula = 0.0;  // matched-numerator closed form
    double lambda_printed = 0.0;  // the (1 - r) numerator variant
    double lambda_numeric = 0.0;  // dense eigensolver, sorted descending
    double cos_similarity = 0.0;  // sign-invariant, eigenvector vs DCT basis
  };

  double r = 0.0;
  int n_len = 0;
  std::vector<Entry> entries;
  double min_cos = 0.0;
  double mean_cos = 0.0;
  EigenvalueForm matched_form = EigenvalueForm::kOneMinusRSquared;
  double max_rel_err_matched = 0.0;
  double max_rel_err_other = 0.0;
  double lambda_max_numeric = 0.0;  // approaches N as r -> 1

  std::string to_text() const;
  std::string to_csv() const;
};

KltDctComparison compare_klt_dct(const MarkovModel& model);

}  // namespace dctnet
