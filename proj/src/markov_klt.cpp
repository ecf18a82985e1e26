#include "dctnet/markov_klt.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace dctnet {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Characteristic equation in cross-multiplied form,
//   g(w) = sin(Nw) * ((1 + r^2) cos w - 2r) + cos(Nw) * (1 - r^2) sin w,
// continuous on (0, pi) unlike the tan(Nw) form, which has N poles there.
double characteristic(double r, int n, double w) {
  return std::sin(n * w) * ((1.0 + r * r) * std::cos(w) - 2.0 * r) +
         std::cos(n * w) * (1.0 - r * r) * std::sin(w);
}

}  // namespace

std::string to_string(EigenvalueForm form) {
  return form == EigenvalueForm::kOneMinusRSquared ? "1-r^2" : "1-r";
}

MarkovModel::MarkovModel(double r_, int n_) : r(r_), n(n_) {
  if (!(r >= 0.0 && r < 1.0)) {
    if (r == 1.0) {
      throw std::invalid_argument(
          "MarkovModel: r = 1 rejected (correlation matrix is singular and "
          "eigenvectors are not unique)");
    }
    throw std::invalid_argument("MarkovModel: r must be in [0, 1)");
  }
  if (n < 2) throw std::invalid_argument("MarkovModel: N must be >= 2");
}

void fix_sign_convention(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index best = 0;
  double best_mag = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v[i]);
    if (mag > best_mag) {
      best_mag = mag;
      best = i;
    }
  }
  if (v[best] < 0.0) v = -v;
}

Eigen::MatrixXd build_correlation_matrix(const MarkovModel& model) {
  const int n = model.n;
  Eigen::MatrixXd out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = std::pow(model.r, std::abs(i - j));
  return out;
}

std::vector<double> solve_omega_roots(const MarkovModel& model) {
  const double r = model.r;
  const int n = model.n;
  if (!(r > 0.0 && r < 1.0))
    throw std::invalid_argument("solve_omega_roots: requires 0 < r < 1");

  // g vanishes at both endpoints for every r, so scan strictly inside.
  const int grid = 200 * n;
  const double step = kPi / grid;
  std::vector<double> roots;
  double x0 = 0.5 * step;
  double g0 = characteristic(r, n, x0);
  for (int i = 1; i < grid; ++i) {
    const double x1 = (i + 0.5) * step;
    const double g1 = characteristic(r, n, x1);
    if (g0 == 0.0) {
      roots.push_back(x0);
    } else if (g0 * g1 < 0.0) {
      double a = x0, b = x1, ga = g0;
      while (b - a > 1e-13) {
        const double m = 0.5 * (a + b);
        const double gm = characteristic(r, n, m);
        if (ga * gm <= 0.0) {
          b = m;
        } else {
          a = m;
          ga = gm;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    x0 = x1;
    g0 = g1;
  }

  if (static_cast<int>(roots.size()) != n) {
    std::ostringstream msg;
    msg << "solve_omega_roots: expected " << n << " sign changes, found "
        << roots.size() << " (r=" << r << ", grid=" << grid << "); brackets:";
    for (std::size_t i = 0; i < roots.size() && i < 8; ++i)
      msg << " " << roots[i];
    throw std::runtime_error(msg.str());
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

double klt_eigenvalue(const MarkovModel& model, double omega,
                      EigenvalueForm form) {
  const double r = model.r;
  const double numer =
      form == EigenvalueForm::kOneMinusRSquared ? 1.0 - r * r : 1.0 - r;
  return numer / (1.0 - 2.0 * r * std::cos(omega) + r * r);
}

Eigen::VectorXd klt_eigenvector(const MarkovModel& model,
                                const std::vector<double>& omegas, int n) {
  const int len = model.n;
  if (n < 0 || n >= len)
    throw std::invalid_argument("klt_eigenvector: index out of range");
  if (static_cast<int>(omegas.size()) != len)
    throw std::invalid_argument("klt_eigenvector: need all N roots");

  const double w = omegas[n];
  const double lambda = klt_eigenvalue(model, w);
  const double scale = std::sqrt(2.0 / (len + lambda));
  Eigen::VectorXd v(len);
  for (int m = 0; m < len; ++m)
    v[m] = scale * std::sin(w * (m - (len - 1) / 2.0) + (n + 1) * kPi / 2.0);
  v.normalize();
  fix_sign_convention(v);
  return v;
}

Eigen::VectorXd klt_eigenvector(const MarkovModel& model, int n) {
  return klt_eigenvector(model, solve_omega_roots(model), n);
}

KltEigenSystem solve_klt_eigensystem(const MarkovModel& model,
                                     EigenvalueForm form) {
  KltEigenSystem sys;
  sys.omegas = solve_omega_roots(model);
  sys.eigenvalues.reserve(model.n);
  sys.eigenvectors.reserve(model.n);
  for (int n = 0; n < model.n; ++n) {
    sys.eigenvalues.push_back(klt_eigenvalue(model, sys.omegas[n], form));
    sys.eigenvectors.push_back(klt_eigenvector(model, sys.omegas, n));
  }
  return sys;
}

Eigen::VectorXd dct_limit_basis(int length, int index) {
  if (length < 1) throw std::invalid_argument("dct_limit_basis: length < 1");
  if (index < 0 || index >= length)
    throw std::invalid_argument("dct_limit_basis: index out of range");
  Eigen::VectorXd v(length);
  if (index == 0) {
    v.setConstant(std::sqrt(1.0 / length));
    return v;
  }
  const double scale = std::sqrt(2.0 / length);
  for (int m = 0; m < length; ++m)
    v[m] = scale * std::cos(index * kPi * (2 * m + 1) / (2.0 * length));
  return v;
}

KltDctComparison compare_klt_dct(const MarkovModel& model) {
  const int len = model.n;
  KltDctComparison cmp;
  cmp.r = model.r;
  cmp.n_len = len;

  const std::vector<double> omegas = solve_omega_roots(model);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      build_correlation_matrix(model));
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("compare_klt_dct: eigensolver failed");
  const Eigen::VectorXd numeric_asc = solver.eigenvalues();
  cmp.lambda_max_numeric = numeric_asc[len - 1];

  double err_sq = 0.0, err_pr = 0.0;
  double sum_cos = 0.0;
  cmp.min_cos = 1.0;
  cmp.entries.reserve(len);
  for (int n = 0; n < len; ++n) {
    KltDctComparison::Entry e;
    e.n = n;
    e.omega = omegas[n];
    // Closed-form eigenvalues descend with n; numeric eigenvalues ascend.
    e.lambda_numeric = numeric_asc[len - 1 - n];
    const double lam_sq =
        klt_eigenvalue(model, omegas[n], EigenvalueForm::kOneMinusRSquared);
    e.lambda_printed =
        klt_eigenvalue(model, omegas[n], EigenvalueForm::kOneMinusR);
    err_sq = std::max(err_sq,
                      std::abs(lam_sq - e.lambda_numeric) / e.lambda_numeric);
    err_pr = std::max(
        err_pr, std::abs(e.lambda_printed - e.lambda_numeric) / e.lambda_numeric);
    e.lambda_formula = lam_sq;
    const Eigen::VectorXd phi = klt_eigenvector(model, omegas, n);
    e.cos_similarity = std::abs(phi.dot(dct_limit_basis(len, n)));
    cmp.min_cos = std::min(cmp.min_cos, e.cos_similarity);
    sum_cos += e.cos_similarity;
    cmp.entries.push_back(e);
  }
  cmp.mean_cos = sum_cos / len;

  if (err_sq <= err_pr) {
    cmp.matched_form = EigenvalueForm::kOneMinusRSquared;
    cmp.max_rel_err_matched = err_sq;
    cmp.max_rel_err_other = err_pr;
  } else {
    cmp.matched_form = EigenvalueForm::kOneMinusR;
    cmp.max_rel_err_matched = err_pr;
    cmp.max_rel_err_other = err_sq;
    for (auto& e : cmp.entries) std::swap(e.lambda_formula, e.lambda_printed);
  }
  return cmp;
}

std::string KltDctComparison::to_text() const {
  std::ostringstream os;
  os << std::setprecision(10);
  os << "KLT/DCT comparison: r=" << r << " N=" << n_len << "\n";
  os << "eigenvalue numerator \"" << to_string(matched_form)
     << "\" matches the numeric eigensolver (max rel err "
     << std::setprecision(3) << max_rel_err_matched << "); the \""
     << to_string(matched_form == EigenvalueForm::kOneMinusRSquared
                      ? EigenvalueForm::kOneMinusR
                      : EigenvalueForm::kOneMinusRSquared)
     << "\" variant deviates (max rel err " << max_rel_err_other << ")\n";
  os << std::setprecision(10) << "largest numeric eigenvalue "
     << lambda_max_numeric << " (approaches N=" << n_len << " as r -> 1)\n";
  os << "   n        omega       lambda_formula   lambda_numeric   |cos|\n";
  for (const auto& e : entries) {
    os << std::setw(4) << e.n << "  " << std::setw(12) << e.omega << " "
       << std::setw(16) << e.lambda_formula << " " << std::setw(16)
       << e.lambda_numeric << "   " << e.cos_similarity << "\n";
  }
  os << "min |cos| = " << min_cos << "  mean |cos| = " << mean_cos << "\n";
  return os.str();
}

std::string KltDctComparison::to_csv() const {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "n,omega,lambda_formula,lambda_numeric,cos_similarity\n";
  for (const auto& e : entries) {
    os << e.n << "," << e.omega << "," << e.lambda_formula << ","
       << e.lambda_numeric << "," << e.cos_similarity << "\n";
  }
  return os.str();
}

}  // namespace dctnet
