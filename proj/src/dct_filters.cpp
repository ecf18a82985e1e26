#include "dctnet/dct_filters.hpp"

#include "dctnet/markov_klt.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace dctnet {

std::string to_string(ScanPolicy policy) {
  switch (policy) {
    case ScanPolicy::kZigzag:
      return "zigzag";
    case ScanPolicy::kHorizontalMajor:
      return "horizontal-major";
    case ScanPolicy::kLearned:
      return "learned";
  }
  throw std::invalid_argument("unknown scan policy");
}

ScanPolicy scan_policy_from_string(const std::string& name) {
  if (name == "zigzag") return ScanPolicy::kZigzag;
  if (name == "horizontal-major") return ScanPolicy::kHorizontalMajor;
  if (name == "learned") return ScanPolicy::kLearned;
  throw std::invalid_argument("unknown scan policy: " + name);
}

Filter dct2_basis(int k, int u, int v) {
  if (k < 1) throw std::invalid_argument("dct2_basis: k < 1");
  if (u < 0 || u >= k || v < 0 || v >= k)
    throw std::invalid_argument("dct2_basis: frequency index out of range");
  Filter f;
  f.coefficients = dct_limit_basis(k, u) * dct_limit_basis(k, v).transpose();
  f.u = u;
  f.v = v;
  return f;
}

std::vector<std::pair<int, int>> scan_order(int k, ScanPolicy policy,
                                            bool flip_axis) {
  if (k < 1) throw std::invalid_argument("scan_order: k < 1");
  if (policy == ScanPolicy::kLearned)
    throw std::invalid_argument("scan_order: no scan order for learned banks");

  std::vector<std::pair<int, int>> order;
  order.reserve(static_cast<std::size_t>(k) * k);
  for (int s = 0; s <= 2 * (k - 1); ++s) {
    const int lo = std::max(0, s - k + 1);
    const int hi = std::min(s, k - 1);
    bool u_ascending;
    if (policy == ScanPolicy::kZigzag) {
      u_ascending = (s % 2 == 1);
    } else {
      u_ascending = !flip_axis;
    }
    if (u_ascending) {
      for (int u = lo; u <= hi; ++u) order.emplace_back(u, s - u);
    } else {
      for (int u = hi; u >= lo; --u) order.emplace_back(u, s - u);
    }
  }
  return order;
}

FilterBank select_dctnet_filters(int k, int p, ScanPolicy policy,
                                 bool flip_axis) {
  if (k < 1 || k % 2 == 0)
    throw std::invalid_argument(
        "select_dctnet_filters: k must be odd so the pad (k-1)/2 is integral");
  if (p < 1) throw std::invalid_argument("select_dctnet_filters: P < 1");
  if (p > k * k - 1) {
    std::ostringstream msg;
    msg << "select_dctnet_filters: P=" << p << " too large for k=" << k
        << " (at most " << k * k - 1 << " non-DC bases)";
    throw std::invalid_argument(msg.str());
  }

  const auto order = scan_order(k, policy, flip_axis);
  FilterBank bank;
  bank.k = k;
  bank.policy = policy;
  bank.filters.reserve(p);
  // order[0] is always the DC basis (0, 0); selection starts right after it.
  for (int i = 1; i <= p; ++i)
    bank.filters.push_back(dct2_basis(k, order[i].first, order[i].second));
  return bank;
}

}  // namespace dctnet
