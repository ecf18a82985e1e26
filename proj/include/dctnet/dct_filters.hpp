#pragma once

#include "dctnet/types.hpp"

#include <utility>
#include <vector>

namespace dctnet {

// 2D DCT basis as a k x k filter: outer product of the 1D bases for row
// frequency u and column frequency v. Unit Frobenius norm.
Filter dct2_basis(int k, int u, int v);

// Visits all k^2 (u, v) pairs antidiagonal by antidiagonal (u + v ascending).
// Zigzag alternates direction each antidiagonal (Baseline JPEG); horizontal
// major keeps a fixed direction, visiting the highest column frequency first
// within each antidiagonal. flip_axis reverses the within-antidiagonal
// direction, i.e. swaps which frequency axis dominates.
std::vector<std::pair<int, int>> scan_order(int k, ScanPolicy policy,
                                            bool flip_axis = false);

// The P lowest-ranked non-DC bases: scan positions 2..P+1 (1-indexed). The DC
// basis (0, 0) always ranks first and is never selected. k must be odd so the
// convolution pad (k-1)/2 is integral.
FilterBank select_dctnet_filters(int k, int p, ScanPolicy policy,
                                 bool flip_axis = false);

}  // namespace dctnet
