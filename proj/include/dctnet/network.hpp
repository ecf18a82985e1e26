#pragma once

#include "dctnet/types.hpp"

namespace dctnet {

// Applies every filter of the bank to the input as cross-correlation (no
// kernel flip) with zero padding of (k-1)/2 per side, so each response map
// keeps the input size.
ResponseStack convolve_bank(const Image& input, const FilterBank& bank);

// Feeds every output map of each layer as a single-channel input to the next
// bank. Returns D = P_1 * ... * P_{L-1} stacks of P_L maps, grouped by their
// last-but-one-layer parent map, in parent order.
std::vector<ResponseStack> forward_cascade(const Image& input,
                                           const std::vector<FilterBank>& banks);

// Per pixel, code = sum_p 2^(p-1) * [map_p > 0]. Map 0 contributes the least
// significant bit; exactly-zero responses contribute 0.
CodeImage binarize_encode(const std::vector<Image>& maps);
CodeImage binarize_encode(const ResponseStack& stack);

// Non-overlapping block grid of ceil(rows/h) x ceil(cols/w); edge blocks
// absorb the remainder. Single-channel histogram set, blocks in row-major
// grid order.
BlockHistogramSet block_histogram(const CodeImage& code, int block_rows,
                                  int block_cols);

// Multi-channel variant: one channel per code image; all images must share
// dims and bit depth.
BlockHistogramSet block_histograms(const std::vector<CodeImage>& codes,
                                   int block_rows, int block_cols);

}  // namespace dctnet
