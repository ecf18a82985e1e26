#include "dctnet/network.hpp"

#include <sstream>
#include <stdexcept>

namespace dctnet {

namespace {

void check_bank(const FilterBank& bank) {
  if (bank.filters.empty())
    throw std::invalid_argument("convolve_bank: empty filter bank");
  if (bank.k < 1 || bank.k % 2 == 0)
    throw std::invalid_argument("convolve_bank: filter size must be odd");
  for (const auto& f : bank.filters)
    if (f.coefficients.rows() != bank.k || f.coefficients.cols() != bank.k)
      throw std::invalid_argument("convolve_bank: filter/bank size mismatch");
}

}  // namespace

ResponseStack convolve_bank(const Image& input, const FilterBank& bank) {
  check_bank(bank);
  if (input.rows() < 1 || input.cols() < 1)
    throw std::invalid_argument("convolve_bank: empty input");

  const int k = bank.k;
  const int pad = (k - 1) / 2;
  const Eigen::Index rows = input.rows(), cols = input.cols();

  Image padded = Image::Zero(rows + 2 * pad, cols + 2 * pad);
  padded.block(pad, pad, rows, cols) = input;

  ResponseStack stack;
  stack.layer = bank.filters.front().layer;
  stack.maps.reserve(bank.filters.size());
  for (const auto& f : bank.filters) {
    Image out(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j)
        out(i, j) =
            (padded.block(i, j, k, k).array() * f.coefficients.array()).sum();
    stack.maps.push_back(std::move(out));
  }
  return stack;
}

std::vector<ResponseStack> forward_cascade(
    const Image& input, const std::vector<FilterBank>& banks) {
  if (banks.empty())
    throw std::invalid_argument("forward_cascade: need at least one bank");

  // All layers but the last: flat list of maps, parent-major order.
  std::vector<Image> current{input};
  for (std::size_t l = 0; l + 1 < banks.size(); ++l) {
    std::vector<Image> next;
    next.reserve(current.size() * banks[l].filters.size());
    for (const auto& map : current) {
      ResponseStack stack = convolve_bank(map, banks[l]);
      for (auto& m : stack.maps) next.push_back(std::move(m));
    }
    current = std::move(next);
  }

  const int last = static_cast<int>(banks.size()) - 1;
  std::vector<ResponseStack> out;
  out.reserve(current.size());
  for (const auto& map : current) {
    ResponseStack stack = convolve_bank(map, banks[last]);
    stack.layer = last;
    out.push_back(std::move(stack));
  }
  return out;
}

CodeImage binarize_encode(const std::vector<Image>& maps) {
  const int p_count = static_cast<int>(maps.size());
  if (p_count < 1) throw std::invalid_argument("binarize_encode: no maps");
  if (p_count > 30)
    throw std::invalid_argument("binarize_encode: more than 30 maps");
  const Eigen::Index rows = maps[0].rows(), cols = maps[0].cols();
  for (const auto& m : maps)
    if (m.rows() != rows || m.cols() != cols)
      throw std::invalid_argument("binarize_encode: map size mismatch");

  CodeImage code;
  code.bits = p_count;
  code.codes = CodeMatrix::Zero(rows, cols);
  for (int p = 0; p < p_count; ++p) {
    const std::int32_t bit = std::int32_t{1} << p;
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j)
        if (maps[p](i, j) > 0.0) code.codes(i, j) |= bit;
  }
  return code;
}

CodeImage binarize_encode(const ResponseStack& stack) {
  return binarize_encode(stack.maps);
}

BlockHistogramSet block_histogram(const CodeImage& code, int block_rows,
                                  int block_cols) {
  const Eigen::Index rows = code.codes.rows(), cols = code.codes.cols();
  if (block_rows < 1 || block_rows > rows || block_cols < 1 ||
      block_cols > cols)
    throw std::invalid_argument("block_histogram: block size out of range");
  if (code.bits < 1 || code.bits > 30)
    throw std::invalid_argument("block_histogram: invalid bit depth");

  BlockHistogramSet set;
  set.bins = 1 << code.bits;
  set.geometry.block_rows = block_rows;
  set.geometry.block_cols = block_cols;
  set.geometry.grid_rows =
      static_cast<int>((rows + block_rows - 1) / block_rows);
  set.geometry.grid_cols =
      static_cast<int>((cols + block_cols - 1) / block_cols);

  std::vector<std::vector<std::uint32_t>> channel;
  channel.reserve(set.geometry.block_count());
  for (int gi = 0; gi < set.geometry.grid_rows; ++gi) {
    for (int gj = 0; gj < set.geometry.grid_cols; ++gj) {
      const Eigen::Index r0 = static_cast<Eigen::Index>(gi) * block_rows;
      const Eigen::Index c0 = static_cast<Eigen::Index>(gj) * block_cols;
      const Eigen::Index r1 = std::min<Eigen::Index>(r0 + block_rows, rows);
      const Eigen::Index c1 = std::min<Eigen::Index>(c0 + block_cols, cols);
      std::vector<std::uint32_t> hist(set.bins, 0);
      for (Eigen::Index i = r0; i < r1; ++i)
        for (Eigen::Index j = c0; j < c1; ++j) ++hist[code.codes(i, j)];
      channel.push_back(std::move(hist));
    }
  }
  set.histograms.push_back(std::move(channel));
  return set;
}

BlockHistogramSet block_histograms(const std::vector<CodeImage>& codes,
                                   int block_rows, int block_cols) {
  if (codes.empty())
    throw std::invalid_argument("block_histograms: no code images");
  BlockHistogramSet set = block_histogram(codes[0], block_rows, block_cols);
  for (std::size_t d = 1; d < codes.size(); ++d) {
    if (codes[d].bits != codes[0].bits ||
        codes[d].codes.rows() != codes[0].codes.rows() ||
        codes[d].codes.cols() != codes[0].codes.cols())
      throw std::invalid_argument("block_histograms: channel mismatch");
    BlockHistogramSet one = block_histogram(codes[d], block_rows, block_cols);
    set.histograms.push_back(std::move(one.histograms[0]));
  }
  return set;
}

}  // namespace dctnet
