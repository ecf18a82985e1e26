#include "dctnet/bank_io.hpp"

#include "dctnet/dct_filters.hpp"

#include "binary_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dctnet {
namespace {

constexpr uint16_t kBankVersion = 1;

ScanPolicy policy_from_byte(uint8_t byte, const std::string& source) {
  switch (byte) {
    case 0:
      return ScanPolicy::kZigzag;
    case 1:
      return ScanPolicy::kHorizontalMajor;
    case 2:
      return ScanPolicy::kLearned;
    default:
      throw std::runtime_error(source + ": unknown scan policy byte " +
                               std::to_string(byte));
  }
}

}  // namespace

void save_bank_file(const std::string& path,
                    const std::vector<FilterBank>& layers) {
  if (layers.empty()) {
    throw std::invalid_argument(path + ": refusing to write empty bank file");
  }
  for (const FilterBank& bank : layers) {
    if (bank.filters.empty()) {
      throw std::invalid_argument(path + ": a layer has no filters");
    }
    for (const Filter& f : bank.filters) {
      if (f.coefficients.rows() != bank.k || f.coefficients.cols() != bank.k) {
        throw std::invalid_argument(
            path + ": filter dims do not match the layer's kernel size");
      }
    }
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");

  out.write("DCTB", 4);
  io::write_le<uint16_t>(out, kBankVersion);
  io::write_le<uint16_t>(out, static_cast<uint16_t>(layers.size()));
  for (const FilterBank& bank : layers) {
    io::write_le<uint16_t>(out, static_cast<uint16_t>(bank.k));
    io::write_le<uint16_t>(out, static_cast<uint16_t>(bank.filters.size()));
    io::write_le<uint8_t>(out, static_cast<uint8_t>(bank.policy));
  }
  for (const FilterBank& bank : layers) {
    for (const Filter& f : bank.filters) {
      for (int i = 0; i < bank.k; ++i) {
        for (int j = 0; j < bank.k; ++j) {
          io::write_le<double>(out, f.coefficients(i, j));
        }
      }
    }
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

std::vector<FilterBank> load_bank_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open file");

  io::expect_magic(in, "DCTB", path);
  const uint16_t version = io::read_le<uint16_t>(in, path, "version");
  if (version != kBankVersion) {
    throw std::runtime_error(path + ": unsupported version " +
                             std::to_string(version));
  }
  const uint16_t layer_count = io::read_le<uint16_t>(in, path, "layer count");
  if (layer_count == 0) {
    throw std::runtime_error(path + ": bank file has no layers");
  }

  std::vector<FilterBank> layers(layer_count);
  for (uint16_t l = 0; l < layer_count; ++l) {
    layers[l].k = io::read_le<uint16_t>(in, path, "kernel size");
    if (layers[l].k < 1) {
      throw std::runtime_error(path + ": kernel size must be >= 1");
    }
    const uint16_t count = io::read_le<uint16_t>(in, path, "filter count");
    if (count == 0) {
      throw std::runtime_error(path + ": a layer has no filters");
    }
    layers[l].policy =
        policy_from_byte(io::read_le<uint8_t>(in, path, "scan policy"), path);
    layers[l].filters.resize(count);
  }
  for (uint16_t l = 0; l < layer_count; ++l) {
    const int k = layers[l].k;
    for (size_t fidx = 0; fidx < layers[l].filters.size(); ++fidx) {
      Filter& f = layers[l].filters[fidx];
      f.layer = l;
      f.coefficients.resize(k, k);
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
          f.coefficients(i, j) =
              io::read_le<double>(in, path, "filter coefficients");
        }
      }
    }
  }
  // A well-formed file ends exactly after the last coefficient.
  char extra;
  if (in.read(&extra, 1); in.gcount() != 0) {
    throw std::runtime_error(path + ": trailing bytes after coefficients");
  }
  return layers;
}

std::string describe_bank_file(const std::string& path) {
  const std::vector<FilterBank> layers = load_bank_file(path);
  std::ostringstream out;
  out << "filter bank: " << path << "\n";
  out << "layers: " << layers.size() << "\n";
  for (size_t l = 0; l < layers.size(); ++l) {
    out << "  layer " << (l + 1) << ": " << layers[l].filters.size()
        << " filters, " << layers[l].k << "x" << layers[l].k << ", order "
        << to_string(layers[l].policy) << "\n";
  }
  return out.str();
}

}  // namespace dctnet
