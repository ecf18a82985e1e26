#include "dctnet/feature_io.hpp"

#include "binary_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dctnet {
namespace {

constexpr uint16_t kFeatureVersion = 1;

FeatureStage stage_from_byte(uint8_t byte, const std::string& source) {
  switch (byte) {
    case 0:
      return FeatureStage::kRawHist;
    case 1:
      return FeatureStage::kTrNormalized;
    case 2:
      return FeatureStage::kWpca;
    default:
      throw std::runtime_error(source + ": unknown feature stage byte " +
                               std::to_string(byte));
  }
}

}  // namespace

std::string FeatureStore::group_label(uint16_t id) const {
  if (id < group_labels.size()) return group_labels[id];
  return "group-" + std::to_string(id);
}

void save_feature_store(const std::string& path, const FeatureStore& store) {
  if (store.dim == 0) {
    throw std::invalid_argument(path + ": feature dim must be >= 1");
  }
  for (const FeatureRecord& rec : store.records) {
    if (rec.values.size() != store.dim) {
      throw std::invalid_argument(
          path + ": record dim " + std::to_string(rec.values.size()) +
          " does not match store dim " + std::to_string(store.dim));
    }
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");

  out.write("DCTF", 4);
  io::write_le<uint16_t>(out, kFeatureVersion);
  io::write_le<uint8_t>(out, static_cast<uint8_t>(store.stage));
  io::write_le<uint32_t>(out, store.dim);
  io::write_le<uint32_t>(out, static_cast<uint32_t>(store.records.size()));
  for (const FeatureRecord& rec : store.records) {
    io::write_le<uint32_t>(out, rec.subject);
    io::write_le<uint16_t>(out, rec.group);
    for (float v : rec.values) io::write_le<float>(out, v);
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

FeatureStore load_feature_store(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open file");

  io::expect_magic(in, "DCTF", path);
  const uint16_t version = io::read_le<uint16_t>(in, path, "version");
  if (version != kFeatureVersion) {
    throw std::runtime_error(path + ": unsupported version " +
                             std::to_string(version));
  }

  FeatureStore store;
  store.stage = stage_from_byte(io::read_le<uint8_t>(in, path, "stage"), path);
  store.dim = io::read_le<uint32_t>(in, path, "dim");
  if (store.dim == 0) {
    throw std::runtime_error(path + ": feature dim must be >= 1");
  }
  const uint32_t count = io::read_le<uint32_t>(in, path, "record count");
  store.records.resize(count);
  for (uint32_t i = 0; i < count; ++i) {
    FeatureRecord& rec = store.records[i];
    rec.subject = io::read_le<uint32_t>(in, path, "subject id");
    rec.group = io::read_le<uint16_t>(in, path, "group id");
    rec.values.resize(store.dim);
    for (uint32_t d = 0; d < store.dim; ++d) {
      rec.values[d] = io::read_le<float>(in, path, "feature values");
    }
  }
  char extra;
  if (in.read(&extra, 1); in.gcount() != 0) {
    throw std::runtime_error(path + ": trailing bytes after records");
  }
  return store;
}

std::string describe_feature_store(const std::string& path) {
  const FeatureStore store = load_feature_store(path);
  std::ostringstream out;
  out << "feature store: " << path << "\n";
  out << "stage: " << to_string(store.stage) << "\n";
  out << "dim: " << store.dim << "\n";
  out << "records: " << store.records.size() << "\n";
  return out.str();
}

}  // namespace dctnet
