#pragma once

#include "dctnet/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dctnet {

struct FeatureRecord {
  uint32_t subject = 0;
  uint16_t group = 0;  // index into FeatureStore::group_labels
  std::vector<float> values;
};

// Feature-store container (.dctf). Layout:
//   magic "DCTF" | version u16 | stage u8 | dim u32 | count u32
//   per record: subject u32 | group u16 | dim little-endian 32-bit floats.
// Group ids are indices into the label list carried alongside (labels are
// manifest-order strings; the binary file stores only the ids).
struct FeatureStore {
  FeatureStage stage = FeatureStage::kRawHist;
  uint32_t dim = 0;
  std::vector<FeatureRecord> records;
  std::vector<std::string> group_labels;  // not serialized; id -> label

  std::string group_label(uint16_t id) const;
};

void save_feature_store(const std::string& path, const FeatureStore& store);
FeatureStore load_feature_store(const std::string& path);

// Human-readable header summary (stage, dim, record count) for inspection.
std::string describe_feature_store(const std::string& path);

}  // namespace dctnet
