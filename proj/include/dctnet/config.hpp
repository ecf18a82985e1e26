#pragma once

#include "dctnet/types.hpp"

#include <string>
#include <vector>

namespace dctnet {

enum class FilterSource : uint8_t {
  kDct = 0,       // analytic cosine-basis filters
  kPcaLearn = 1,  // filters learned from gallery image patches
  kBankFile = 2,  // pre-built bank loaded from a .dctb file
};

// Full description of one extraction pipeline. Defaults reproduce the
// standard small-image setup: 64x64 crops, two layers of eight 5x5 cosine
// filters, 16x16 histogram blocks, rank normalization on, no projection.
struct PipelineConfig {
  int crop_rows = 64;
  int crop_cols = 64;

  FilterSource filter_source = FilterSource::kDct;
  std::string bank_path;  // used when filter_source == kBankFile

  int k = 5;
  int layers = 2;
  std::vector<int> filters_per_layer = {8, 8};
  ScanPolicy scan_order = ScanPolicy::kZigzag;
  bool flip_axis = false;

  int block_rows = 16;
  int block_cols = 16;

  bool tr_norm = true;
  int wpca_dim = 0;  // 0 disables the whitened projection stage

  // Directory the config file was loaded from; a relative bank_path resolves
  // against it. Not part of the serialized form.
  std::string base_dir;

  std::string resolved_bank_path() const;

  bool operator==(const PipelineConfig& other) const;
};

// Parses a flat TOML-style config: `key = value` lines with '#' comments.
// Values are integers, booleans, double-quoted strings, or integer arrays
// like [8, 8]. Unknown and duplicate keys are errors. Missing keys keep
// their defaults.
PipelineConfig parse_config(const std::string& text,
                            const std::string& source_name);
PipelineConfig load_config(const std::string& path);

// Canonical form: every key emitted once, fixed order, normalized spacing.
// parse(serialize(c)) == c for any valid config.
std::string serialize_config(const PipelineConfig& config);

}  // namespace dctnet
