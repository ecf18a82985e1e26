#pragma once

#include "dctnet/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dctnet {

struct GalleryEntry {
  uint32_t subject = 0;
  FeatureVector feature;
};

// Enrolled reference features. Multiple entries per subject are allowed; the
// nearest single entry decides the identification.
struct GallerySet {
  std::vector<GalleryEntry> entries;
};

// 1 - (a.b)/(|a||b|), in [0, 2]. Positive rescaling of either argument
// leaves the value unchanged. Two zero vectors are an error; against exactly
// one zero vector the distance is defined as 1 (treated as orthogonal).
double cosine_distance(const FeatureVector& a, const FeatureVector& b);

struct MatchResult {
  uint32_t subject = 0;
  double distance = 0.0;
  size_t entry_index = 0;
};

// Nearest-neighbor identification under cosine distance. Ties are broken by
// the lowest gallery entry index so results are deterministic.
MatchResult identify(const FeatureVector& probe, const GallerySet& gallery);

struct ProbeRecord {
  uint32_t subject = 0;
  std::string group;
  FeatureVector feature;
};

struct GroupResult {
  std::string label;
  int correct = 0;
  int total = 0;
  double rate_percent = 0.0;
};

// Rank-1 identification rates per probe group plus their arithmetic mean
// (the headline "average" is a mean over groups, not over probe images).
struct EvalReport {
  std::vector<GroupResult> groups;
  double average_percent = 0.0;
  std::string config_echo;  // canonical config text the run used

  std::string to_text() const;
  // CSV with header group,rate_percent,n_probes and a final avg row.
  std::string to_csv() const;
};

// Matches every probe against the gallery (parallel per probe) and
// aggregates rank-1 rates by group, groups ordered by first appearance.
EvalReport score_probes(const GallerySet& gallery,
                        const std::vector<ProbeRecord>& probes,
                        const std::string& config_echo);

}  // namespace dctnet
