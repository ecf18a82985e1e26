#pragma once

#include "dctnet/config.hpp"
#include "dctnet/feature_io.hpp"
#include "dctnet/manifest.hpp"
#include "dctnet/matcher.hpp"
#include "dctnet/types.hpp"

#include <string>
#include <vector>

namespace dctnet {

// Builds the per-layer filter banks a config calls for: analytic cosine
// banks, banks learned from the training images' patches, or a bank file
// loaded from disk. training_images may be empty except for pca-learn.
std::vector<FilterBank> build_banks(const PipelineConfig& config,
                                    const std::vector<Image>& training_images);

// Overwrites k / layers / filters_per_layer / scan_order with what the banks
// actually contain, so reports echo the effective structure when a bank file
// supplied it.
void sync_config_with_banks(PipelineConfig& config,
                            const std::vector<FilterBank>& banks);

// One image through the cascade: convolve, binarize, block histograms, then
// rank normalization or plain flattening per config. The optional whitened
// projection is a separate step (project_wpca) because its model is fitted
// on gallery features.
FeatureVector extract_feature(const Image& image,
                              const std::vector<FilterBank>& banks,
                              const PipelineConfig& config);

// Extracts every manifest row into a feature store (records in manifest row
// order, group ids indexing manifest.group_labels()). When config.wpca_dim
// > 0 the projection is fitted on the gallery rows and applied to all rows.
// Any failing row aborts with an error naming it: a feature store is only
// written complete.
FeatureStore extract_manifest(const Manifest& manifest,
                              const PipelineConfig& config);

struct EvaluationOutcome {
  EvalReport report;
  // One "path: message" entry per probe that could not be processed; such
  // probes are excluded from the rates. Gallery failures abort instead.
  std::vector<std::string> probe_errors;
};

// Full protocol run: extract gallery, fit optional projection, extract and
// match probes, aggregate per-group rank-1 rates.
EvaluationOutcome evaluate(const Manifest& manifest,
                           const PipelineConfig& config);

}  // namespace dctnet
