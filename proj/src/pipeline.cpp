#include "dctnet/pipeline.hpp"

#include "dctnet/bank_io.hpp"
#include "dctnet/dct_filters.hpp"
#include "dctnet/image_io.hpp"
#include "dctnet/network.hpp"
#include "dctnet/parallel.hpp"
#include "dctnet/pca_filters.hpp"
#include "dctnet/tr_norm.hpp"

#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace dctnet {
namespace {

// Joins row-aligned error messages into one abort message, capped so a
// whole failed dataset does not flood the terminal.
[[noreturn]] void abort_with_errors(const std::string& what,
                                    const std::vector<std::string>& errors) {
  constexpr size_t kMaxListed = 10;
  std::ostringstream out;
  out << what << ":";
  size_t listed = 0;
  size_t total = 0;
  for (const std::string& e : errors) {
    if (e.empty()) continue;
    ++total;
    if (listed < kMaxListed) {
      out << "\n  " << e;
      ++listed;
    }
  }
  if (total > listed) {
    out << "\n  ... and " << (total - listed) << " more";
  }
  throw std::runtime_error(out.str());
}

struct PreparedGallery {
  std::vector<size_t> rows;              // manifest indices
  std::vector<FeatureVector> features;   // aligned with rows
  std::vector<FilterBank> banks;
};

// Loads the gallery, builds the banks (learning from gallery patches when
// asked), and extracts gallery features. Any gallery failure aborts: the
// banks and the optional projection both depend on a complete gallery.
PreparedGallery prepare_gallery(const Manifest& manifest,
                                PipelineConfig& config) {
  PreparedGallery out;
  out.rows = manifest.gallery_indices();
  const size_t n = out.rows.size();
  std::vector<std::string> errors(n);

  if (config.filter_source == FilterSource::kPcaLearn) {
    // Patch learning needs the pixel data, so keep the images around for the
    // extraction pass instead of loading them twice.
    std::vector<Image> images(n);
    parallel_for(n, [&](size_t i) {
      const ManifestRow& row = manifest.rows[out.rows[i]];
      try {
        images[i] = load_image_grayscale(manifest.resolve_path(row),
                                         config.crop_rows, config.crop_cols);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    });
    for (const std::string& e : errors) {
      if (!e.empty()) abort_with_errors("gallery image loading failed", errors);
    }
    out.banks = build_banks(config, images);
    out.features.resize(n);
    parallel_for(n, [&](size_t i) {
      try {
        out.features[i] = extract_feature(images[i], out.banks, config);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    });
  } else {
    out.banks = build_banks(config, {});
    out.features.resize(n);
    parallel_for(n, [&](size_t i) {
      const ManifestRow& row = manifest.rows[out.rows[i]];
      try {
        const Image image = load_image_grayscale(
            manifest.resolve_path(row), config.crop_rows, config.crop_cols);
        out.features[i] = extract_feature(image, out.banks, config);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    });
  }

  for (const std::string& e : errors) {
    if (!e.empty()) abort_with_errors("gallery extraction failed", errors);
  }
  sync_config_with_banks(config, out.banks);
  return out;
}

}  // namespace

std::vector<FilterBank> build_banks(const PipelineConfig& config,
                                    const std::vector<Image>& training_images) {
  switch (config.filter_source) {
    case FilterSource::kDct: {
      std::vector<FilterBank> banks;
      banks.reserve(config.layers);
      for (int l = 0; l < config.layers; ++l) {
        FilterBank bank = select_dctnet_filters(
            config.k, config.filters_per_layer[l], config.scan_order,
            config.flip_axis);
        for (Filter& f : bank.filters) f.layer = l;
        banks.push_back(std::move(bank));
      }
      return banks;
    }
    case FilterSource::kPcaLearn: {
      if (training_images.empty()) {
        throw std::invalid_argument(
            "build_banks: filter learning needs training images (none given)");
      }
      return learn_layered_pca(training_images, config.layers,
                               std::vector<int>(config.layers, config.k),
                               config.filters_per_layer);
    }
    case FilterSource::kBankFile:
      return load_bank_file(config.resolved_bank_path());
  }
  throw std::logic_error("build_banks: unhandled filter source");
}

void sync_config_with_banks(PipelineConfig& config,
                            const std::vector<FilterBank>& banks) {
  if (banks.empty()) return;
  config.k = banks[0].k;
  config.layers = static_cast<int>(banks.size());
  config.filters_per_layer.clear();
  for (const FilterBank& bank : banks) {
    config.filters_per_layer.push_back(static_cast<int>(bank.filters.size()));
  }
  if (banks[0].policy != ScanPolicy::kLearned) {
    config.scan_order = banks[0].policy;
  }
}

FeatureVector extract_feature(const Image& image,
                              const std::vector<FilterBank>& banks,
                              const PipelineConfig& config) {
  const std::vector<ResponseStack> stacks = forward_cascade(image, banks);
  std::vector<CodeImage> codes;
  codes.reserve(stacks.size());
  for (const ResponseStack& stack : stacks) {
    codes.push_back(binarize_encode(stack));
  }
  const BlockHistogramSet hists =
      block_histograms(codes, config.block_rows, config.block_cols);
  return config.tr_norm ? tr_normalize(hists) : flatten_histograms(hists);
}

FeatureStore extract_manifest(const Manifest& manifest,
                              const PipelineConfig& config) {
  PipelineConfig effective = config;
  PreparedGallery gallery = prepare_gallery(manifest, effective);

  // Remaining (probe) rows; a store is all-or-nothing, so failures abort
  // here too.
  const std::vector<size_t> probe_rows = manifest.probe_indices();
  std::vector<FeatureVector> probe_features(probe_rows.size());
  std::vector<std::string> errors(probe_rows.size());
  parallel_for(probe_rows.size(), [&](size_t i) {
    const ManifestRow& row = manifest.rows[probe_rows[i]];
    try {
      const Image image = load_image_grayscale(
          manifest.resolve_path(row), effective.crop_rows,
          effective.crop_cols);
      probe_features[i] = extract_feature(image, gallery.banks, effective);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (const std::string& e : errors) {
    if (!e.empty()) abort_with_errors("probe extraction failed", errors);
  }

  if (effective.wpca_dim > 0) {
    const WpcaModel model = fit_wpca(gallery.features, effective.wpca_dim);
    parallel_for(gallery.features.size(), [&](size_t i) {
      gallery.features[i] = project_wpca(model, gallery.features[i]);
    });
    parallel_for(probe_features.size(), [&](size_t i) {
      probe_features[i] = project_wpca(model, probe_features[i]);
    });
  }

  // Reassemble in manifest row order.
  std::vector<const FeatureVector*> by_row(manifest.rows.size(), nullptr);
  for (size_t i = 0; i < gallery.rows.size(); ++i) {
    by_row[gallery.rows[i]] = &gallery.features[i];
  }
  for (size_t i = 0; i < probe_rows.size(); ++i) {
    by_row[probe_rows[i]] = &probe_features[i];
  }

  const std::vector<std::string> labels = manifest.group_labels();
  std::unordered_map<std::string, uint16_t> group_ids;
  for (size_t i = 0; i < labels.size(); ++i) {
    group_ids.emplace(labels[i], static_cast<uint16_t>(i));
  }

  FeatureStore store;
  store.group_labels = labels;
  store.stage = by_row.empty() ? FeatureStage::kRawHist : by_row[0]->stage;
  store.dim = static_cast<uint32_t>(by_row[0]->values.size());
  store.records.reserve(manifest.rows.size());
  for (size_t r = 0; r < manifest.rows.size(); ++r) {
    FeatureRecord rec;
    rec.subject = manifest.rows[r].subject;
    rec.group = group_ids.at(manifest.rows[r].group);
    const Eigen::VectorXd& v = by_row[r]->values;
    rec.values.resize(v.size());
    for (Eigen::Index d = 0; d < v.size(); ++d) {
      rec.values[d] = static_cast<float>(v[d]);
    }
    store.records.push_back(std::move(rec));
  }
  return store;
}

EvaluationOutcome evaluate(const Manifest& manifest,
                           const PipelineConfig& config) {
  PipelineConfig effective = config;
  PreparedGallery gallery = prepare_gallery(manifest, effective);

  WpcaModel model;
  const bool use_wpca = effective.wpca_dim > 0;
  if (use_wpca) {
    model = fit_wpca(gallery.features, effective.wpca_dim);
    parallel_for(gallery.features.size(), [&](size_t i) {
      gallery.features[i] = project_wpca(model, gallery.features[i]);
    });
  }

  GallerySet gallery_set;
  gallery_set.entries.reserve(gallery.rows.size());
  for (size_t i = 0; i < gallery.rows.size(); ++i) {
    gallery_set.entries.push_back(
        {manifest.rows[gallery.rows[i]].subject,
         std::move(gallery.features[i])});
  }

  const std::vector<size_t> probe_rows = manifest.probe_indices();
  std::vector<FeatureVector> probe_features(probe_rows.size());
  std::vector<std::string> errors(probe_rows.size());
  parallel_for(probe_rows.size(), [&](size_t i) {
    const ManifestRow& row = manifest.rows[probe_rows[i]];
    try {
      const Image image = load_image_grayscale(
          manifest.resolve_path(row), effective.crop_rows,
          effective.crop_cols);
      FeatureVector f = extract_feature(image, gallery.banks, effective);
      probe_features[i] = use_wpca ? project_wpca(model, f) : std::move(f);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  EvaluationOutcome outcome;
  std::vector<ProbeRecord> probes;
  probes.reserve(probe_rows.size());
  for (size_t i = 0; i < probe_rows.size(); ++i) {
    const ManifestRow& row = manifest.rows[probe_rows[i]];
    if (!errors[i].empty()) {
      outcome.probe_errors.push_back(row.path + ": " + errors[i]);
      continue;
    }
    probes.push_back(
        {row.subject, row.group, std::move(probe_features[i])});
  }

  outcome.report =
      score_probes(gallery_set, probes, serialize_config(effective));
  return outcome;
}

}  // namespace dctnet
