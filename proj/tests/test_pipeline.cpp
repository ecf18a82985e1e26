#include "dctnet/pipeline.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dctnet/bank_io.hpp"
#include "dctnet/image_io.hpp"
#include "synthetic.hpp"
#include "temp_dir.hpp"

namespace dctnet {
namespace {

using testutil::TempDir;

// Small, fast pipeline: 32x32 crops, one layer of four 3x3 cosine filters,
// 16x16 blocks -> 2x2 grid, 16 bins -> feature dim 64.
PipelineConfig small_config() {
  PipelineConfig config;
  config.crop_rows = 32;
  config.crop_cols = 32;
  config.k = 3;
  config.layers = 1;
  config.filters_per_layer = {4};
  config.block_rows = 16;
  config.block_cols = 16;
  return config;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

// Three subjects, one gallery and one identical probe image each; probes
// split across two groups.
std::string make_self_match_dataset(const TempDir& dir) {
  std::string manifest = "path,subject,role,group\n";
  for (int s = 0; s < 3; ++s) {
    const Image face = testutil::synthetic_face(1000 + s, 32, 32);
    const std::string gallery_name = "g" + std::to_string(s) + ".pgm";
    const std::string probe_name = "p" + std::to_string(s) + ".pgm";
    save_pgm(dir.file(gallery_name), face);
    save_pgm(dir.file(probe_name), face);
    manifest += gallery_name + "," + std::to_string(s) + ",gallery,fa\n";
    manifest += probe_name + "," + std::to_string(s) + ",probe," +
                (s < 2 ? "fb" : "dup") + "\n";
  }
  const std::string manifest_path = dir.file("data.csv");
  write_text(manifest_path, manifest);
  return manifest_path;
}

TEST(BuildBanks, AnalyticSourceFollowsConfig) {
  PipelineConfig config;  // defaults: k=5, layers=2, 8 filters each
  const std::vector<FilterBank> banks = build_banks(config, {});
  ASSERT_EQ(banks.size(), 2u);
  for (int l = 0; l < 2; ++l) {
    EXPECT_EQ(banks[l].k, 5);
    EXPECT_EQ(banks[l].policy, ScanPolicy::kZigzag);
    ASSERT_EQ(banks[l].filters.size(), 8u);
    for (const Filter& f : banks[l].filters) {
      EXPECT_EQ(f.layer, l);
      EXPECT_EQ(f.coefficients.rows(), 5);
    }
  }
}

TEST(BuildBanks, BankFileSourceLoadsFromDisk) {
  TempDir dir;
  PipelineConfig source = small_config();
  const std::vector<FilterBank> learned = build_banks(source, {});
  const std::string bank_path = dir.file("bank.dctb");
  save_bank_file(bank_path, learned);

  PipelineConfig config;  // defaults disagree with the file on purpose
  config.filter_source = FilterSource::kBankFile;
  config.bank_path = bank_path;
  const std::vector<FilterBank> loaded = build_banks(config, {});
  ASSERT_EQ(loaded.size(), 1u);
  EXPECT_EQ(loaded[0].k, 3);
  EXPECT_EQ(loaded[0].filters.size(), 4u);

  sync_config_with_banks(config, loaded);
  EXPECT_EQ(config.k, 3);
  EXPECT_EQ(config.layers, 1);
  EXPECT_EQ(config.filters_per_layer, (std::vector<int>{4}));
  EXPECT_EQ(config.scan_order, ScanPolicy::kZigzag);
}

TEST(BuildBanks, PatchLearningNeedsTrainingImages) {
  PipelineConfig config = small_config();
  config.filter_source = FilterSource::kPcaLearn;
  EXPECT_THROW(build_banks(config, {}), std::invalid_argument);

  std::vector<Image> images;
  for (int s = 0; s < 4; ++s) {
    images.push_back(testutil::synthetic_face(s, 32, 32));
  }
  const std::vector<FilterBank> banks = build_banks(config, images);
  ASSERT_EQ(banks.size(), 1u);
  EXPECT_EQ(banks[0].k, 3);
  EXPECT_EQ(banks[0].policy, ScanPolicy::kLearned);
  EXPECT_EQ(banks[0].filters.size(), 4u);

  // A learned bank has no scan order, so syncing keeps the configured one.
  PipelineConfig synced = config;
  synced.scan_order = ScanPolicy::kHorizontalMajor;
  sync_config_with_banks(synced, banks);
  EXPECT_EQ(synced.scan_order, ScanPolicy::kHorizontalMajor);
}

TEST(ExtractFeature, DimensionFollowsBlocksChannelsAndBins) {
  const Image face = testutil::synthetic_face(7, 64, 64);
  {
    PipelineConfig config;  // 64x64, two layers of 8, 16x16 blocks
    const std::vector<FilterBank> banks = build_banks(config, {});
    const FeatureVector f = extract_feature(face, banks, config);
    // 8 channels (one per first-layer map) x 16 blocks x 2^8 bins.
    EXPECT_EQ(f.values.size(), 8 * 16 * 256);
    EXPECT_EQ(f.stage, FeatureStage::kTrNormalized);
  }
  {
    PipelineConfig config = small_config();
    const std::vector<FilterBank> banks = build_banks(config, {});
    const Image small = testutil::synthetic_face(7, 32, 32);
    const FeatureVector f = extract_feature(small, banks, config);
    // 1 channel x 4 blocks x 2^4 bins.
    EXPECT_EQ(f.values.size(), 64);
  }
}

TEST(ExtractFeature, RawHistogramMassEqualsPixelsPerChannel) {
  PipelineConfig config;
  config.tr_norm = false;
  const std::vector<FilterBank> banks = build_banks(config, {});
  const Image face = testutil::synthetic_face(8, 64, 64);
  const FeatureVector f = extract_feature(face, banks, config);
  EXPECT_EQ(f.stage, FeatureStage::kRawHist);
  ASSERT_EQ(f.values.size(), 8 * 16 * 256);
  const Eigen::Index per_channel = 16 * 256;
  for (int channel = 0; channel < 8; ++channel) {
    EXPECT_DOUBLE_EQ(f.values.segment(channel * per_channel, per_channel).sum(),
                     64.0 * 64.0)
        << "channel " << channel;
  }
}

TEST(ExtractFeature, EdgeBlocksKeepEveryPixelCounted) {
  PipelineConfig config = small_config();
  config.crop_rows = 20;
  config.crop_cols = 20;
  config.tr_norm = false;
  const std::vector<FilterBank> banks = build_banks(config, {});
  const Image face = testutil::synthetic_face(9, 20, 20);
  const FeatureVector f = extract_feature(face, banks, config);
  // ceil(20/16) = 2 per axis -> 2x2 grid with 16 bins each.
  EXPECT_EQ(f.values.size(), 4 * 16);
  EXPECT_DOUBLE_EQ(f.values.sum(), 400.0);
}

TEST(ExtractFeature, DeterministicForIdenticalInput) {
  PipelineConfig config = small_config();
  const std::vector<FilterBank> banks = build_banks(config, {});
  const Image face = testutil::synthetic_face(10, 32, 32);
  const FeatureVector a = extract_feature(face, banks, config);
  const FeatureVector b = extract_feature(face, banks, config);
  EXPECT_EQ(a.values, b.values);
}

TEST(ExtractManifest, RecordsFollowManifestRowOrder) {
  TempDir dir;
  const std::string manifest_path = make_self_match_dataset(dir);
  const Manifest manifest = load_manifest(manifest_path);
  PipelineConfig config = small_config();

  const FeatureStore store = extract_manifest(manifest, config);
  EXPECT_EQ(store.stage, FeatureStage::kTrNormalized);
  EXPECT_EQ(store.dim, 64u);
  ASSERT_EQ(store.records.size(), manifest.rows.size());
  ASSERT_EQ(store.group_labels,
            (std::vector<std::string>{"fa", "fb", "dup"}));
  for (size_t r = 0; r < manifest.rows.size(); ++r) {
    EXPECT_EQ(store.records[r].subject, manifest.rows[r].subject);
    EXPECT_EQ(store.group_labels[store.records[r].group],
              manifest.rows[r].group);
    EXPECT_EQ(store.records[r].values.size(), 64u);
  }

  // Gallery/probe pairs are identical images, so their features match too.
  EXPECT_EQ(store.records[0].values, store.records[1].values);

  const FeatureStore again = extract_manifest(manifest, config);
  for (size_t r = 0; r < store.records.size(); ++r) {
    EXPECT_EQ(again.records[r].values, store.records[r].values);
  }
}

TEST(ExtractManifest, LearnsFiltersFromGalleryWhenAsked) {
  TempDir dir;
  const std::string manifest_path = make_self_match_dataset(dir);
  const Manifest manifest = load_manifest(manifest_path);
  PipelineConfig config = small_config();
  config.filter_source = FilterSource::kPcaLearn;
  config.filters_per_layer = {2};

  const FeatureStore store = extract_manifest(manifest, config);
  EXPECT_EQ(store.dim, 4u * 4u);  // 2 bits -> 4 bins, 2x2 blocks
  ASSERT_EQ(store.records.size(), 6u);
  EXPECT_EQ(store.records[0].values, store.records[1].values);
}

TEST(ExtractManifest, WhitenedProjectionCoversAllRows) {
  TempDir dir;
  std::string manifest = "path,subject,role,group\n";
  for (int s = 0; s < 4; ++s) {
    const Image face = testutil::synthetic_face(2000 + s, 32, 32);
    const std::string gallery_name = "g" + std::to_string(s) + ".pgm";
    save_pgm(dir.file(gallery_name), face);
    manifest += gallery_name + "," + std::to_string(s) + ",gallery,fa\n";
  }
  const Image probe = testutil::add_gaussian_noise(
      testutil::synthetic_face(2000, 32, 32), 4.0, 99);
  save_pgm(dir.file("probe.pgm"), probe);
  manifest += "probe.pgm,0,probe,fb\n";
  write_text(dir.file("data.csv"), manifest);

  PipelineConfig config = small_config();
  config.wpca_dim = 2;
  const FeatureStore store =
      extract_manifest(load_manifest(dir.file("data.csv")), config);
  EXPECT_EQ(store.stage, FeatureStage::kWpca);
  EXPECT_EQ(store.dim, 2u);
  for (const FeatureRecord& rec : store.records) {
    EXPECT_EQ(rec.values.size(), 2u);
  }
}

TEST(ExtractManifest, OversizedProjectionIsRejected) {
  TempDir dir;
  const std::string manifest_path = make_self_match_dataset(dir);
  PipelineConfig config = small_config();
  config.wpca_dim = 10;  // only 3 gallery features exist
  EXPECT_THROW(extract_manifest(load_manifest(manifest_path), config),
               std::invalid_argument);
}

TEST(ExtractManifest, MissingProbeFileAbortsWithItsPath) {
  TempDir dir;
  const std::string manifest_path = make_self_match_dataset(dir);
  std::string text;
  {
    std::ifstream in(manifest_path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    text = buffer.str();
  }
  text += "ghost.pgm,0,probe,fb\n";
  write_text(manifest_path, text);

  try {
    extract_manifest(load_manifest(manifest_path), small_config());
    FAIL() << "missing probe file must abort the extraction";
  } catch (const std::exception& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("probe extraction failed"), std::string::npos);
    EXPECT_NE(what.find("ghost.pgm"), std::string::npos);
  }
}

TEST(Evaluate, SelfMatchScoresHundredPercent) {
  TempDir dir;
  const std::string manifest_path = make_self_match_dataset(dir);
  const PipelineConfig config = small_config();
  const EvaluationOutcome outcome =
      evaluate(load_manifest(manifest_path), config);

  EXPECT_TRUE(outcome.probe_errors.empty());
  ASSERT_EQ(outcome.report.groups.size(), 2u);
  EXPECT_EQ(outcome.report.groups[0].label, "fb");
  EXPECT_EQ(outcome.report.groups[0].total, 2);
  EXPECT_DOUBLE_EQ(outcome.report.groups[0].rate_percent, 100.0);
  EXPECT_EQ(outcome.report.groups[1].label, "dup");
  EXPECT_DOUBLE_EQ(outcome.report.average_percent, 100.0);
  // The echoed config is the effective one.
  EXPECT_NE(outcome.report.config_echo.find("k = 3"), std::string::npos);
}

TEST(Evaluate, EchoesTheStructureABankFileImposed) {
  TempDir dir;
  const std::string manifest_path = make_self_match_dataset(dir);
  PipelineConfig source = small_config();
  source.scan_order = ScanPolicy::kHorizontalMajor;
  save_bank_file(dir.file("bank.dctb"), build_banks(source, {}));

  PipelineConfig config;  // defaults say k=5, two layers
  config.crop_rows = 32;
  config.crop_cols = 32;
  config.filter_source = FilterSource::kBankFile;
  config.bank_path = dir.file("bank.dctb");
  const EvaluationOutcome outcome =
      evaluate(load_manifest(manifest_path), config);
  EXPECT_NE(outcome.report.config_echo.find("k = 3"), std::string::npos);
  EXPECT_NE(outcome.report.config_echo.find("layers = 1"), std::string::npos);
  EXPECT_NE(outcome.report.config_echo.find("filters_per_layer = [4]"),
            std::string::npos);
  EXPECT_NE(outcome.report.config_echo.find("horizontal-major"),
            std::string::npos);
  EXPECT_DOUBLE_EQ(outcome.report.average_percent, 100.0);
}

TEST(Evaluate, MissingProbeIsReportedAndExcluded) {
  TempDir dir;
  const std::string manifest_path = make_self_match_dataset(dir);
  std::string text;
  {
    std::ifstream in(manifest_path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    text = buffer.str();
  }
  text += "ghost.pgm,0,probe,fb\n";
  write_text(manifest_path, text);

  const EvaluationOutcome outcome =
      evaluate(load_manifest(manifest_path), small_config());
  ASSERT_EQ(outcome.probe_errors.size(), 1u);
  EXPECT_NE(outcome.probe_errors[0].find("ghost.pgm"), std::string::npos);
  // The failed probe is excluded: group fb still counts its 2 good probes.
  ASSERT_EQ(outcome.report.groups.size(), 2u);
  EXPECT_EQ(outcome.report.groups[0].total, 2);
  EXPECT_DOUBLE_EQ(outcome.report.average_percent, 100.0);
}

TEST(Evaluate, MissingGalleryFileAborts) {
  TempDir dir;
  const std::string manifest_path = make_self_match_dataset(dir);
  std::string text;
  {
    std::ifstream in(manifest_path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    text = buffer.str();
  }
  text += "ghost.pgm,0,gallery,fa\n";
  write_text(manifest_path, text);

  try {
    evaluate(load_manifest(manifest_path), small_config());
    FAIL() << "missing gallery file must abort the run";
  } catch (const std::exception& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("gallery extraction failed"), std::string::npos);
    EXPECT_NE(what.find("ghost.pgm"), std::string::npos);
  }
}

TEST(Evaluate, NoisyAndShiftedProbesStillMatchAtSmallScale) {
  // Not the headline accuracy claim (the acceptance program covers that at
  // full pipeline scale) - just a sanity check that mild corruption does not
  // break matching on an easy synthetic set.
  TempDir dir;
  std::string manifest = "path,subject,role,group\n";
  for (int s = 0; s < 5; ++s) {
    const Image face = testutil::synthetic_face(3000 + s, 32, 32);
    const std::string gallery_name = "g" + std::to_string(s) + ".pgm";
    const std::string probe_name = "p" + std::to_string(s) + ".pgm";
    save_pgm(dir.file(gallery_name), face);
    const Image corrupted = testutil::shift_image(
        testutil::add_gaussian_noise(face, 3.0, 77 + s), 1, -1);
    save_pgm(dir.file(probe_name), corrupted);
    manifest += gallery_name + "," + std::to_string(s) + ",gallery,fa\n";
    manifest += probe_name + "," + std::to_string(s) + ",probe,fb\n";
  }
  write_text(dir.file("data.csv"), manifest);

  PipelineConfig config = small_config();
  config.filters_per_layer = {6};
  const EvaluationOutcome outcome =
      evaluate(load_manifest(dir.file("data.csv")), config);
  EXPECT_TRUE(outcome.probe_errors.empty());
  EXPECT_GE(outcome.report.average_percent, 80.0);
}

}  // namespace
}  // namespace dctnet
