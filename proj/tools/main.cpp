// Command-line front end: filter-bank construction and visualization,
// filter learning, feature extraction, identification protocol runs, the
// Markov/cosine-basis convergence check, and file inspection.

#include "dctnet/bank_io.hpp"
#include "dctnet/config.hpp"
#include "dctnet/dct_filters.hpp"
#include "dctnet/feature_io.hpp"
#include "dctnet/image_io.hpp"
#include "dctnet/manifest.hpp"
#include "dctnet/markov_klt.hpp"
#include "dctnet/parallel.hpp"
#include "dctnet/pca_filters.hpp"
#include "dctnet/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace dctnet;

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  out << text;
  if (!out) throw std::runtime_error(path + ": write failed");
}

// Renders each filter as an 8-bit PGM, min-max scaled to [0, 255], named
// layer<L>_filter<i>.pgm under dir.
void emit_filter_images(const std::vector<FilterBank>& banks,
                        const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (size_t l = 0; l < banks.size(); ++l) {
    for (size_t i = 0; i < banks[l].filters.size(); ++i) {
      const Eigen::MatrixXd& coeff = banks[l].filters[i].coefficients;
      const double lo = coeff.minCoeff();
      const double hi = coeff.maxCoeff();
      Image scaled;
      if (hi > lo) {
        scaled = (coeff.array() - lo) / (hi - lo) * 255.0;
      } else {
        scaled = Image::Zero(coeff.rows(), coeff.cols());
      }
      char name[64];
      std::snprintf(name, sizeof(name), "layer%zu_filter%02zu.pgm", l + 1,
                    i + 1);
      save_pgm((std::filesystem::path(dir) / name).string(), scaled);
    }
  }
}

int run_filters(int k, int p, const std::string& order, bool flip_axis,
                int layers, const std::string& out_path,
                const std::string& emit_dir) {
  const ScanPolicy policy = scan_policy_from_string(order);
  if (policy == ScanPolicy::kLearned) {
    throw std::runtime_error(
        "filters: 'learned' banks come from the learn-pca command");
  }
  std::vector<FilterBank> banks;
  for (int l = 0; l < layers; ++l) {
    FilterBank bank = select_dctnet_filters(k, p, policy, flip_axis);
    for (Filter& f : bank.filters) f.layer = l;
    banks.push_back(std::move(bank));
  }
  save_bank_file(out_path, banks);
  std::cout << "wrote " << out_path << " (" << layers << " layer(s) of " << p
            << " " << k << "x" << k << " filters, order " << order << ")\n";
  if (!emit_dir.empty()) {
    emit_filter_images(banks, emit_dir);
    std::cout << "wrote filter images to " << emit_dir << "\n";
  }
  return 0;
}

int run_learn_pca(const std::string& manifest_path,
                  const std::string& config_path, const std::string& out_path,
                  const std::string& emit_dir) {
  const Manifest manifest = load_manifest(manifest_path);
  const PipelineConfig config = load_config(config_path);

  const std::vector<size_t> rows = manifest.gallery_indices();
  std::vector<Image> images(rows.size());
  std::vector<std::string> errors(rows.size());
  parallel_for(rows.size(), [&](size_t i) {
    try {
      images[i] = load_image_grayscale(
          manifest.resolve_path(manifest.rows[rows[i]]), config.crop_rows,
          config.crop_cols);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (const std::string& e : errors) {
    if (!e.empty()) throw std::runtime_error(e);
  }

  const std::vector<FilterBank> banks =
      learn_layered_pca(images, config.layers,
                        std::vector<int>(config.layers, config.k),
                        config.filters_per_layer);
  save_bank_file(out_path, banks);
  std::cout << "learned " << banks.size() << " layer(s) from " << rows.size()
            << " gallery image(s); wrote " << out_path << "\n";
  if (!emit_dir.empty()) {
    emit_filter_images(banks, emit_dir);
    std::cout << "wrote filter images to " << emit_dir << "\n";
  }
  return 0;
}

int run_extract(const std::string& manifest_path,
                const std::string& config_path, const std::string& out_path) {
  const Manifest manifest = load_manifest(manifest_path);
  const PipelineConfig config = load_config(config_path);
  const FeatureStore store = extract_manifest(manifest, config);
  save_feature_store(out_path, store);
  std::cout << "wrote " << out_path << " (" << store.records.size()
            << " records, dim " << store.dim << ", stage "
            << to_string(store.stage) << ")\n";
  return 0;
}

int run_evaluate(const std::string& manifest_path,
                 const std::string& config_path,
                 const std::string& report_path) {
  const Manifest manifest = load_manifest(manifest_path);
  const PipelineConfig config = load_config(config_path);
  const EvaluationOutcome outcome = evaluate(manifest, config);

  std::cout << outcome.report.to_text();
  if (!report_path.empty()) {
    write_text_file(report_path, outcome.report.to_csv());
    std::cout << "\nwrote " << report_path << "\n";
  }
  if (!outcome.probe_errors.empty()) {
    std::cerr << outcome.probe_errors.size()
              << " probe(s) failed and were excluded from the rates:\n";
    for (const std::string& e : outcome.probe_errors) {
      std::cerr << "  " << e << "\n";
    }
    return 1;
  }
  return 0;
}

int run_verify_klt(double r, int n, const std::string& csv_path,
                   double min_cos) {
  const KltDctComparison cmp = compare_klt_dct(MarkovModel(r, n));
  std::cout << cmp.to_text();
  if (!csv_path.empty()) {
    write_text_file(csv_path, cmp.to_csv());
    std::cout << "wrote " << csv_path << "\n";
  }
  std::cout << std::setprecision(10);
  if (cmp.min_cos >= min_cos) {
    std::cout << "PASS: min |cos| " << cmp.min_cos << " >= " << min_cos
              << "\n";
    return 0;
  }
  std::cout << "FAIL: min |cos| " << cmp.min_cos << " < " << min_cos << "\n";
  return 1;
}

int run_inspect(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  char magic[4] = {};
  in.read(magic, 4);
  in.close();
  const std::string tag(magic, 4);
  if (tag == "DCTB") {
    std::cout << describe_bank_file(path);
  } else if (tag == "DCTF") {
    std::cout << describe_feature_store(path);
  } else {
    throw std::runtime_error(path +
                             ": not a filter bank or feature store file");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cascaded cosine-filter face feature toolkit"};
  app.require_subcommand(1);

  // filters
  auto* filters = app.add_subcommand(
      "filters", "Build an analytic filter bank (and optionally render it)");
  int f_k = 5, f_p = 8, f_layers = 1;
  std::string f_order = "zigzag", f_out, f_emit;
  bool f_flip = false;
  filters->add_option("--k", f_k, "Kernel size (odd)")->capture_default_str();
  filters->add_option("--p", f_p, "Filters per layer")->capture_default_str();
  filters->add_option("--order", f_order, "zigzag or horizontal-major")
      ->capture_default_str();
  filters->add_flag("--flip-axis", f_flip,
                    "Reverse the within-antidiagonal direction");
  filters->add_option("--layers", f_layers, "Number of cascade layers")
      ->capture_default_str();
  filters->add_option("--out", f_out, "Output bank file (.dctb)")->required();
  filters->add_option("--emit-pgm", f_emit,
                      "Directory for min-max scaled filter images");

  // learn-pca
  auto* learn = app.add_subcommand(
      "learn-pca", "Learn filters from gallery image patches");
  std::string l_manifest, l_config, l_out, l_emit;
  learn->add_option("--manifest", l_manifest, "Dataset manifest CSV")
      ->required();
  learn->add_option("--config", l_config,
                    "Pipeline config (crop dims, k, layers, counts)")
      ->required();
  learn->add_option("--out", l_out, "Output bank file (.dctb)")->required();
  learn->add_option("--emit-pgm", l_emit,
                    "Directory for min-max scaled filter images");

  // extract
  auto* extract = app.add_subcommand(
      "extract", "Extract features for every manifest row to a store file");
  std::string e_manifest, e_config, e_out;
  extract->add_option("--manifest", e_manifest, "Dataset manifest CSV")
      ->required();
  extract->add_option("--config", e_config, "Pipeline config")->required();
  extract->add_option("--out", e_out, "Output feature store (.dctf)")
      ->required();

  // evaluate
  auto* eval = app.add_subcommand(
      "evaluate", "Run gallery/probe identification and report rank-1 rates");
  std::string v_manifest, v_config, v_report;
  eval->add_option("--manifest", v_manifest, "Dataset manifest CSV")
      ->required();
  eval->add_option("--config", v_config, "Pipeline config")->required();
  eval->add_option("--report", v_report, "Write the report as CSV here");

  // verify-klt
  auto* verify = app.add_subcommand(
      "verify-klt",
      "Check Markov-model eigenvectors against cosine bases numerically");
  double k_r = 0.999, k_min_cos = 0.999;
  int k_n = 8;
  std::string k_csv;
  verify->add_option("--r", k_r, "Adjacent-sample correlation in [0, 1)")
      ->capture_default_str();
  verify->add_option("--n", k_n, "Signal length")->capture_default_str();
  verify->add_option("--csv", k_csv, "Write the per-basis table as CSV here");
  verify->add_option("--min-cos", k_min_cos,
                     "Pass threshold on the minimum |cosine|")
      ->capture_default_str();

  // inspect
  auto* inspect =
      app.add_subcommand("inspect", "Print a bank or feature store header");
  std::string i_path;
  inspect->add_option("file", i_path, "File to inspect")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (filters->parsed()) {
      return run_filters(f_k, f_p, f_order, f_flip, f_layers, f_out, f_emit);
    }
    if (learn->parsed()) {
      return run_learn_pca(l_manifest, l_config, l_out, l_emit);
    }
    if (extract->parsed()) return run_extract(e_manifest, e_config, e_out);
    if (eval->parsed()) return run_evaluate(v_manifest, v_config, v_report);
    if (verify->parsed()) return run_verify_klt(k_r, k_n, k_csv, k_min_cos);
    if (inspect->parsed()) return run_inspect(i_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
