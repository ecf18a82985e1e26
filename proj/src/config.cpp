#include "dctnet/config.hpp"

#include "dctnet/dct_filters.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace dctnet {
namespace {

[[noreturn]] void fail(const std::string& source, int line,
                       const std::string& what) {
  throw std::runtime_error(source + ":" + std::to_string(line) + ": " + what);
}

std::string strip(const std::string& s) {
  size_t begin = 0;
  size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) {
    ++begin;
  }
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) {
    --end;
  }
  return s.substr(begin, end - begin);
}

// Removes a trailing '#' comment, respecting double-quoted strings.
std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

int parse_int(const std::string& value, const std::string& source, int line,
              const std::string& key) {
  try {
    size_t pos = 0;
    int result = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return result;
  } catch (const std::exception&) {
    fail(source, line, key + ": expected integer, got '" + value + "'");
  }
}

bool parse_bool(const std::string& value, const std::string& source, int line,
                const std::string& key) {
  if (value == "true") return true;
  if (value == "false") return false;
  fail(source, line, key + ": expected true or false, got '" + value + "'");
}

std::string parse_string(const std::string& value, const std::string& source,
                         int line, const std::string& key) {
  if (value.size() < 2 || value.front() != '"' || value.back() != '"') {
    fail(source, line, key + ": expected double-quoted string, got '" + value +
                           "'");
  }
  return value.substr(1, value.size() - 2);
}

std::vector<int> parse_int_array(const std::string& value,
                                 const std::string& source, int line,
                                 const std::string& key) {
  if (value.size() < 2 || value.front() != '[' || value.back() != ']') {
    fail(source, line, key + ": expected integer array like [8, 8], got '" +
                           value + "'");
  }
  std::vector<int> result;
  std::string inner = value.substr(1, value.size() - 2);
  std::string item;
  std::istringstream in(inner);
  while (std::getline(in, item, ',')) {
    result.push_back(parse_int(strip(item), source, line, key));
  }
  if (result.empty()) fail(source, line, key + ": array must be nonempty");
  return result;
}

void validate(const PipelineConfig& c, const std::string& source) {
  auto reject = [&](const std::string& what) {
    throw std::runtime_error(source + ": " + what);
  };
  if (c.crop_rows < 1 || c.crop_cols < 1) reject("crop dims must be >= 1");
  if (c.k < 1) reject("k must be >= 1");
  if (c.layers < 1) reject("layers must be >= 1");
  if (static_cast<int>(c.filters_per_layer.size()) != c.layers) {
    reject("filters_per_layer must list exactly one count per layer (" +
           std::to_string(c.layers) + " expected, " +
           std::to_string(c.filters_per_layer.size()) + " given)");
  }
  for (int p : c.filters_per_layer) {
    if (p < 1) reject("filters_per_layer entries must be >= 1");
    if (p > 30) {
      reject("filters_per_layer entries must be <= 30 (code values are "
             "packed into 32-bit integers)");
    }
  }
  if (c.block_rows < 1 || c.block_cols < 1) reject("block dims must be >= 1");
  if (c.wpca_dim < 0) reject("wpca_dim must be >= 0 (0 disables projection)");
  if (c.filter_source == FilterSource::kBankFile && c.bank_path.empty()) {
    reject("filter_source names a bank file but the path is empty");
  }
}

}  // namespace

std::string PipelineConfig::resolved_bank_path() const {
  std::filesystem::path p(bank_path);
  if (p.is_absolute() || base_dir.empty()) return bank_path;
  return (std::filesystem::path(base_dir) / p).string();
}

bool PipelineConfig::operator==(const PipelineConfig& other) const {
  return crop_rows == other.crop_rows && crop_cols == other.crop_cols &&
         filter_source == other.filter_source &&
         bank_path == other.bank_path && k == other.k &&
         layers == other.layers &&
         filters_per_layer == other.filters_per_layer &&
         scan_order == other.scan_order && flip_axis == other.flip_axis &&
         block_rows == other.block_rows && block_cols == other.block_cols &&
         tr_norm == other.tr_norm && wpca_dim == other.wpca_dim;
}

PipelineConfig parse_config(const std::string& text,
                            const std::string& source_name) {
  PipelineConfig config;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  std::unordered_set<std::string> seen;

  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::string line = strip(strip_comment(raw));
    if (line.empty()) continue;

    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      fail(source_name, line_no, "expected 'key = value', got '" + line + "'");
    }
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    if (key.empty()) fail(source_name, line_no, "missing key");
    if (value.empty()) fail(source_name, line_no, key + ": missing value");
    if (!seen.insert(key).second) {
      fail(source_name, line_no, "duplicate key '" + key + "'");
    }

    if (key == "crop_rows") {
      config.crop_rows = parse_int(value, source_name, line_no, key);
    } else if (key == "crop_cols") {
      config.crop_cols = parse_int(value, source_name, line_no, key);
    } else if (key == "filter_source") {
      const std::string s = parse_string(value, source_name, line_no, key);
      if (s == "dct") {
        config.filter_source = FilterSource::kDct;
        config.bank_path.clear();
      } else if (s == "pca-learn") {
        config.filter_source = FilterSource::kPcaLearn;
        config.bank_path.clear();
      } else {
        config.filter_source = FilterSource::kBankFile;
        config.bank_path = s;
      }
    } else if (key == "k") {
      config.k = parse_int(value, source_name, line_no, key);
    } else if (key == "layers") {
      config.layers = parse_int(value, source_name, line_no, key);
    } else if (key == "filters_per_layer") {
      config.filters_per_layer =
          parse_int_array(value, source_name, line_no, key);
    } else if (key == "scan_order") {
      const std::string s = parse_string(value, source_name, line_no, key);
      try {
        config.scan_order = scan_policy_from_string(s);
      } catch (const std::exception& e) {
        fail(source_name, line_no, key + ": " + e.what());
      }
      if (config.scan_order == ScanPolicy::kLearned) {
        fail(source_name, line_no,
             key + ": 'learned' is set by the filter source, not here");
      }
    } else if (key == "flip_axis") {
      config.flip_axis = parse_bool(value, source_name, line_no, key);
    } else if (key == "block_rows") {
      config.block_rows = parse_int(value, source_name, line_no, key);
    } else if (key == "block_cols") {
      config.block_cols = parse_int(value, source_name, line_no, key);
    } else if (key == "tr_norm") {
      config.tr_norm = parse_bool(value, source_name, line_no, key);
    } else if (key == "wpca_dim") {
      config.wpca_dim = parse_int(value, source_name, line_no, key);
    } else {
      fail(source_name, line_no, "unknown key '" + key + "'");
    }
  }

  validate(config, source_name);
  return config;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open config");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  PipelineConfig config = parse_config(buffer.str(), path);
  config.base_dir = std::filesystem::path(path).parent_path().string();
  return config;
}

std::string serialize_config(const PipelineConfig& config) {
  std::ostringstream out;
  out << "crop_rows = " << config.crop_rows << "\n";
  out << "crop_cols = " << config.crop_cols << "\n";
  out << "filter_source = \"";
  switch (config.filter_source) {
    case FilterSource::kDct:
      out << "dct";
      break;
    case FilterSource::kPcaLearn:
      out << "pca-learn";
      break;
    case FilterSource::kBankFile:
      out << config.bank_path;
      break;
  }
  out << "\"\n";
  out << "k = " << config.k << "\n";
  out << "layers = " << config.layers << "\n";
  out << "filters_per_layer = [";
  for (size_t i = 0; i < config.filters_per_layer.size(); ++i) {
    if (i > 0) out << ", ";
    out << config.filters_per_layer[i];
  }
  out << "]\n";
  out << "scan_order = \"" << to_string(config.scan_order) << "\"\n";
  out << "flip_axis = " << (config.flip_axis ? "true" : "false") << "\n";
  out << "block_rows = " << config.block_rows << "\n";
  out << "block_cols = " << config.block_cols << "\n";
  out << "tr_norm = " << (config.tr_norm ? "true" : "false") << "\n";
  out << "wpca_dim = " << config.wpca_dim << "\n";
  return out.str();
}

}  // namespace dctnet
