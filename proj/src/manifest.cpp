#include "dctnet/manifest.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace dctnet {
namespace {

[[noreturn]] void fail(const std::string& source, int line,
                       const std::string& what) {
  throw std::runtime_error(source + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(current);
  return fields;
}

uint32_t parse_subject(const std::string& token, const std::string& source,
                       int line) {
  if (token.empty()) fail(source, line, "empty subject id");
  for (char c : token) {
    if (c < '0' || c > '9') {
      fail(source, line, "subject id '" + token +
                             "' is not an unsigned integer");
    }
  }
  try {
    unsigned long value = std::stoul(token);
    if (value > 0xFFFFFFFFul) throw std::out_of_range(token);
    return static_cast<uint32_t>(value);
  } catch (const std::out_of_range&) {
    fail(source, line, "subject id '" + token + "' out of range");
  }
}

}  // namespace

std::vector<size_t> Manifest::gallery_indices() const {
  std::vector<size_t> out;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_probe) out.push_back(i);
  }
  return out;
}

std::vector<size_t> Manifest::probe_indices() const {
  std::vector<size_t> out;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].is_probe) out.push_back(i);
  }
  return out;
}

std::vector<std::string> Manifest::group_labels() const {
  std::vector<std::string> labels;
  std::unordered_set<std::string> seen;
  for (const ManifestRow& row : rows) {
    if (seen.insert(row.group).second) labels.push_back(row.group);
  }
  return labels;
}

std::string Manifest::resolve_path(const ManifestRow& row) const {
  std::filesystem::path p(row.path);
  if (p.is_absolute() || base_dir.empty()) return row.path;
  return (std::filesystem::path(base_dir) / p).string();
}

Manifest parse_manifest(const std::string& text, const std::string& base_dir,
                        const std::string& source_name) {
  Manifest manifest;
  manifest.base_dir = base_dir;

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool saw_header = false;
  std::unordered_set<std::string> paths;
  std::set<uint32_t> gallery_subjects;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    if (!saw_header) {
      if (line != "path,subject,role,group") {
        fail(source_name, line_no,
             "expected header 'path,subject,role,group', got '" + line + "'");
      }
      saw_header = true;
      continue;
    }

    std::vector<std::string> fields = split_fields(line);
    if (fields.size() != 4) {
      fail(source_name, line_no,
           "expected 4 comma-separated fields, got " +
               std::to_string(fields.size()) +
               " (paths containing commas are not supported)");
    }
    for (const std::string& f : fields) {
      if (f.empty()) fail(source_name, line_no, "empty field");
    }

    ManifestRow row;
    row.path = fields[0];
    row.subject = parse_subject(fields[1], source_name, line_no);
    if (fields[2] == "gallery") {
      row.is_probe = false;
    } else if (fields[2] == "probe") {
      row.is_probe = true;
    } else {
      fail(source_name, line_no,
           "role must be 'gallery' or 'probe', got '" + fields[2] + "'");
    }
    row.group = fields[3];

    if (!paths.insert(row.path).second) {
      fail(source_name, line_no, "duplicate path '" + row.path + "'");
    }
    if (!row.is_probe) gallery_subjects.insert(row.subject);
    manifest.rows.push_back(std::move(row));
  }

  if (!saw_header) {
    throw std::runtime_error(source_name + ": empty manifest (missing header)");
  }
  if (gallery_subjects.empty()) {
    throw std::runtime_error(source_name + ": manifest has no gallery rows");
  }
  for (const ManifestRow& row : manifest.rows) {
    if (row.is_probe && !gallery_subjects.count(row.subject)) {
      throw std::runtime_error(
          source_name + ": probe subject " + std::to_string(row.subject) +
          " ('" + row.path +
          "') has no gallery image (closed-set identification requires one)");
    }
  }
  if (manifest.group_labels().size() > 0xFFFF) {
    throw std::runtime_error(source_name +
                             ": more than 65535 distinct group labels");
  }
  return manifest;
}

Manifest load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open manifest");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string dir = std::filesystem::path(path).parent_path().string();
  return parse_manifest(buffer.str(), dir, path);
}

}  // namespace dctnet
