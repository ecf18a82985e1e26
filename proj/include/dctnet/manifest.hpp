#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dctnet {

// One dataset image: where it lives, who it shows, and which split/group it
// belongs to. `group` is a free-form label (e.g. "fb", "dup-I"); probe
// accuracy is reported per group.
struct ManifestRow {
  std::string path;
  uint32_t subject = 0;
  bool is_probe = false;
  std::string group;
};

struct Manifest {
  std::vector<ManifestRow> rows;
  // Directory the manifest file was loaded from; relative row paths resolve
  // against it.
  std::string base_dir;

  std::vector<size_t> gallery_indices() const;
  std::vector<size_t> probe_indices() const;

  // Group labels in order of first appearance across all rows. The position
  // in this list is the group's numeric id in feature-store records.
  std::vector<std::string> group_labels() const;

  // Absolute or base_dir-resolved filesystem path for a row.
  std::string resolve_path(const ManifestRow& row) const;
};

// Parses and validates a manifest CSV with header `path,subject,role,group`.
// Rules enforced: exactly 4 unquoted comma-separated fields per row (paths
// containing commas are rejected), unique paths, role is "gallery" or
// "probe", subject is an unsigned integer, at least one gallery row, and
// every probe subject also appears in the gallery (closed-set
// identification).
Manifest load_manifest(const std::string& path);

// Same validation applied to in-memory text; base_dir supplied by caller.
Manifest parse_manifest(const std::string& text, const std::string& base_dir,
                        const std::string& source_name);

}  // namespace dctnet
