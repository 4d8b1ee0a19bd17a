#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace iris {

// One image of a labeled eye. `path` is stored as written in the manifest
// (usually relative); resolve against `DatasetManifest::base_dir`.
struct ManifestEntry {
  std::string path;
  std::string subject;  // e.g. "s00"
  char eye = 'L';       // 'L' or 'R'
  int sample = 0;       // >= 0, unique per (subject, eye)

  std::string eye_label() const { return subject + eye; }
};

struct DatasetManifest {
  std::filesystem::path base_dir;  // directory the paths are relative to
  std::vector<ManifestEntry> entries;

  std::filesystem::path resolve(const ManifestEntry& entry) const {
    std::filesystem::path p(entry.path);
    return p.is_absolute() ? p : base_dir / p;
  }
};

// CSV with header "path,subject,eye,sample". Validates eye in {L, R},
// sample >= 0, and (subject, eye, sample) uniqueness (Errc::format_error).
DatasetManifest read_manifest(const std::filesystem::path& csv_path);
void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& csv_path);

}  // namespace iris
