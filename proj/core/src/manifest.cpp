#include "iris/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "iris/errors.hpp"

namespace iris {

DatasetManifest read_manifest(const std::filesystem::path& csv_path) {
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + csv_path.string());

  DatasetManifest manifest;
  manifest.base_dir = csv_path.has_parent_path() ? csv_path.parent_path()
                                                 : std::filesystem::path(".");

  std::string line;
  if (!std::getline(in, line) ||
      (line != "path,subject,eye,sample" && line != "path,subject,eye,sample\r"))
    throw Error(Errc::format_error, "bad manifest header in " + csv_path.string());

  std::set<std::tuple<std::string, char, int>> seen;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::vector<std::string> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == ',') {
        fields.push_back(line.substr(start, i - start));
        start = i + 1;
      }
    }
    if (fields.size() != 4)
      throw Error(Errc::format_error,
                  "expected 4 fields at line " + std::to_string(line_no) + " of " +
                      csv_path.string());

    ManifestEntry e;
    e.path = fields[0];
    e.subject = fields[1];
    if (fields[2].size() != 1 || (fields[2][0] != 'L' && fields[2][0] != 'R'))
      throw Error(Errc::format_error,
                  "eye must be L or R at line " + std::to_string(line_no));
    e.eye = fields[2][0];
    if (e.path.empty() || e.subject.empty())
      throw Error(Errc::format_error,
                  "empty path or subject at line " + std::to_string(line_no));
    try {
      e.sample = std::stoi(fields[3]);
    } catch (const std::exception&) {
      throw Error(Errc::format_error, "bad sample index at line " + std::to_string(line_no));
    }
    if (e.sample < 0)
      throw Error(Errc::format_error,
                  "sample index must be >= 0 at line " + std::to_string(line_no));
    if (!seen.insert({e.subject + e.eye, e.eye, e.sample}).second)
      throw Error(Errc::format_error,
                  "duplicate (subject, eye, sample) at line " + std::to_string(line_no));
    manifest.entries.push_back(std::move(e));
  }
  if (manifest.entries.empty())
    throw Error(Errc::format_error, "no entries in " + csv_path.string());
  return manifest;
}

void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& csv_path) {
  std::ofstream out(csv_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot create " + csv_path.string());
  out << "path,subject,eye,sample\n";
  for (const auto& e : manifest.entries) {
    if (e.path.find(',') != std::string::npos || e.subject.find(',') != std::string::npos)
      throw Error(Errc::format_error, "manifest fields must not contain commas");
    out << e.path << ',' << e.subject << ',' << e.eye << ',' << e.sample << '\n';
  }
  if (!out) throw Error(Errc::io_error, "short write to " + csv_path.string());
}

}  // namespace iris
