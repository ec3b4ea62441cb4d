#pragma once

#include "botgraph/ingest.hpp"
#include "botgraph/render.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace botgraph {

// Session id -> file stem. Characters outside [A-Za-z0-9._-] (and a leading
// dot) are percent-escaped, which keeps the mapping injective.
std::string image_file_stem(const std::string& session_id);

// Streams PNG files into out_dir/images and writes the manifest on finish().
class DatasetWriter {
 public:
  // Throws Error(io) when the directory cannot be created.
  explicit DatasetWriter(std::filesystem::path out_dir);

  // Throws Error(duplicate_key) for a session id already added.
  void add(const TraceImage& image);
  void add_encoded(const std::string& session_id, const std::optional<Label>& label,
                   const std::vector<std::uint8_t>& png);
  std::filesystem::path finish();

 private:
  struct Row {
    std::string file;
    std::optional<Label> label;
  };
  std::filesystem::path out_dir_;
  std::map<std::string, Row> rows_;  // keyed (and so sorted) by session id
};

// Writes out_dir/images/<session_id>.png and out_dir/manifest.csv
// (file,session_id,label; rows sorted by session_id; label empty when
// unknown). Returns the manifest path. Throws Error(duplicate_key) for a
// repeated session id and Error(io) when the directory is not writable.
std::filesystem::path emit_dataset(const std::vector<TraceImage>& images,
                                   const std::filesystem::path& out_dir);

struct ManifestRow {
  std::string file;
  std::string session_id;
  std::optional<Label> label;
};

std::vector<ManifestRow> read_manifest(const std::filesystem::path& path);

}  // namespace botgraph
