#include "botgraph/dataset.hpp"

#include "botgraph/csv.hpp"
#include "botgraph/error.hpp"
#include "botgraph/png_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <unordered_map>

namespace botgraph {

namespace fs = std::filesystem;

std::string image_file_stem(const std::string& session_id) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (std::size_t i = 0; i < session_id.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(session_id[i]);
    bool safe = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                c == '-' || c == '_' || (c == '.' && i > 0);
    if (safe) {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    }
  }
  return out;
}

namespace {

void write_file(const fs::path& path, const void* data, std::size_t size) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
  if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
}

}  // namespace

DatasetWriter::DatasetWriter(fs::path out_dir) : out_dir_(std::move(out_dir)) {
  const fs::path image_dir = out_dir_ / "images";
  std::error_code ec;
  fs::create_directories(image_dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create " + image_dir.string() + ": " + ec.message());
}

void DatasetWriter::add(const TraceImage& image) {
  add_encoded(image.session_id, image.label, encode_png(image.size, image.size, image.pixels));
}

void DatasetWriter::add_encoded(const std::string& session_id, const std::optional<Label>& label,
                                const std::vector<std::uint8_t>& png) {
  std::string file = "images/" + image_file_stem(session_id) + ".png";
  auto [it, inserted] = rows_.try_emplace(session_id, Row{file, label});
  if (!inserted) throw Error(ErrorKind::duplicate_key, "session id '" + session_id + "' repeated");
  write_file(out_dir_ / file, png.data(), png.size());
}

fs::path DatasetWriter::finish() {
  std::string manifest = "file,session_id,label\n";
  for (const auto& [session_id, row] : rows_) {
    manifest += csv_field(row.file) + "," + csv_field(session_id) + ",";
    if (row.label) manifest += to_string(*row.label);
    manifest += "\n";
  }
  const fs::path manifest_path = out_dir_ / "manifest.csv";
  write_file(manifest_path, manifest.data(), manifest.size());
  return manifest_path;
}

fs::path emit_dataset(const std::vector<TraceImage>& images, const fs::path& out_dir) {
  std::set<std::string> ids;
  for (const auto& image : images) {
    if (!ids.insert(image.session_id).second) {
      throw Error(ErrorKind::duplicate_key, "session id '" + image.session_id + "' repeated");
    }
  }
  DatasetWriter writer(out_dir);
  for (const auto& image : images) writer.add(image);
  return writer.finish();
}

std::vector<ManifestRow> read_manifest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open manifest " + path.string());

  std::vector<std::string> fields;
  std::size_t lines = 0, line_no = 0;
  bool ok = true;
  if (!read_csv_record(in, fields, lines, ok)) return {};
  line_no += lines;
  std::unordered_map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < fields.size(); ++i) column.emplace(fields[i], i);
  for (const char* name : {"file", "session_id", "label"}) {
    if (!column.count(name)) {
      throw Error(ErrorKind::format,
                  path.string() + ": manifest lacks column '" + std::string(name) + "'");
    }
  }
  const std::size_t width = fields.size();

  std::vector<ManifestRow> rows;
  while (read_csv_record(in, fields, lines, ok)) {
    const std::size_t record_line = line_no + 1;
    line_no += lines;
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (!ok || fields.size() != width) {
      throw Error(ErrorKind::format,
                  path.string() + ":" + std::to_string(record_line) + ": malformed manifest row");
    }
    ManifestRow row{fields[column["file"]], fields[column["session_id"]], std::nullopt};
    const std::string& label = fields[column["label"]];
    if (!label.empty()) {
      row.label = parse_label(label);
      if (!row.label) {
        throw Error(ErrorKind::format, path.string() + ":" + std::to_string(record_line) +
                                           ": unknown label '" + label + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace botgraph
