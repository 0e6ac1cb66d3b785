#pragma once

#include <chrono>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace gsearch::cli {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Comma separated rows, '\n' terminated; numbers through format_number.
class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header);

  CsvWriter& add(double value);
  CsvWriter& add(long long value);
  CsvWriter& add(const std::string& value);
  void end_row();

  const std::string& text() const noexcept { return text_; }

 private:
  std::string text_;
  bool row_open_ = false;
};

std::string sha256_hex(const std::string& bytes);

/// Writes the whole file in binary mode; throws IoError.
void write_file(const std::filesystem::path& path, const std::string& bytes);

/// `base` with its extension replaced by `suffix` (e.g. ".summary.json").
std::filesystem::path sibling(const std::filesystem::path& base, const std::string& suffix);

/// Parameter set, outputs with SHA-256 digests and wall-clock time of one invocation.
class RunManifest {
 public:
  RunManifest(std::string subcommand, nlohmann::ordered_json parameters);

  void note(const std::string& key, nlohmann::ordered_json value);
  /// Writes `bytes` to `path` and records its digest.
  void emit(const std::filesystem::path& path, const std::string& bytes);
  /// Writes the manifest itself (not listed among the outputs).
  void finish(const std::filesystem::path& path);

  const std::vector<std::filesystem::path>& outputs() const noexcept { return paths_; }

 private:
  std::string subcommand_;
  nlohmann::ordered_json parameters_;
  nlohmann::ordered_json notes_ = nlohmann::ordered_json::object();
  nlohmann::ordered_json files_ = nlohmann::ordered_json::array();
  std::vector<std::filesystem::path> paths_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace gsearch::cli
