#include "output.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <fstream>

#include "gsearch/version.hpp"
#include "gsearch_cli/cli.hpp"

namespace gsearch::cli {

std::string format_number(double value) {
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", value);
  return buf.data();
}

CsvWriter::CsvWriter(const std::vector<std::string>& header) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i > 0) text_ += ',';
    text_ += header[i];
  }
  text_ += '\n';
}

CsvWriter& CsvWriter::add(double value) { return add(format_number(value)); }

CsvWriter& CsvWriter::add(long long value) { return add(std::to_string(value)); }

CsvWriter& CsvWriter::add(const std::string& value) {
  if (row_open_) text_ += ',';
  text_ += value;
  row_open_ = true;
  return *this;
}

void CsvWriter::end_row() {
  text_ += '\n';
  row_open_ = false;
}

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw IoError("sha256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < length; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xF];
  }
  return hex;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open " + path.string() + " for writing");
  file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!file) throw IoError("write to " + path.string() + " failed");
}

std::filesystem::path sibling(const std::filesystem::path& base, const std::string& suffix) {
  std::filesystem::path out = base;
  out.replace_extension();
  out += suffix;
  return out;
}

RunManifest::RunManifest(std::string subcommand, nlohmann::ordered_json parameters)
    : subcommand_(std::move(subcommand)),
      parameters_(std::move(parameters)),
      start_(std::chrono::steady_clock::now()) {}

void RunManifest::note(const std::string& key, nlohmann::ordered_json value) {
  notes_[key] = std::move(value);
}

void RunManifest::emit(const std::filesystem::path& path, const std::string& bytes) {
  write_file(path, bytes);
  files_.push_back({{"path", path.string()}, {"bytes", bytes.size()}, {"sha256", sha256_hex(bytes)}});
  paths_.push_back(path);
}

void RunManifest::finish(const std::filesystem::path& path) {
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  nlohmann::ordered_json doc;
  doc["subcommand"] = subcommand_;
  doc["version"] = kVersion;
  doc["parameters"] = parameters_;
  doc["wall_clock_seconds"] = seconds;
  doc["outputs"] = files_;
  if (!notes_.empty()) doc["notes"] = notes_;
  write_file(path, doc.dump(2) + "\n");
}

}  // namespace gsearch::cli
