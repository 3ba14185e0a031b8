#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace s3 {

// ---------------------------------------------------------------------------
// CRC32 (IEEE 802.3 polynomial)
// ---------------------------------------------------------------------------

namespace detail {

inline const std::array<std::uint32_t, 256>& crc32_table() {
  static const std::array<std::uint32_t, 256> table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t c = i;
      for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xedb88320u ^ (c >> 1) : c >> 1;
      t[i] = c;
    }
    return t;
  }();
  return table;
}

}  // namespace detail

inline std::uint32_t crc32(const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint32_t c = 0xffffffffu;
  for (std::size_t i = 0; i < len; ++i) c = detail::crc32_table()[(c ^ p[i]) & 0xff] ^ (c >> 8);
  return c ^ 0xffffffffu;
}

inline std::uint32_t crc32(const std::string& s) { return crc32(s.data(), s.size()); }

// ---------------------------------------------------------------------------
// Record framing: [u32 length][u32 crc][JSON bytes], little-endian
// ---------------------------------------------------------------------------

/// A record that is fully framed but fails its checksum (or does not parse)
/// is corruption and halts startup. A short tail is ordinary truncation from
/// a crash mid-append and is silently dropped.
class CorruptLog : public std::runtime_error {
 public:
  CorruptLog(std::size_t index, const std::string& what)
      : std::runtime_error("corrupt log record " + std::to_string(index) + ": " + what),
        record_index_(index) {}

  std::size_t record_index() const { return record_index_; }

 private:
  std::size_t record_index_;
};

/// Append-only command log. One writer; records are never rewritten.
class EventLog {
 public:
  explicit EventLog(std::string path) : path_(std::move(path)) {
    out_.open(path_, std::ios::binary | std::ios::app);
    if (!out_) throw std::runtime_error("cannot open log for append: " + path_);
  }

  const std::string& path() const { return path_; }

  void append(const nlohmann::json& record) {
    const std::string body = record.dump();
    const std::uint32_t len = static_cast<std::uint32_t>(body.size());
    const std::uint32_t crc = crc32(body);
    char header[8];
    write_u32(header, len);
    write_u32(header + 4, crc);
    out_.write(header, 8);
    out_.write(body.data(), static_cast<std::streamsize>(body.size()));
    out_.flush();
    if (!out_) throw std::runtime_error("log append failed: " + path_);
  }

  /// Reads every complete record. Tolerates a truncated final record;
  /// throws CorruptLog (with the 1-based record index) on checksum or
  /// parse failure.
  static std::vector<nlohmann::json> read_all(const std::string& path) {
    std::vector<nlohmann::json> records;
    std::ifstream in(path, std::ios::binary);
    if (!in) return records;  // absent log = empty history
    while (true) {
      char header[8];
      in.read(header, 8);
      if (in.gcount() < 8) break;  // truncated header: stop at last complete record
      const std::uint32_t len = read_u32(header);
      const std::uint32_t crc = read_u32(header + 4);
      std::string body(len, '\0');
      in.read(body.data(), static_cast<std::streamsize>(len));
      if (static_cast<std::uint32_t>(in.gcount()) < len) break;  // truncated body
      const std::size_t index = records.size() + 1;
      if (crc32(body) != crc) throw CorruptLog(index, "checksum mismatch");
      try {
        records.push_back(nlohmann::json::parse(body));
      } catch (const std::exception& e) {
        throw CorruptLog(index, e.what());
      }
    }
    return records;
  }

 private:
  static void write_u32(char* dst, std::uint32_t v) {
    dst[0] = static_cast<char>(v & 0xff);
    dst[1] = static_cast<char>((v >> 8) & 0xff);
    dst[2] = static_cast<char>((v >> 16) & 0xff);
    dst[3] = static_cast<char>((v >> 24) & 0xff);
  }
  static std::uint32_t read_u32(const char* src) {
    return static_cast<std::uint32_t>(static_cast<unsigned char>(src[0])) |
           (static_cast<std::uint32_t>(static_cast<unsigned char>(src[1])) << 8) |
           (static_cast<std::uint32_t>(static_cast<unsigned char>(src[2])) << 16) |
           (static_cast<std::uint32_t>(static_cast<unsigned char>(src[3])) << 24);
  }

  std::string path_;
  std::ofstream out_;
};

// ---------------------------------------------------------------------------
// Snapshot files
// ---------------------------------------------------------------------------

inline void write_json_atomic(const std::string& path, const nlohmann::json& j) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << j.dump(2);
  }
  std::filesystem::rename(tmp, path);
}

inline std::optional<nlohmann::json> read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  try {
    return nlohmann::json::parse(in);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace s3
