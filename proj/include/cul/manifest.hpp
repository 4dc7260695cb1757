#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cul/error.hpp"
#include "cul/version.hpp"

namespace cul {

// =====================================================================
// Run manifests: everything needed to re-execute a command and get the
// same bytes back in deterministic mode.
// =====================================================================

// FNV-1a over raw file bytes; cheap, stable, good enough for input
// fingerprinting (not security).
inline std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open input for digest: " + path);
  std::uint64_t h = 0xcbf29ce484222325ull;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ull;
    }
    if (got < static_cast<std::streamsize>(sizeof(buf))) break;
  }
  return h;
}

inline std::string hex_u64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct InputDigest {
  std::string path;
  std::string fnv1a64;
};

struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  nlohmann::json flags;  // effective values after config-file merge
  std::uint64_t seed = 0;
  std::vector<InputDigest> inputs;
  std::string timestamp;  // empty in deterministic mode
  bool deterministic = true;
};

inline void manifest_add_input(RunManifest& m, const std::string& path) {
  m.inputs.push_back({path, hex_u64(fnv1a64_file(path))});
}

inline nlohmann::json manifest_to_json(const RunManifest& m) {
  nlohmann::json inputs = nlohmann::json::array();
  for (const auto& d : m.inputs) inputs.push_back({{"path", d.path}, {"fnv1a64", d.fnv1a64}});
  return {{"command", m.command},
          {"argv", m.argv},
          {"flags", m.flags},
          {"seed", m.seed},
          {"tool_version", kToolVersion},
          {"format_version", kFormatVersion},
          {"inputs", inputs},
          {"timestamp", m.timestamp},
          {"deterministic", m.deterministic}};
}

inline void write_manifest(const std::string& path, const RunManifest& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write manifest: " + path);
  out << manifest_to_json(m).dump(2) << '\n';
  if (!out) throw IoError("failed writing manifest: " + path);
}

}  // namespace cul
