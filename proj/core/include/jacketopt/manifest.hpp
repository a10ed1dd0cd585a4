#pragma once

// Run provenance: every CLI invocation records what it ran, on which inputs
// (by content digest), with which seed, and what it produced. A run's outputs
// are reproducible from the manifest's inputs plus the seed.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace jacketopt {

inline constexpr const char* kToolVersion = "1.0.0";

// SHA-256 digest as lowercase hex.
std::string sha256_hex(const void* data, std::size_t len);
std::string sha256_hex(const std::string& data);
std::string sha256_file(const std::string& path);  // throws ConfigError if unreadable

// Current time as an ISO-8601 UTC stamp, e.g. "2026-08-23T12:34:56Z".
std::string utc_timestamp();

struct RunManifest {
  std::string command;  // the invocation, reconstructed from argv
  std::string version = kToolVersion;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string started_utc;
  std::string finished_utc;
  std::vector<std::pair<std::string, std::string>> inputs;  // path, sha256
  std::vector<std::string> outputs;

  void add_input(const std::string& path);  // digests the file immediately
  std::string to_json() const;
};

// Atomic write; the manifest is the last artifact of a run, so a present
// manifest means the listed outputs are complete.
void write_manifest(const RunManifest& m, const std::string& path);

}  // namespace jacketopt
