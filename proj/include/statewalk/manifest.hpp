#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace statewalk {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kManifestFileName = "manifest.json";

std::string sha256_file(const std::filesystem::path& path);

struct ManifestEntry {
    std::string name; // path relative to the run directory
    std::uintmax_t bytes = 0;
    std::string sha256;
};

struct RunManifest {
    std::string tool_version = kToolVersion;
    nlohmann::json config;
    std::uint64_t master_seed = 0;
    std::string started_utc;
    std::string finished_utc;
    std::vector<ManifestEntry> files;
};

// Inventories every regular file in `dir` (except the manifest itself) and
// writes manifest.json there.
void write_manifest(const std::filesystem::path& dir, RunManifest manifest);

struct ManifestCheck {
    bool ok = false;
    std::vector<std::string> problems;
};

// Re-hashes the inventory recorded in `dir`/manifest.json.
ManifestCheck verify_manifest(const std::filesystem::path& dir);

std::string utc_timestamp();

} // namespace statewalk
