#include "statewalk/manifest.hpp"

#include "statewalk/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace statewalk {

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());

    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx) throw std::runtime_error("EVP context allocation failed");
    if (EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
        EVP_MD_CTX_free(ctx);
        throw std::runtime_error("sha256 init failed");
    }
    char buf[1 << 15];
    while (in) {
        in.read(buf, sizeof(buf));
        const std::streamsize got = in.gcount();
        if (got > 0 && EVP_DigestUpdate(ctx, buf, std::size_t(got)) != 1) {
            EVP_MD_CTX_free(ctx);
            throw std::runtime_error("sha256 update failed");
        }
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
        EVP_MD_CTX_free(ctx);
        throw std::runtime_error("sha256 final failed");
    }
    EVP_MD_CTX_free(ctx);

    std::string hex(len * 2, '0');
    static const char* tab = "0123456789abcdef";
    for (unsigned int i = 0; i < len; ++i) {
        hex[2 * i] = tab[digest[i] >> 4];
        hex[2 * i + 1] = tab[digest[i] & 0xf];
    }
    return hex;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_manifest(const std::filesystem::path& dir, RunManifest manifest) {
    std::vector<std::filesystem::path> paths;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        if (entry.path().filename() == kManifestFileName) continue;
        paths.push_back(entry.path());
    }
    std::sort(paths.begin(), paths.end());

    manifest.files.clear();
    for (const auto& p : paths) {
        ManifestEntry e;
        e.name = std::filesystem::relative(p, dir).generic_string();
        e.bytes = std::filesystem::file_size(p);
        e.sha256 = sha256_file(p);
        manifest.files.push_back(std::move(e));
    }

    nlohmann::json j;
    j["schema_version"] = 1;
    j["tool_version"] = manifest.tool_version;
    j["config"] = manifest.config;
    j["master_seed"] = manifest.master_seed;
    j["started_utc"] = manifest.started_utc;
    j["finished_utc"] = manifest.finished_utc;
    j["files"] = nlohmann::json::array();
    for (const auto& f : manifest.files)
        j["files"].push_back({{"name", f.name}, {"bytes", f.bytes}, {"sha256", f.sha256}});
    write_text_file(dir / kManifestFileName, j.dump(2) + "\n");
}

ManifestCheck verify_manifest(const std::filesystem::path& dir) {
    ManifestCheck check;
    const auto mf = dir / kManifestFileName;
    if (!std::filesystem::exists(mf)) {
        check.problems.push_back("manifest.json not found in " + dir.string());
        return check;
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(mf));
    } catch (const std::exception& e) {
        check.problems.push_back(std::string("manifest parse error: ") + e.what());
        return check;
    }

    std::size_t listed = 0;
    for (const auto& f : j.at("files")) {
        ++listed;
        const auto name = f.at("name").get<std::string>();
        const auto p = dir / name;
        if (!std::filesystem::exists(p)) {
            check.problems.push_back("missing file: " + name);
            continue;
        }
        if (std::filesystem::file_size(p) != f.at("bytes").get<std::uintmax_t>()) {
            check.problems.push_back("size mismatch: " + name);
            continue;
        }
        if (sha256_file(p) != f.at("sha256").get<std::string>())
            check.problems.push_back("checksum mismatch: " + name);
    }

    // files on disk that the inventory does not know about
    for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().filename() == kManifestFileName) continue;
        const auto rel = std::filesystem::relative(entry.path(), dir).generic_string();
        bool found = false;
        for (const auto& f : j.at("files"))
            if (f.at("name").get<std::string>() == rel) found = true;
        if (!found) check.problems.push_back("unlisted file: " + rel);
    }

    check.ok = check.problems.empty() && listed > 0;
    if (listed == 0) check.problems.push_back("manifest lists no files");
    return check;
}

} // namespace statewalk
