#include "prbshare/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "prbshare/rng.hpp"
#include "prbshare/version.hpp"

namespace prbshare {

std::string digest_bytes(const std::string& bytes) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                  static_cast<unsigned long long>(rng::fnv1a64(bytes)));
    return buf;
}

std::string digest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for digest: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return digest_bytes(buf.str());
}

RunManifest write_manifest(const std::string& command, const std::string& out_dir,
                           const std::string& config_text,
                           const std::vector<std::string>& input_paths,
                           const std::vector<std::string>& output_paths) {
    RunManifest manifest;
    manifest.command = command;
    manifest.config_digest = digest_bytes(config_text);
    manifest.tool_version = kToolVersion;
    for (const auto& path : input_paths) manifest.input_digests.emplace_back(path, digest_file(path));
    for (const auto& path : output_paths) manifest.output_digests.emplace_back(path, digest_file(path));

    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    manifest.timestamp = stamp;

    nlohmann::ordered_json j;
    j["command"] = manifest.command;
    j["tool_version"] = manifest.tool_version;
    j["timestamp"] = manifest.timestamp;
    j["config_digest"] = manifest.config_digest;
    auto digests = [](const std::vector<std::pair<std::string, std::string>>& entries) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& [path, digest] : entries) arr.push_back({{"path", path}, {"digest", digest}});
        return arr;
    };
    j["input_digests"] = digests(manifest.input_digests);
    j["output_digests"] = digests(manifest.output_digests);

    const std::string path = out_dir + "/" + command + "-manifest.json";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write manifest: " + path);
    out << j.dump(2) << '\n';
    return manifest;
}

}  // namespace prbshare
