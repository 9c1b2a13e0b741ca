#pragma once

#include <string>
#include <vector>

namespace prbshare {

/// Reproducibility record written next to every command's outputs: what ran,
/// a digest of the resolved configuration, and content digests of all inputs
/// and outputs. Digests are 64-bit FNV-1a over the raw bytes (stable, not
/// cryptographic).
struct RunManifest {
    std::string command;
    std::string config_digest;
    std::vector<std::pair<std::string, std::string>> input_digests;   // path -> digest
    std::vector<std::pair<std::string, std::string>> output_digests;  // path -> digest
    std::string tool_version;
    std::string timestamp;  // ISO-8601 UTC
};

std::string digest_bytes(const std::string& bytes);
std::string digest_file(const std::string& path);

/// Build and write `<out_dir>/<command>-manifest.json`.
RunManifest write_manifest(const std::string& command, const std::string& out_dir,
                           const std::string& config_text,
                           const std::vector<std::string>& input_paths,
                           const std::vector<std::string>& output_paths);

}  // namespace prbshare
