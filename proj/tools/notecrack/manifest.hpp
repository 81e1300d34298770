#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace notecrack::cli {

/// Reproducibility record embedded in every output file: the command, every
/// parameter value (seeds included), a digest of every input file, and the
/// toolkit version. Two runs with equal manifests produce byte-identical
/// outputs.
struct RunManifest {
    std::string command;
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<std::pair<std::string, std::string>> inputs;  // path -> digest

    void param(std::string key, std::string value) { params.emplace_back(std::move(key), std::move(value)); }
    void param(std::string key, long long value) { param(std::move(key), std::to_string(value)); }
    void input(const std::filesystem::path& path);
};

/// FNV-1a 64-bit digest of a file's bytes, rendered "fnv1a64:<16 hex>".
std::string file_digest(const std::filesystem::path& path);

/// The manifest as comment lines, each starting with `prefix`.
std::string render_manifest(const RunManifest& manifest, std::string_view prefix = "# ");

nlohmann::json manifest_json(const RunManifest& manifest);

}  // namespace notecrack::cli
