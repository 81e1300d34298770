#include "manifest.hpp"

#include <cstdio>
#include <fstream>

#include "notecrack/errors.hpp"
#include "notecrack/version.hpp"

namespace notecrack::cli {

std::string file_digest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path.string());
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    char buffer[1 << 16];
    while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0) {
        const std::streamsize n = in.gcount();
        for (std::streamsize i = 0; i < n; ++i) {
            hash ^= static_cast<unsigned char>(buffer[i]);
            hash *= 0x100000001b3ULL;
        }
    }
    char out[32];
    std::snprintf(out, sizeof(out), "fnv1a64:%016llx", static_cast<unsigned long long>(hash));
    return out;
}

void RunManifest::input(const std::filesystem::path& path) {
    inputs.emplace_back(path.string(), file_digest(path));
}

std::string render_manifest(const RunManifest& manifest, std::string_view prefix) {
    std::string out;
    const auto line = [&](const std::string& text) {
        out += prefix;
        out += text;
        out += '\n';
    };
    line("manifest-version: 1");
    line("command: " + manifest.command);
    line("toolkit-version: " + std::string(kVersion));
    for (const auto& [key, value] : manifest.params) line("param " + key + ": " + value);
    for (const auto& [path, digest] : manifest.inputs) line("input " + path + ": " + digest);
    return out;
}

nlohmann::json manifest_json(const RunManifest& manifest) {
    nlohmann::json j;
    j["manifest-version"] = 1;
    j["command"] = manifest.command;
    j["toolkit-version"] = kVersion;
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [key, value] : manifest.params) params[key] = value;
    j["params"] = params;
    nlohmann::json inputs = nlohmann::json::object();
    for (const auto& [path, digest] : manifest.inputs) inputs[path] = digest;
    j["inputs"] = inputs;
    return j;
}

}  // namespace notecrack::cli
