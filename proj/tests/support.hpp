#pragma once

// Shared helpers for the unit and acceptance suites: fixture paths, temp
// dirs, a subprocess runner for the CLI, and synthetic corpus generators.

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "notecrack/corpus.hpp"
#include "notecrack/rng.hpp"
#include "notecrack/symbols.hpp"

namespace testsupport {

inline std::filesystem::path fixture_dir() { return NOTECRACK_FIXTURE_DIR; }

inline std::filesystem::path fixture(const std::string& name) { return fixture_dir() / name; }

inline std::filesystem::path cli_bin() { return NOTECRACK_CLI_BIN; }

inline std::filesystem::path make_temp_dir() {
    static std::atomic<int> counter{0};
    const auto dir = std::filesystem::temp_directory_path() /
                     ("notecrack-test-" + std::to_string(::getpid()) + "-" +
                      std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

/// Runs the notecrack binary with the given arguments, capturing stdout,
/// stderr, and the exit code.
inline CliResult run_cli(const std::vector<std::string>& args) {
    const auto dir = make_temp_dir();
    const auto out_path = dir / "stdout";
    const auto err_path = dir / "stderr";
    std::string command = "'" + cli_bin().string() + "'";
    for (const std::string& arg : args) {
        command += " '" + arg + "'";
    }
    command += " > '" + out_path.string() + "' 2> '" + err_path.string() + "'";
    const int status = std::system(command.c_str());
    CliResult result;
    if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
    result.out = slurp(out_path);
    result.err = slurp(err_path);
    std::filesystem::remove_all(dir);
    return result;
}

/// Low-entropy corpus over a small alphabet: a cycle with occasional jumps,
/// so trigrams are highly predictable.
inline std::vector<notecrack::Sequence> cycle_corpus(const notecrack::AlphabetRef& alphabet,
                                                     int sequences, int length, std::uint64_t seed) {
    const int v = alphabet->size();
    notecrack::Rng rng(notecrack::mix_seed(seed, 0x637963ULL));
    std::vector<notecrack::Sequence> out;
    out.reserve(static_cast<std::size_t>(sequences));
    for (int s = 0; s < sequences; ++s) {
        std::vector<std::int32_t> tokens;
        tokens.reserve(static_cast<std::size_t>(length));
        int current = static_cast<int>(rng.below(static_cast<std::uint64_t>(v)));
        for (int i = 0; i < length; ++i) {
            tokens.push_back(current);
            const auto roll = rng.below(10);
            if (roll < 8) {
                current = (current + 1) % v;  // usually walk the cycle
            } else if (roll == 8) {
                current = (current + v - 1) % v;
            } else {
                current = static_cast<int>(rng.below(static_cast<std::uint64_t>(v)));
            }
        }
        out.emplace_back(alphabet, std::move(tokens));
    }
    return out;
}

/// Uniform iid corpus.
inline std::vector<notecrack::Sequence> iid_corpus(const notecrack::AlphabetRef& alphabet,
                                                   int sequences, int length, std::uint64_t seed) {
    const int v = alphabet->size();
    notecrack::Rng rng(notecrack::mix_seed(seed, 0x696964ULL));
    std::vector<notecrack::Sequence> out;
    out.reserve(static_cast<std::size_t>(sequences));
    for (int s = 0; s < sequences; ++s) {
        std::vector<std::int32_t> tokens;
        tokens.reserve(static_cast<std::size_t>(length));
        for (int i = 0; i < length; ++i) {
            tokens.push_back(static_cast<std::int32_t>(rng.below(static_cast<std::uint64_t>(v))));
        }
        out.emplace_back(alphabet, std::move(tokens));
    }
    return out;
}

/// A random sequence of the given length.
inline notecrack::Sequence random_sequence(const notecrack::AlphabetRef& alphabet, int length,
                                           std::uint64_t seed) {
    notecrack::Rng rng(notecrack::mix_seed(seed, 0x736571ULL));
    std::vector<std::int32_t> tokens;
    tokens.reserve(static_cast<std::size_t>(length));
    for (int i = 0; i < length; ++i) {
        tokens.push_back(static_cast<std::int32_t>(rng.below(static_cast<std::uint64_t>(alphabet->size()))));
    }
    return notecrack::Sequence(alphabet, std::move(tokens));
}

}  // namespace testsupport
