#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "manifest.hpp"
#include "notecrack/abc.hpp"
#include "notecrack/cipher.hpp"
#include "notecrack/corpus.hpp"
#include "notecrack/lm.hpp"
#include "notecrack/solver.hpp"
#include "notecrack/symbols.hpp"
#include "notecrack/version.hpp"

namespace notecrack::cli {

namespace {

std::string fixed(double value, int precision) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.*f", precision, value);
    return buffer;
}

std::string pct(double fraction) { return fixed(fraction * 100.0, 1) + "%"; }

void write_output(const std::filesystem::path& path, const std::string& body,
                  const RunManifest& manifest, std::string_view comment_prefix = "# ") {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write output file: " + path.string());
    out << body;
    if (!body.empty() && body.back() != '\n') out << '\n';
    out << render_manifest(manifest, comment_prefix);
}

struct LoadedCorpus {
    AlphabetRef alphabet;
    std::vector<Sequence> sequences;
};

// Formats: melody (one melody per line, pitch names), notes (note-event
// files, one sequence per file), english (raw text, one sequence per file),
// seq (generic sequence file over a named alphabet).
LoadedCorpus load_corpus(const std::string& format, const std::vector<std::string>& paths,
                         const AlphabetRef& seq_alphabet) {
    LoadedCorpus corpus;
    if (format == "melody") {
        corpus.alphabet = melody_alphabet();
        for (const auto& path : paths) {
            auto melodies = read_melody_file(path);
            corpus.sequences.insert(corpus.sequences.end(), melodies.begin(), melodies.end());
        }
    } else if (format == "notes") {
        corpus.alphabet = pitch_duration_alphabet();
        for (const auto& path : paths) {
            const NoteFile file = read_note_file(path);
            corpus.sequences.push_back(normalize_pitch_duration(file.events, file.declared_key));
        }
    } else if (format == "english") {
        corpus.alphabet = english_alphabet();
        for (const auto& path : paths) corpus.sequences.push_back(read_english_file(path));
    } else if (format == "seq") {
        if (!seq_alphabet) throw Error("--format seq requires --alphabet");
        corpus.alphabet = seq_alphabet;
        for (const auto& path : paths) {
            auto seqs = read_sequence_file(path, seq_alphabet);
            corpus.sequences.insert(corpus.sequences.end(), seqs.begin(), seqs.end());
        }
    } else {
        throw Error("unknown corpus format \"" + format + "\"");
    }
    return corpus;
}

// Cuts a long sequence into consecutive full blocks so corpora read from a
// single text (english) can be split and sampled like any other.
std::vector<Sequence> chop_blocks(const Sequence& s, int block) {
    std::vector<Sequence> out;
    for (std::size_t start = 0; start + static_cast<std::size_t>(block) <= s.size(); start += block) {
        out.emplace_back(s.alphabet(),
                         std::vector<std::int32_t>(s.tokens().begin() + static_cast<std::ptrdiff_t>(start),
                                                   s.tokens().begin() + static_cast<std::ptrdiff_t>(start) +
                                                       block));
    }
    return out;
}

// ---- train -----------------------------------------------------------------

struct TrainArgs {
    std::string format;
    std::vector<std::string> inputs;
    std::string out;
    std::string alphabet_name;
    int order = 3;
};

void cmd_train(const TrainArgs& args) {
    if (args.order != NgramModel::kOrder) {
        throw CLI::ValidationError("train", "only --order 3 is supported in this version");
    }
    const AlphabetRef seq_alphabet =
        args.alphabet_name.empty() ? nullptr : alphabet_by_name(args.alphabet_name);
    const LoadedCorpus corpus = load_corpus(args.format, args.inputs, seq_alphabet);
    const NgramModel model = NgramModel::train(corpus.sequences, corpus.alphabet);

    RunManifest manifest;
    manifest.command = "train";
    manifest.param("format", args.format);
    manifest.param("order", args.order);
    if (!args.alphabet_name.empty()) manifest.param("alphabet", args.alphabet_name);
    for (const auto& path : args.inputs) manifest.input(path);

    std::ostringstream body;
    model.save(body);
    write_output(args.out, body.str(), manifest);
    std::cout << "trained on " << corpus.sequences.size() << " sequences, " << model.total_tokens()
              << " tokens -> " << args.out << "\n";
}

// ---- perplexity --------------------------------------------------------------

struct PerplexityArgs {
    std::string model;
    std::string format;
    std::vector<std::string> inputs;
    std::string out;  // optional
};

void cmd_perplexity(const PerplexityArgs& args) {
    const NgramModel model = NgramModel::load(args.model);
    const LoadedCorpus corpus = load_corpus(args.format, args.inputs, model.alphabet());
    std::uint64_t tokens = 0;
    for (const Sequence& s : corpus.sequences) tokens += s.size();
    const double value = model.perplexity(corpus.sequences);

    std::string line = "sequences " + std::to_string(corpus.sequences.size()) + " tokens " +
                       std::to_string(tokens) + " perplexity " + fixed(value, 6) + "\n";
    std::cout << line;
    if (!args.out.empty()) {
        RunManifest manifest;
        manifest.command = "perplexity";
        manifest.param("format", args.format);
        manifest.input(args.model);
        for (const auto& path : args.inputs) manifest.input(path);
        write_output(args.out, line, manifest);
    }
}

// ---- encipher ----------------------------------------------------------------

struct EncipherArgs {
    std::string key_file;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string plain_name;
    std::string cipher_name;
    std::string in;
    std::string out;
    std::string emit_key;
};

void cmd_encipher(const EncipherArgs& args) {
    const AlphabetRef plain = alphabet_by_name(args.plain_name);
    const AlphabetRef cipher =
        args.cipher_name.empty() ? plain : alphabet_by_name(args.cipher_name);

    std::optional<Key> key;
    if (!args.key_file.empty()) {
        if (args.seed_given) {
            throw CLI::ValidationError("encipher", "--key and --seed are mutually exclusive");
        }
        key = read_key_file(args.key_file, plain, cipher);
    } else if (args.seed_given) {
        key = random_key(plain, cipher, args.seed);
    } else {
        throw CLI::ValidationError("encipher", "either --key FILE or --seed N is required");
    }

    const std::vector<Sequence> sequences = read_sequence_file(args.in, plain);
    std::vector<Sequence> enciphered;
    enciphered.reserve(sequences.size());
    for (const Sequence& s : sequences) enciphered.push_back(encipher(*key, s));

    RunManifest manifest;
    manifest.command = "encipher";
    manifest.param("plain-alphabet", plain->name());
    manifest.param("cipher-alphabet", cipher->name());
    if (args.seed_given) manifest.param("seed", static_cast<long long>(args.seed));
    if (!args.key_file.empty()) manifest.input(args.key_file);
    manifest.input(args.in);

    write_output(args.out, render_sequences(enciphered), manifest);
    if (!args.emit_key.empty()) write_output(args.emit_key, render_key(*key), manifest);
}

// ---- solve -------------------------------------------------------------------

struct SolveArgs {
    std::string model;
    std::string cipher;
    std::string cipher_alphabet = "dorabella";
    SolverConfig config;
    std::string out;
};

nlohmann::json key_json(const Key& key) {
    nlohmann::json j;
    j["plain"] = key.plain_alphabet()->symbols();
    std::vector<std::string> cipher_row;
    for (std::int32_t m : key.mapping()) cipher_row.push_back(key.cipher_alphabet()->symbol(m));
    j["cipher"] = cipher_row;
    return j;
}

void cmd_solve(const SolveArgs& args) {
    const NgramModel model = NgramModel::load(args.model);
    const AlphabetRef cipher_alphabet = alphabet_by_name(args.cipher_alphabet);
    const std::vector<Sequence> sequences = read_sequence_file(args.cipher, cipher_alphabet);
    if (sequences.size() != 1) {
        throw Error("cipher file must contain exactly one sequence, found " +
                    std::to_string(sequences.size()));
    }
    const SolveResult result = solve(sequences[0], model, args.config);

    RunManifest manifest;
    manifest.command = "solve";
    manifest.param("cipher-alphabet", args.cipher_alphabet);
    manifest.param("iterations", args.config.iterations);
    manifest.param("restarts", args.config.restarts);
    manifest.param("seed", static_cast<long long>(args.config.seed));
    manifest.param("threads", args.config.threads);
    manifest.param("exact-rescore", args.config.exact_rescore ? "true" : "false");
    manifest.input(args.model);
    manifest.input(args.cipher);

    nlohmann::json j;
    j["best_log_prob"] = result.best_log_prob;
    j["plaintext"] = result.best_plaintext.render();
    j["key"] = key_json(result.best_key);
    nlohmann::json restarts = nlohmann::json::array();
    for (const RestartTrace& t : result.restarts) {
        restarts.push_back({{"restart", t.restart_index},
                            {"iterations", t.iterations_run},
                            {"final_log_prob", t.final_log_prob}});
    }
    j["restarts"] = restarts;
    j["manifest"] = manifest_json(manifest);

    std::ofstream out(args.out, std::ios::binary);
    if (!out) throw Error("cannot write output file: " + args.out);
    out << j.dump(2) << "\n";
    std::cout << "best_log_prob " << fixed(result.best_log_prob, 6) << "\n";
}

// ---- experiment ----------------------------------------------------------------

struct CorpusSpec {
    std::string label;
    std::string format;
    std::string path;
};

CorpusSpec parse_corpus_spec(const std::string& spec) {
    const auto first = spec.find(':');
    const auto second = first == std::string::npos ? std::string::npos : spec.find(':', first + 1);
    if (first == std::string::npos || second == std::string::npos || first == 0 ||
        second == first + 1 || second + 1 == spec.size()) {
        throw Error("corpus spec must be LABEL:FORMAT:PATH, got \"" + spec + "\"");
    }
    return CorpusSpec{spec.substr(0, first), spec.substr(first + 1, second - first - 1),
                      spec.substr(second + 1)};
}

struct ExperimentArgs {
    std::string mode;
    std::vector<std::string> corpora;
    int count = 300;
    int length = 87;
    int train_count = 0;     // 0 = use train_frac
    double train_frac = 0.8;
    std::string test_from = "heldout";
    int english_block = 870;
    SolverConfig config;
    std::string out;
};

CorpusSplit make_split(const ExperimentArgs& args, const CorpusSpec& spec,
                       std::vector<Sequence> sequences) {
    if (spec.format == "english") {
        std::vector<Sequence> blocks;
        for (const Sequence& s : sequences) {
            auto chopped = chop_blocks(s, args.english_block);
            blocks.insert(blocks.end(), chopped.begin(), chopped.end());
        }
        sequences = std::move(blocks);
    }
    if (sequences.size() < 2) {
        throw Error("corpus \"" + spec.label + "\" has " + std::to_string(sequences.size()) +
                    " sequences; need at least 2 to split");
    }
    int train_count = args.train_count;
    if (train_count <= 0) {
        train_count = static_cast<int>(std::lround(args.train_frac * static_cast<double>(sequences.size())));
        train_count = std::max(1, std::min<int>(train_count, static_cast<int>(sequences.size()) - 1));
    }
    return split_corpus(sequences, train_count, args.config.seed);
}

void cmd_experiment(const ExperimentArgs& args) {
    if (args.corpora.empty()) throw Error("experiment needs at least one --corpus LABEL:FORMAT:PATH");
    const TestPool pool = args.test_from == "train" ? TestPool::train : TestPool::heldout;

    RunManifest manifest;
    manifest.command = "experiment";
    manifest.param("mode", args.mode);
    manifest.param("count", args.count);
    manifest.param("length", args.length);
    manifest.param("train-count", args.train_count);
    manifest.param("train-frac", fixed(args.train_frac, 4));
    manifest.param("test-from", args.test_from);
    manifest.param("english-block", args.english_block);
    manifest.param("iterations", args.config.iterations);
    manifest.param("restarts", args.config.restarts);
    manifest.param("seed", static_cast<long long>(args.config.seed));
    manifest.param("threads", args.config.threads);

    std::string body = "mode: " + args.mode + "\n";
    std::string footer;

    for (const std::string& raw_spec : args.corpora) {
        const CorpusSpec spec = parse_corpus_spec(raw_spec);
        manifest.param("corpus", raw_spec);
        manifest.input(spec.path);

        const LoadedCorpus corpus = load_corpus(spec.format, {spec.path}, nullptr);
        const CorpusSplit split = make_split(args, spec, corpus.sequences);
        const NgramModel model = NgramModel::train(split.train, corpus.alphabet);

        if (args.mode == "decipherment") {
            const ExperimentReport report =
                run_experiment(split, model, args.count, args.length, args.config, pool);
            int solved = 0;
            for (const CipherTrial& t : report.trials) {
                body += "cipher " + spec.label + " " + std::to_string(t.id) + " key_acc " +
                        fixed(t.key_acc, 6) + " dec_acc " + fixed(t.dec_acc, 6) + " solved " +
                        (t.solved_exactly ? "1" : "0") + " best_log_prob " +
                        fixed(t.best_log_prob, 6) + "\n";
                solved += t.solved_exactly ? 1 : 0;
            }
            body += "summary " + spec.label + " ciphers " + std::to_string(report.trials.size()) +
                    " mean_key_acc " + pct(report.mean_key_acc) + " mean_dec_acc " +
                    pct(report.mean_dec_acc) + " solved " + std::to_string(solved) + "/" +
                    std::to_string(report.trials.size()) + "\n";
            footer += spec.label + " | " + pct(report.mean_key_acc) + " | " +
                      pct(report.mean_dec_acc) + "\n";
        } else if (args.mode == "perplexity") {
            const std::vector<Sequence>& source = pool == TestPool::heldout ? split.test : split.train;
            const std::vector<Sequence> excerpts =
                sample_excerpts(source, args.count, args.length, args.config.seed);
            double mean = 0.0;
            for (const Sequence& e : excerpts) {
                const Sequence* one = &e;
                mean += model.perplexity(std::span<const Sequence>(one, 1));
            }
            mean /= static_cast<double>(excerpts.size());
            body += "corpus " + spec.label + " excerpts " + std::to_string(excerpts.size()) +
                    " length " + std::to_string(args.length) + " avg_perplexity " + fixed(mean, 4) +
                    "\n";
            footer += spec.label + " | " + fixed(mean, 4) + "\n";
        } else {
            throw Error("unknown experiment mode \"" + args.mode + "\"");
        }
    }

    body += "results:\n";
    body += args.mode == "decipherment" ? "source | key_acc | dec_acc\n" : "source | avg_perplexity\n";
    body += footer;

    write_output(args.out, body, manifest);
    std::cout << "results:\n"
              << (args.mode == "decipherment" ? "source | key_acc | dec_acc\n" : "source | avg_perplexity\n")
              << footer;
}

// ---- dorabella -------------------------------------------------------------------

struct DorabellaArgs {
    std::string transcription;
    std::string model;
    SolverConfig config;
    std::string out;
    std::string abc_out;
};

void cmd_dorabella(const DorabellaArgs& args) {
    const std::string text = read_text_file(args.transcription);
    const Sequence ciphertext = parse_dorabella(text);
    if (ciphertext.size() != 87) {
        std::cerr << "warning: transcription has " << ciphertext.size()
                  << " tokens, expected 87; proceeding\n";
    }
    const NgramModel model = NgramModel::load(args.model);
    if (model.alphabet_size() != ciphertext.alphabet()->size()) {
        throw Error("model alphabet size " + std::to_string(model.alphabet_size()) +
                    " does not match the cipher alphabet size " +
                    std::to_string(ciphertext.alphabet()->size()));
    }

    const SolveResult result = solve(ciphertext, model, args.config);

    // Group the output tokens exactly like the transcription's lines.
    std::vector<std::size_t> line_token_counts;
    {
        std::istringstream lines(text);
        std::string line;
        while (std::getline(lines, line)) {
            std::istringstream words(line);
            std::string word;
            std::size_t n = 0;
            while (words >> word) ++n;
            if (n > 0) line_token_counts.push_back(n);
        }
    }
    std::string melody_block;
    std::size_t next = 0;
    for (std::size_t count : line_token_counts) {
        for (std::size_t i = 0; i < count && next < result.best_plaintext.size(); ++i, ++next) {
            if (i > 0) melody_block += ' ';
            melody_block += model.alphabet()->symbol(result.best_plaintext[next]);
        }
        melody_block += '\n';
    }

    RunManifest manifest;
    manifest.command = "dorabella";
    manifest.param("iterations", args.config.iterations);
    manifest.param("restarts", args.config.restarts);
    manifest.param("seed", static_cast<long long>(args.config.seed));
    manifest.param("threads", args.config.threads);
    manifest.input(args.transcription);
    manifest.input(args.model);

    const std::string abc = to_abc(result.best_plaintext, "Dorabella decipherment");

    std::string body;
    body += "decipherment:\n" + melody_block;
    body += "key:\n" + render_key(result.best_key);
    body += "log_prob: " + fixed(result.best_log_prob, 6) + "\n";
    body += "abc:\n" + abc;
    write_output(args.out, body, manifest);
    if (!args.abc_out.empty()) write_output(args.abc_out, abc, manifest, "% ");
    std::cout << melody_block;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"notecrack: character n-gram models over symbolic alphabets and a\n"
                 "restart-based hill-climbing solver for monoalphabetic substitution ciphers"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    app.footer(
        "File formats (blank lines and '#' lines are skipped everywhere):\n"
        "  sequence file  one sequence per line, space-separated symbols of the chosen\n"
        "                 alphabet (dorabella: A1..H3; melody: F3..E6 pitches like Bb4;\n"
        "                 pitch-duration: e.g. F#:quarter; english: a..z)\n"
        "  melody file    one melody per line, pitch names like 'C4 D4 Bb4'; off-alphabet\n"
        "                 pitches inside F3..E6 snap to the nearest member (ties down)\n"
        "  note file      header 'key: <pitch-class>', then '<midi-pitch> <duration>' per\n"
        "                 line, durations as rationals in whole notes (1/4 = quarter)\n"
        "  english file   raw UTF-8 text; non-letters dropped, letters lowercased\n"
        "  key file       two aligned rows: the plain alphabet in order, then the cipher\n"
        "                 symbol each plain symbol maps to\n"
        "  model file     'notecrack-lm v1' header, alphabet, discounts, sorted trigram\n"
        "                 counts ('^' is the start token)\n"
        "Every output file ends with a manifest block recording the command, parameters,\n"
        "seeds, and input digests; equal manifests reproduce outputs byte for byte.");

    // train
    TrainArgs train_args;
    auto* train = app.add_subcommand("train", "Train a trigram language model on a corpus");
    train->add_option("--format", train_args.format, "corpus format: melody|notes|english|seq")
        ->required()
        ->check(CLI::IsMember({"melody", "notes", "english", "seq"}));
    train->add_option("--in", train_args.inputs, "input file (repeatable)")->required();
    train->add_option("--out", train_args.out, "model output file")->required();
    train->add_option("--order", train_args.order, "model order (fixed at 3)");
    train->add_option("--alphabet", train_args.alphabet_name,
                      "alphabet name for --format seq: dorabella|melody|pitch-duration|english");

    // perplexity
    PerplexityArgs perplexity_args;
    auto* perplexity = app.add_subcommand("perplexity", "Corpus perplexity under a trained model");
    perplexity->add_option("--model", perplexity_args.model, "model file")->required();
    perplexity->add_option("--format", perplexity_args.format, "corpus format: melody|notes|english|seq")
        ->required()
        ->check(CLI::IsMember({"melody", "notes", "english", "seq"}));
    perplexity->add_option("--in", perplexity_args.inputs, "input file (repeatable)")->required();
    perplexity->add_option("--out", perplexity_args.out, "also write the result to a file");

    // encipher
    EncipherArgs encipher_args;
    auto* encipher_cmd = app.add_subcommand("encipher", "Apply a substitution key to sequences");
    encipher_cmd->add_option("--key", encipher_args.key_file, "key file (two aligned symbol rows)");
    auto* encipher_seed =
        encipher_cmd->add_option("--seed", encipher_args.seed, "draw a uniformly random key from this seed");
    encipher_cmd->add_option("--plain-alphabet", encipher_args.plain_name,
                             "plaintext alphabet: dorabella|melody|pitch-duration|english")
        ->required();
    encipher_cmd->add_option("--cipher-alphabet", encipher_args.cipher_name,
                             "ciphertext alphabet (default: same as plain)");
    encipher_cmd->add_option("--in", encipher_args.in, "sequence file to encipher")->required();
    encipher_cmd->add_option("--out", encipher_args.out, "output sequence file")->required();
    encipher_cmd->add_option("--emit-key", encipher_args.emit_key, "also write the key used");

    // solve
    SolveArgs solve_args;
    auto* solve_cmd = app.add_subcommand("solve", "Break a substitution cipher by hill climbing");
    solve_cmd->add_option("--model", solve_args.model, "model file")->required();
    solve_cmd->add_option("--cipher", solve_args.cipher, "cipher sequence file (one sequence)")->required();
    solve_cmd->add_option("--cipher-alphabet", solve_args.cipher_alphabet,
                          "cipher alphabet (default dorabella)");
    solve_cmd->add_option("--iterations", solve_args.config.iterations, "max accepted moves per restart")
        ->check(CLI::PositiveNumber);
    solve_cmd->add_option("--restarts", solve_args.config.restarts, "number of random restarts")
        ->check(CLI::PositiveNumber);
    solve_cmd->add_option("--seed", solve_args.config.seed, "RNG seed")->required();
    solve_cmd->add_option("--threads", solve_args.config.threads, "parallel restart workers")
        ->check(CLI::PositiveNumber);
    solve_cmd->add_flag("--exact-rescore", solve_args.config.exact_rescore,
                        "score every candidate from scratch (verification mode)");
    solve_cmd->add_option("--out", solve_args.out, "JSON report file")->required();

    // experiment
    ExperimentArgs experiment_args;
    auto* experiment = app.add_subcommand("experiment", "Synthetic decipherment / perplexity experiments");
    experiment->add_option("--mode", experiment_args.mode, "decipherment|perplexity")
        ->required()
        ->check(CLI::IsMember({"decipherment", "perplexity"}));
    experiment->add_option("--corpus", experiment_args.corpora, "corpus as LABEL:FORMAT:PATH (repeatable)")
        ->required();
    experiment->add_option("--count", experiment_args.count, "ciphers or excerpts per corpus")
        ->check(CLI::PositiveNumber);
    experiment->add_option("--length", experiment_args.length, "tokens per cipher/excerpt")
        ->check(CLI::PositiveNumber);
    experiment->add_option("--train-count", experiment_args.train_count,
                           "sequences in the training split (default: --train-frac)");
    experiment->add_option("--train-frac", experiment_args.train_frac,
                           "training fraction when --train-count is not given")
        ->check(CLI::Range(0.0, 1.0));
    experiment->add_option("--test-from", experiment_args.test_from, "heldout|train")
        ->check(CLI::IsMember({"heldout", "train"}));
    experiment->add_option("--english-block", experiment_args.english_block,
                           "block length when splitting english corpora")
        ->check(CLI::PositiveNumber);
    experiment->add_option("--iterations", experiment_args.config.iterations, "solver iterations")
        ->check(CLI::PositiveNumber);
    experiment->add_option("--restarts", experiment_args.config.restarts, "solver restarts")
        ->check(CLI::PositiveNumber);
    experiment->add_option("--seed", experiment_args.config.seed, "RNG seed")->required();
    experiment->add_option("--threads", experiment_args.config.threads, "parallel restart workers")
        ->check(CLI::PositiveNumber);
    experiment->add_option("--out", experiment_args.out, "report file")->required();

    // dorabella
    DorabellaArgs dorabella_args;
    auto* dorabella = app.add_subcommand("dorabella", "Decipher a transcription into a melody");
    dorabella->add_option("--transcription", dorabella_args.transcription,
                          "transcription file (tokens [A-H][1-3])")
        ->required();
    dorabella->add_option("--model", dorabella_args.model, "melody model file")->required();
    dorabella->add_option("--iterations", dorabella_args.config.iterations, "solver iterations")
        ->check(CLI::PositiveNumber);
    dorabella->add_option("--restarts", dorabella_args.config.restarts, "solver restarts")
        ->check(CLI::PositiveNumber);
    dorabella->add_option("--seed", dorabella_args.config.seed, "RNG seed")->required();
    dorabella->add_option("--threads", dorabella_args.config.threads, "parallel restart workers")
        ->check(CLI::PositiveNumber);
    dorabella->add_option("--out", dorabella_args.out, "melody report file")->required();
    dorabella->add_option("--abc-out", dorabella_args.abc_out, "also write a standalone ABC file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        encipher_args.seed_given = encipher_seed->count() > 0;
        if (train->parsed()) {
            cmd_train(train_args);
        } else if (perplexity->parsed()) {
            cmd_perplexity(perplexity_args);
        } else if (encipher_cmd->parsed()) {
            cmd_encipher(encipher_args);
        } else if (solve_cmd->parsed()) {
            cmd_solve(solve_args);
        } else if (experiment->parsed()) {
            cmd_experiment(experiment_args);
        } else if (dorabella->parsed()) {
            cmd_dorabella(dorabella_args);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}

}  // namespace notecrack::cli
