// Acceptance suite: every toolkit-level guarantee as one numbered check
// with a pass/fail line. Run with no arguments for the full suite or with
// a single number to run one check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "notecrack/abc.hpp"
#include "notecrack/cipher.hpp"
#include "notecrack/corpus.hpp"
#include "notecrack/lm.hpp"
#include "notecrack/solver.hpp"
#include "notecrack/symbols.hpp"
#include "support.hpp"

using namespace notecrack;
using testsupport::fixture;
using testsupport::run_cli;
using testsupport::slurp;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool condition, const std::string& message) {
        if (!condition) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += message;
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v, int precision = 3) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.*f", precision, v);
    return buffer;
}

// ---- 1: roundtrip law -------------------------------------------------------

Outcome criterion_roundtrip() {
    Outcome outcome;
    const auto melody = melody_alphabet();
    const auto start = std::chrono::steady_clock::now();
    for (int trial = 0; trial < 1000; ++trial) {
        const Key key = random_key(melody, static_cast<std::uint64_t>(trial));
        const Sequence x = testsupport::random_sequence(melody, 1 + trial % 150, 4000 + trial);
        const Sequence roundtrip = decipher(key, encipher(key, x));
        if (!(roundtrip == x)) {
            outcome.require(false, "roundtrip mismatch at trial " + std::to_string(trial));
            break;
        }
    }
    const double elapsed = seconds_since(start);
    outcome.require(elapsed < 1.0, "took " + fmt(elapsed) + "s, limit 1s");
    outcome.detail += "1000 random key/sequence pairs, " + fmt(elapsed) + "s";
    return outcome;
}

// ---- 2: language-model normalization ---------------------------------------

Outcome criterion_normalization() {
    Outcome outcome;
    const Sequence text = read_english_file(fixture("english_corpus.txt"));
    outcome.require(text.size() >= 10000,
                    "fixture has " + std::to_string(text.size()) + " tokens, need >= 10000");
    const auto start = std::chrono::steady_clock::now();
    const std::vector<Sequence> corpus = {text};
    const NgramModel model = NgramModel::train(corpus, english_alphabet());
    const int v = model.alphabet_size();
    Rng rng(987654321);
    double worst = 0.0;
    for (int probe = 0; probe < 100; ++probe) {
        const int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(v + 1)));
        const int b = static_cast<int>(rng.below(static_cast<std::uint64_t>(v + 1)));
        double sum = 0.0;
        for (int w = 0; w < v; ++w) sum += model.prob(a, b, w);
        worst = std::max(worst, std::abs(sum - 1.0));
    }
    const double elapsed = seconds_since(start);
    outcome.require(worst <= 1e-9, "worst |sum-1| = " + fmt(worst, 12));
    outcome.require(elapsed < 1.0, "took " + fmt(elapsed) + "s, limit 1s");
    outcome.detail += std::to_string(text.size()) + " tokens, worst |sum-1| = " + fmt(worst, 12) +
                      ", " + fmt(elapsed) + "s";
    return outcome;
}

// ---- 3: uniform-model perplexity -------------------------------------------

Outcome criterion_uniform_perplexity() {
    Outcome outcome;
    const std::vector<AlphabetRef> alphabets = {make_alphabet({"a", "b"}, "ab"), melody_alphabet(),
                                                english_alphabet()};
    for (const AlphabetRef& alphabet : alphabets) {
        const NgramModel model = NgramModel::uniform(alphabet);
        const std::vector<Sequence> sequences = {
            testsupport::random_sequence(alphabet, 97, 1),
            testsupport::random_sequence(alphabet, 41, 2),
        };
        const double ppx = model.perplexity(sequences);
        const double v = static_cast<double>(alphabet->size());
        outcome.require(std::abs(ppx - v) <= 1e-9,
                        "V=" + std::to_string(alphabet->size()) + " gave " + fmt(ppx, 12));
        outcome.detail += "V=" + std::to_string(alphabet->size()) + " -> " + fmt(ppx, 9) + "  ";
    }
    return outcome;
}

// ---- 4 and 5: oracle equivalence, monotone traces --------------------------

struct OracleRuns {
    std::vector<SolveResult> results;
    int matches = 0;
    double elapsed = 0.0;
};

const OracleRuns& oracle_runs() {
    static const OracleRuns runs = [] {
        OracleRuns r;
        const auto wxyz = make_alphabet({"w", "x", "y", "z"}, "wxyz");
        const auto corpus = testsupport::cycle_corpus(wxyz, 30, 100, 8);
        const NgramModel model = NgramModel::train(corpus, wxyz);
        const auto start = std::chrono::steady_clock::now();
        for (int instance = 0; instance < 20; ++instance) {
            const auto fresh =
                testsupport::cycle_corpus(wxyz, 1, 200, 5000 + static_cast<std::uint64_t>(instance));
            const Key truth = random_key(wxyz, 700 + static_cast<std::uint64_t>(instance));
            const Sequence ciphertext = encipher(truth, fresh[0]);

            SolverConfig config;
            config.iterations = 4000;
            config.restarts = 50;
            config.seed = 1000 + static_cast<std::uint64_t>(instance);
            SolveResult result = solve(ciphertext, model, config);

            // exhaustive oracle over all 4! keys
            std::vector<std::int32_t> mapping(4);
            std::iota(mapping.begin(), mapping.end(), 0);
            double oracle = -std::numeric_limits<double>::infinity();
            do {
                std::vector<std::int32_t> plain;
                plain.reserve(ciphertext.size());
                for (std::int32_t t : ciphertext.tokens()) plain.push_back(mapping[static_cast<std::size_t>(t)]);
                oracle = std::max(oracle, model.log_prob(Sequence(model.alphabet(), std::move(plain))));
            } while (std::next_permutation(mapping.begin(), mapping.end()));

            if (std::abs(result.best_log_prob - oracle) <= 1e-9) ++r.matches;
            r.results.push_back(std::move(result));
        }
        r.elapsed = seconds_since(start);
        return r;
    }();
    return runs;
}

Outcome criterion_oracle_equivalence() {
    Outcome outcome;
    const OracleRuns& runs = oracle_runs();
    outcome.require(runs.matches == 20,
                    std::to_string(runs.matches) + "/20 instances matched the exhaustive optimum");
    outcome.require(runs.elapsed < 30.0, "took " + fmt(runs.elapsed) + "s, limit 30s");
    outcome.detail += std::to_string(runs.matches) + "/20 exhaustive matches, " + fmt(runs.elapsed) + "s";
    return outcome;
}

Outcome criterion_monotonicity() {
    Outcome outcome;
    int traces = 0;
    for (const SolveResult& result : oracle_runs().results) {
        for (const RestartTrace& trace : result.restarts) {
            ++traces;
            for (std::size_t i = 1; i < trace.accepted_log_probs.size(); ++i) {
                if (!(trace.accepted_log_probs[i] > trace.accepted_log_probs[i - 1])) {
                    outcome.require(false, "non-increasing accepted score in restart " +
                                               std::to_string(trace.restart_index));
                }
            }
        }
    }
    outcome.detail += std::to_string(traces) + " restart traces strictly increasing";
    return outcome;
}

// ---- 6: accuracy gap between low- and high-entropy corpora ------------------

struct CorpusRun {
    double bits = 0.0;
    double mean_dec = 0.0;
    double mean_key = 0.0;
};

CorpusRun run_corpus(const std::string& file, std::uint64_t seed) {
    const auto melodies = read_melody_file(fixture(file));
    const CorpusSplit split = split_corpus(melodies, 240, 1);
    const NgramModel model = NgramModel::train(split.train, melody_alphabet());

    const auto excerpts = sample_excerpts(split.test, 100, 87, 2);
    CorpusRun run;
    run.bits = std::log2(model.perplexity(excerpts));

    SolverConfig config;
    config.iterations = 4000;
    config.restarts = 90;
    config.seed = seed;
    config.threads = 2;
    const ExperimentReport report = run_experiment(split, model, 30, 87, config);
    run.mean_dec = report.mean_dec_acc;
    run.mean_key = report.mean_key_acc;
    return run;
}

Outcome criterion_accuracy_gap() {
    Outcome outcome;
    const auto start = std::chrono::steady_clock::now();
    const CorpusRun low = run_corpus("melody_corpus.txt", 11);
    const CorpusRun high = run_corpus("noise_corpus.txt", 11);
    const double elapsed = seconds_since(start);

    outcome.require(low.bits >= 2.0 && low.bits <= 3.0,
                    "low-entropy corpus measured " + fmt(low.bits, 2) + " bits/token");
    outcome.require(high.bits >= 4.2 && high.bits <= 4.6,
                    "high-entropy corpus measured " + fmt(high.bits, 2) + " bits/token");
    outcome.require(low.mean_dec > high.mean_dec, "low-entropy accuracy is not higher");
    const double gap = low.mean_dec - high.mean_dec;
    outcome.require(gap >= 0.15, "gap " + fmt(gap * 100, 1) + " points, need >= 15");
    outcome.require(elapsed < 600.0, "took " + fmt(elapsed) + "s, limit 600s");
    outcome.detail += "dec acc " + fmt(low.mean_dec * 100, 1) + "% (" + fmt(low.bits, 2) +
                      " bits) vs " + fmt(high.mean_dec * 100, 1) + "% (" + fmt(high.bits, 2) +
                      " bits), gap " + fmt(gap * 100, 1) + " points, " + fmt(elapsed) + "s";
    return outcome;
}

// ---- 7: held-out perplexity ordering ----------------------------------------

Outcome criterion_perplexity_ordering() {
    Outcome outcome;

    const auto melodies = read_melody_file(fixture("melody_corpus.txt"));
    const CorpusSplit melody_split = split_corpus(melodies, 240, 3);
    const NgramModel melody_model = NgramModel::train(melody_split.train, melody_alphabet());
    const auto melody_excerpts = sample_excerpts(melody_split.test, 100, 87, 4);
    const double melody_ppx = melody_model.perplexity(melody_excerpts);

    const Sequence english = read_english_file(fixture("english_corpus.txt"));
    std::vector<Sequence> blocks;
    for (std::size_t startpos = 0; startpos + 870 <= english.size(); startpos += 870) {
        blocks.emplace_back(english.alphabet(),
                            std::vector<std::int32_t>(english.tokens().begin() + static_cast<std::ptrdiff_t>(startpos),
                                                      english.tokens().begin() + static_cast<std::ptrdiff_t>(startpos) + 870));
    }
    const CorpusSplit english_split = split_corpus(blocks, static_cast<int>(blocks.size()) - 3, 3);
    const NgramModel english_model = NgramModel::train(english_split.train, english_alphabet());
    const auto english_excerpts = sample_excerpts(english_split.test, 50, 87, 4);
    const double english_ppx = english_model.perplexity(english_excerpts);

    outcome.require(melody_ppx < english_ppx, "ordering violated");
    outcome.detail += "melody " + fmt(melody_ppx, 4) + " < english " + fmt(english_ppx, 4);
    return outcome;
}

// ---- 8: dorabella pipeline ---------------------------------------------------

Outcome criterion_dorabella_pipeline() {
    Outcome outcome;
    const auto dir = testsupport::make_temp_dir();

    // melody model over the shipped corpus
    const auto melodies = read_melody_file(fixture("melody_corpus.txt"));
    const NgramModel model = NgramModel::train(melodies, melody_alphabet());
    const auto model_path = dir / "melody.model";
    model.save(model_path);

    // end-to-end CLI run, twice, byte-identical
    const auto report_a = dir / "report_a.txt";
    const auto report_b = dir / "report_b.txt";
    const auto abc_path = dir / "melody.abc";
    for (const auto& [report, abc] :
         {std::pair{report_a, abc_path}, std::pair{report_b, dir / "b.abc"}}) {
        const auto result =
            run_cli({"dorabella", "--transcription", fixture("dorabella.txt").string(), "--model",
                     model_path.string(), "--seed", "123", "--out", report.string(), "--abc-out",
                     abc.string()});
        outcome.require(result.exit_code == 0, "dorabella exited " + std::to_string(result.exit_code));
    }
    const std::string report = slurp(report_a);
    outcome.require(!report.empty() && report == slurp(report_b), "reports are not byte-identical");

    // 87 tokens over the melody alphabet
    const auto start = report.find("decipherment:\n");
    const auto end = report.find("key:\n");
    outcome.require(start != std::string::npos && end != std::string::npos, "report sections missing");
    if (outcome.pass) {
        std::istringstream tokens(report.substr(start + 14, end - start - 14));
        std::string tok;
        int count = 0;
        bool all_melody = true;
        while (tokens >> tok) {
            all_melody = all_melody && melody_alphabet()->index_of(tok).has_value();
            ++count;
        }
        outcome.require(count == 87, "expected 87 output tokens, got " + std::to_string(count));
        outcome.require(all_melody, "output tokens outside the melody alphabet");
    }

    // valid ABC header and body
    const std::string abc = slurp(abc_path);
    outcome.require(abc.rfind("X:1\n", 0) == 0, "abc missing X header");
    for (const char* field : {"M:4/4\n", "L:1/4\n", "K:C\n"}) {
        outcome.require(abc.find(field) != std::string::npos, std::string("abc missing ") + field);
    }
    outcome.require(abc.find("|]") != std::string::npos, "abc missing final bar");

    // applying the key reconstructed from the transcription/decipherment
    // alignment reproduces the reference decipherment token-for-token
    const Sequence cipher = parse_dorabella(read_text_file(fixture("dorabella.txt")));
    const auto reference = read_melody_file(fixture("dorabella_melody.txt"));
    Sequence flat_reference(melody_alphabet(), [&] {
        std::vector<std::int32_t> all;
        for (const Sequence& line : reference) {
            all.insert(all.end(), line.tokens().begin(), line.tokens().end());
        }
        return all;
    }());
    outcome.require(flat_reference.size() == cipher.size(), "fixture length mismatch");
    std::vector<std::int32_t> mapping(24, -1);
    bool consistent = true;
    for (std::size_t i = 0; i < cipher.size(); ++i) {
        const std::int32_t plain = flat_reference[i];
        const std::int32_t ct = cipher[i];
        if (mapping[static_cast<std::size_t>(plain)] == -1) {
            mapping[static_cast<std::size_t>(plain)] = ct;
        } else if (mapping[static_cast<std::size_t>(plain)] != ct) {
            consistent = false;
        }
    }
    outcome.require(consistent, "alignment is not a function");
    // complete the bijection over the unused symbols in order
    std::vector<bool> used(24, false);
    for (std::int32_t ct : mapping) {
        if (ct >= 0) used[static_cast<std::size_t>(ct)] = true;
    }
    std::int32_t next_free = 0;
    for (std::int32_t& ct : mapping) {
        if (ct >= 0) continue;
        while (used[static_cast<std::size_t>(next_free)]) ++next_free;
        ct = next_free;
        used[static_cast<std::size_t>(next_free)] = true;
    }
    const Key aligned(melody_alphabet(), dorabella_alphabet(), mapping);
    outcome.require(decipher(aligned, cipher) == flat_reference,
                    "key application does not reproduce the reference decipherment");
    outcome.require(encipher(aligned, flat_reference) == cipher,
                    "key application does not reproduce the transcription");

    if (outcome.pass) outcome.detail = "87 tokens, valid ABC, deterministic, key-application exact";
    std::filesystem::remove_all(dir);
    return outcome;
}

// ---- 9: byte-identical reruns ------------------------------------------------

Outcome criterion_determinism() {
    Outcome outcome;
    const auto dir = testsupport::make_temp_dir();

    const auto melodies = read_melody_file(fixture("melody_corpus.txt"));
    const NgramModel model = NgramModel::train(melodies, melody_alphabet());
    const auto model_path = dir / "melody.model";
    model.save(model_path);

    const auto cipher_path = dir / "cipher.txt";
    {
        const Sequence plaintext = sample_excerpts(melodies, 1, 87, 40)[0];
        const Sequence ciphertext =
            encipher(random_key(melody_alphabet(), dorabella_alphabet(), 41), plaintext);
        std::ofstream out(cipher_path);
        out << ciphertext.render() << "\n";
    }

    const auto rerun = [&](const std::string& name, const std::vector<std::string>& base_args) {
        const auto out_a = dir / (name + "_a.txt");
        const auto out_b = dir / (name + "_b.txt");
        for (const auto& out : {out_a, out_b}) {
            auto args = base_args;
            args.push_back("--out");
            args.push_back(out.string());
            const auto result = run_cli(args);
            outcome.require(result.exit_code == 0,
                            name + " exited " + std::to_string(result.exit_code));
        }
        const std::string a = slurp(out_a);
        outcome.require(!a.empty() && a == slurp(out_b), name + " outputs differ between runs");
    };

    rerun("experiment_decipherment",
          {"experiment", "--mode", "decipherment", "--corpus",
           "low:melody:" + fixture("melody_corpus.txt").string(), "--corpus",
           "high:melody:" + fixture("noise_corpus.txt").string(), "--count", "4", "--length", "87",
           "--iterations", "400", "--restarts", "8", "--seed", "5", "--threads", "2"});
    rerun("experiment_perplexity",
          {"experiment", "--mode", "perplexity", "--corpus",
           "low:melody:" + fixture("melody_corpus.txt").string(), "--corpus",
           "english:english:" + fixture("english_corpus.txt").string(), "--count", "20", "--length",
           "87", "--seed", "6"});
    rerun("solve", {"solve", "--model", model_path.string(), "--cipher", cipher_path.string(),
                    "--cipher-alphabet", "dorabella", "--restarts", "8", "--seed", "7", "--threads",
                    "2"});
    rerun("dorabella", {"dorabella", "--transcription", fixture("dorabella.txt").string(), "--model",
                        model_path.string(), "--restarts", "12", "--seed", "8", "--threads", "2"});

    if (outcome.pass) outcome.detail = "4 commands, 2 runs each, byte-identical (threads=2 included)";
    std::filesystem::remove_all(dir);
    return outcome;
}

struct Criterion {
    int number;
    const char* name;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria = {
        {1, "cipher-roundtrip-law", criterion_roundtrip},
        {2, "lm-normalization", criterion_normalization},
        {3, "uniform-model-perplexity", criterion_uniform_perplexity},
        {4, "solver-oracle-equivalence", criterion_oracle_equivalence},
        {5, "hill-climb-monotonicity", criterion_monotonicity},
        {6, "entropy-accuracy-gap", criterion_accuracy_gap},
        {7, "heldout-perplexity-ordering", criterion_perplexity_ordering},
        {8, "dorabella-pipeline", criterion_dorabella_pipeline},
        {9, "run-determinism", criterion_determinism},
    };

    std::optional<int> only;
    if (argc > 1) only = std::atoi(argv[1]);

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        if (only && *only != criterion.number) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = criterion.run();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.detail = std::string("exception: ") + e.what();
        }
        const double elapsed = seconds_since(start);
        std::printf("[%s] %d %s (%.2fs)%s%s\n", outcome.pass ? "PASS" : "FAIL", criterion.number,
                    criterion.name, elapsed, outcome.detail.empty() ? "" : " - ",
                    outcome.detail.c_str());
        std::fflush(stdout);
        failures += outcome.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
