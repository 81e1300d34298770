#include "notecrack/solver.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

#include "notecrack/rng.hpp"

namespace notecrack {

namespace {

// One distinct start-padded trigram of the ciphertext and how often it
// occurs. Scoring a key is then a sum over types instead of positions.
struct TrigramType {
    std::int32_t a, b, c;  // cipher indices; a, b may be the start index
    double count;
};

struct CipherStats {
    std::vector<TrigramType> types;
    // For each cipher symbol, the indices of the types it participates in
    // (sorted, unique). Swapping two symbols only disturbs these.
    std::vector<std::vector<std::int32_t>> touching;
    int symbol_count = 0;
};

CipherStats aggregate(const Sequence& ciphertext) {
    CipherStats stats;
    const int vc = ciphertext.alphabet()->size();
    const int start = vc;
    const std::size_t sc = static_cast<std::size_t>(vc) + 1;
    stats.symbol_count = vc;
    std::vector<std::uint32_t> dense(sc * sc * static_cast<std::size_t>(vc), 0);
    int a = start;
    int b = start;
    for (std::int32_t w : ciphertext.tokens()) {
        ++dense[(static_cast<std::size_t>(a) * sc + static_cast<std::size_t>(b)) *
                    static_cast<std::size_t>(vc) +
                static_cast<std::size_t>(w)];
        a = b;
        b = w;
    }
    stats.touching.resize(static_cast<std::size_t>(vc));
    for (std::size_t ai = 0; ai < sc; ++ai) {
        for (std::size_t bi = 0; bi < sc; ++bi) {
            for (int w = 0; w < vc; ++w) {
                const std::uint32_t c =
                    dense[(ai * sc + bi) * static_cast<std::size_t>(vc) + static_cast<std::size_t>(w)];
                if (c == 0) continue;
                const auto type_index = static_cast<std::int32_t>(stats.types.size());
                stats.types.push_back(TrigramType{static_cast<std::int32_t>(ai),
                                                  static_cast<std::int32_t>(bi),
                                                  static_cast<std::int32_t>(w),
                                                  static_cast<double>(c)});
                const std::int32_t symbols[3] = {static_cast<std::int32_t>(ai),
                                                 static_cast<std::int32_t>(bi),
                                                 static_cast<std::int32_t>(w)};
                for (int k = 0; k < 3; ++k) {
                    const std::int32_t sym = symbols[k];
                    if (sym >= vc) continue;  // the start marker never remaps
                    bool duplicate = false;
                    for (int j = 0; j < k; ++j) duplicate |= symbols[j] == sym;
                    if (!duplicate) stats.touching[static_cast<std::size_t>(sym)].push_back(type_index);
                }
            }
        }
    }
    return stats;
}

// Scores decipher mapping d (cipher index -> plain index, with
// d[start] == model start) against the model's ln-probability table.
class Scorer {
public:
    Scorer(const CipherStats& stats, const NgramModel& model)
        : stats_(stats),
          logp_(model.log_row(0, 0)),
          plain_stride_(static_cast<std::size_t>(model.alphabet_size()) + 1),
          plain_symbols_(static_cast<std::size_t>(model.alphabet_size())) {}

    double type_score(const TrigramType& t, const std::int32_t* d) const {
        const std::size_t a = static_cast<std::size_t>(d[t.a]);
        const std::size_t b = static_cast<std::size_t>(d[t.b]);
        const std::size_t c = static_cast<std::size_t>(d[t.c]);
        return t.count * logp_[(a * plain_stride_ + b) * plain_symbols_ + c];
    }

    double full_score(const std::int32_t* d) const {
        double sum = 0.0;
        for (const TrigramType& t : stats_.types) sum += type_score(t, d);
        return sum;
    }

    // Score change from swapping the images of cipher symbols p and q.
    // Walks the merged touching lists twice, before and after the swap.
    double swap_delta(std::int32_t* d, std::int32_t p, std::int32_t q,
                      std::vector<std::int32_t>& scratch) const {
        merge_touching(p, q, scratch);
        double before = 0.0;
        for (std::int32_t t : scratch) before += type_score(stats_.types[static_cast<std::size_t>(t)], d);
        std::swap(d[p], d[q]);
        double after = 0.0;
        for (std::int32_t t : scratch) after += type_score(stats_.types[static_cast<std::size_t>(t)], d);
        std::swap(d[p], d[q]);
        return after - before;
    }

    // Full rescore of the swapped mapping; the verification path.
    double swapped_full_score(std::int32_t* d, std::int32_t p, std::int32_t q) const {
        std::swap(d[p], d[q]);
        const double score = full_score(d);
        std::swap(d[p], d[q]);
        return score;
    }

private:
    void merge_touching(std::int32_t p, std::int32_t q, std::vector<std::int32_t>& out) const {
        const auto& lp = stats_.touching[static_cast<std::size_t>(p)];
        const auto& lq = stats_.touching[static_cast<std::size_t>(q)];
        out.clear();
        std::size_t i = 0, j = 0;
        while (i < lp.size() && j < lq.size()) {
            if (lp[i] < lq[j]) {
                out.push_back(lp[i++]);
            } else if (lq[j] < lp[i]) {
                out.push_back(lq[j++]);
            } else {
                out.push_back(lp[i]);
                ++i;
                ++j;
            }
        }
        out.insert(out.end(), lp.begin() + static_cast<std::ptrdiff_t>(i), lp.end());
        out.insert(out.end(), lq.begin() + static_cast<std::ptrdiff_t>(j), lq.end());
    }

    const CipherStats& stats_;
    const double* logp_;
    std::size_t plain_stride_;
    std::size_t plain_symbols_;
};

struct RestartOutcome {
    RestartTrace trace;
    std::vector<std::int32_t> plain_to_cipher;  // the key mapping found
};

RestartOutcome run_restart(int restart_index, const CipherStats& stats, const Scorer& scorer,
                           const Sequence& ciphertext, const NgramModel& model,
                           const SolverConfig& config) {
    const int v = stats.symbol_count;

    // d: cipher -> plain, one extra slot pinning start to start.
    std::vector<std::int32_t> d(static_cast<std::size_t>(v) + 1);
    std::iota(d.begin(), d.end() - 1, 0);
    d[static_cast<std::size_t>(v)] = model.start_index();
    Rng rng(mix_seed(config.seed, /*tag=*/0x726573ULL, static_cast<std::uint64_t>(restart_index)));
    rng.shuffle(std::span<std::int32_t>(d.data(), static_cast<std::size_t>(v)));

    // m: plain -> cipher, kept inverse to d throughout.
    std::vector<std::int32_t> m(static_cast<std::size_t>(v));
    for (int c = 0; c < v; ++c) m[static_cast<std::size_t>(d[static_cast<std::size_t>(c)])] = c;

    std::vector<std::int32_t> scratch;
    scratch.reserve(stats.types.size());

    double score = scorer.full_score(d.data());
    RestartOutcome outcome;
    outcome.trace.restart_index = restart_index;
    outcome.trace.accepted_log_probs.push_back(score);

    for (int iter = 0; iter < config.iterations; ++iter) {
        double best_score = score;
        int best_i = -1;
        int best_j = -1;
        // Swapping key entries (i, j) exchanges the cipher images of plain
        // symbols i and j, i.e. swaps d at positions m[i] and m[j].
        for (int i = 0; i < v - 1; ++i) {
            for (int j = i + 1; j < v; ++j) {
                const std::int32_t p = m[static_cast<std::size_t>(i)];
                const std::int32_t q = m[static_cast<std::size_t>(j)];
                const double candidate =
                    config.exact_rescore ? scorer.swapped_full_score(d.data(), p, q)
                                         : score + scorer.swap_delta(d.data(), p, q, scratch);
                if (candidate > best_score) {
                    best_score = candidate;
                    best_i = i;
                    best_j = j;
                }
            }
        }
        if (best_i < 0) break;  // strict local optimum
        std::swap(d[static_cast<std::size_t>(m[static_cast<std::size_t>(best_i)])],
                  d[static_cast<std::size_t>(m[static_cast<std::size_t>(best_j)])]);
        std::swap(m[static_cast<std::size_t>(best_i)], m[static_cast<std::size_t>(best_j)]);
        score = best_score;
        outcome.trace.accepted_log_probs.push_back(score);
    }

    outcome.trace.iterations_run =
        static_cast<int>(outcome.trace.accepted_log_probs.size()) - 1;

    // Canonical final score: decipher and run the model's own scorer, so
    // the reported numbers are independent of the fast-path arithmetic.
    std::vector<std::int32_t> plain_tokens;
    plain_tokens.reserve(ciphertext.size());
    for (std::int32_t t : ciphertext.tokens()) plain_tokens.push_back(d[static_cast<std::size_t>(t)]);
    const Sequence plaintext(model.alphabet(), std::move(plain_tokens));
    outcome.trace.final_log_prob = model.log_prob(plaintext);
    outcome.plain_to_cipher = std::move(m);
    return outcome;
}

}  // namespace

SolveResult solve(const Sequence& ciphertext, const NgramModel& model, const SolverConfig& config) {
    if (ciphertext.alphabet()->size() != model.alphabet_size()) {
        throw Error("solve: ciphertext alphabet size " + std::to_string(ciphertext.alphabet()->size()) +
                    " does not match model alphabet size " + std::to_string(model.alphabet_size()));
    }
    if (ciphertext.size() < static_cast<std::size_t>(NgramModel::kOrder)) {
        throw Error("solve: ciphertext has " + std::to_string(ciphertext.size()) +
                    " tokens, shorter than the model order " + std::to_string(NgramModel::kOrder));
    }
    if (config.iterations < 1 || config.restarts < 1) {
        throw Error("solve: iterations and restarts must be >= 1");
    }

    const CipherStats stats = aggregate(ciphertext);
    const Scorer scorer(stats, model);

    std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(config.restarts));
    const int threads = std::max(1, config.threads);
    if (threads == 1) {
        for (int r = 0; r < config.restarts; ++r) {
            outcomes[static_cast<std::size_t>(r)] = run_restart(r, stats, scorer, ciphertext, model, config);
        }
    } else {
        std::vector<std::thread> workers;
        workers.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) {
            workers.emplace_back([&, t] {
                for (int r = t; r < config.restarts; r += threads) {
                    outcomes[static_cast<std::size_t>(r)] =
                        run_restart(r, stats, scorer, ciphertext, model, config);
                }
            });
        }
        for (std::thread& w : workers) w.join();
    }

    // Reduce by final score; ties pick the lowest restart index.
    std::size_t best = 0;
    for (std::size_t r = 1; r < outcomes.size(); ++r) {
        if (outcomes[r].trace.final_log_prob > outcomes[best].trace.final_log_prob) best = r;
    }

    Key best_key(model.alphabet(), ciphertext.alphabet(), outcomes[best].plain_to_cipher);
    Sequence best_plaintext = decipher(best_key, ciphertext);
    const double best_log_prob = outcomes[best].trace.final_log_prob;

    SolveResult result{std::move(best_plaintext), std::move(best_key), best_log_prob, {}};
    result.restarts.reserve(outcomes.size());
    for (RestartOutcome& o : outcomes) result.restarts.push_back(std::move(o.trace));
    return result;
}

double key_accuracy(const Key& found, const Key& truth) {
    if (!same_alphabet(found.plain_alphabet(), truth.plain_alphabet()) ||
        !same_alphabet(found.cipher_alphabet(), truth.cipher_alphabet())) {
        throw Error("key_accuracy: keys are over different alphabets");
    }
    const auto a = found.mapping();
    const auto b = truth.mapping();
    std::size_t matches = 0;
    for (std::size_t i = 0; i < a.size(); ++i) matches += a[i] == b[i];
    return static_cast<double>(matches) / static_cast<double>(a.size());
}

double decipherment_accuracy(const Sequence& found_plaintext, const Sequence& true_plaintext) {
    if (!same_alphabet(found_plaintext.alphabet(), true_plaintext.alphabet())) {
        throw Error("decipherment_accuracy: sequences are over different alphabets");
    }
    if (found_plaintext.size() != true_plaintext.size()) {
        throw Error("decipherment_accuracy: length mismatch, " + std::to_string(found_plaintext.size()) +
                    " vs " + std::to_string(true_plaintext.size()));
    }
    if (found_plaintext.empty()) throw Error("decipherment_accuracy: empty sequences");
    std::size_t matches = 0;
    for (std::size_t i = 0; i < found_plaintext.size(); ++i) {
        matches += found_plaintext[i] == true_plaintext[i];
    }
    return static_cast<double>(matches) / static_cast<double>(found_plaintext.size());
}

ExperimentReport run_experiment(const CorpusSplit& split, const NgramModel& model, int cipher_count,
                                int cipher_length, const SolverConfig& config, TestPool pool) {
    const std::vector<Sequence>& source = pool == TestPool::heldout ? split.test : split.train;
    const std::vector<Sequence> plaintexts =
        sample_excerpts(source, cipher_count, cipher_length, mix_seed(config.seed, /*tag=*/0x657870ULL));

    ExperimentReport report;
    report.cipher_length = cipher_length;
    report.trials.reserve(plaintexts.size());
    for (std::size_t i = 0; i < plaintexts.size(); ++i) {
        const Sequence& plaintext = plaintexts[i];
        const Key truth = random_key(model.alphabet(), model.alphabet(),
                                     mix_seed(config.seed, /*tag=*/0x74727574ULL, i));
        const Sequence ciphertext = encipher(truth, plaintext);
        SolverConfig per_cipher = config;
        per_cipher.seed = mix_seed(config.seed, /*tag=*/0x736f6cULL, i);
        const SolveResult result = solve(ciphertext, model, per_cipher);

        CipherTrial trial;
        trial.id = static_cast<int>(i);
        trial.key_acc = key_accuracy(result.best_key, truth);
        trial.dec_acc = decipherment_accuracy(result.best_plaintext, plaintext);
        trial.solved_exactly = trial.dec_acc == 1.0;
        trial.best_log_prob = result.best_log_prob;
        report.trials.push_back(trial);

        report.mean_key_acc += trial.key_acc;
        report.mean_dec_acc += trial.dec_acc;
        report.fraction_solved += trial.solved_exactly ? 1.0 : 0.0;
    }
    const double n = static_cast<double>(report.trials.size());
    report.mean_key_acc /= n;
    report.mean_dec_acc /= n;
    report.fraction_solved /= n;
    return report;
}

}  // namespace notecrack
