#pragma once

#include <cstdint>
#include <vector>

#include "notecrack/cipher.hpp"
#include "notecrack/corpus.hpp"
#include "notecrack/lm.hpp"
#include "notecrack/symbols.hpp"

namespace notecrack {

/// Hill-climbing search parameters. `iterations` caps the number of
/// accepted moves per restart; a restart also ends early at a strict local
/// optimum. Restarts draw independent per-restart seeds from `seed`, so
/// running them across `threads` workers cannot change any result.
/// `exact_rescore` forces every candidate to be scored from scratch instead
/// of by delta updates; both paths agree to well below 1e-9 and the slow
/// one exists for verification.
struct SolverConfig {
    int iterations = 4000;
    int restarts = 90;
    std::uint64_t seed = 0;
    int threads = 1;
    bool exact_rescore = false;
};

/// What one restart did. accepted_log_probs[0] is the initial key's score;
/// each further entry is the score after one accepted move, so the list is
/// strictly increasing. final_log_prob is the canonical model score of the
/// restart's final decipherment.
struct RestartTrace {
    int restart_index = 0;
    int iterations_run = 0;
    double final_log_prob = 0.0;
    std::vector<double> accepted_log_probs;
};

struct SolveResult {
    Sequence best_plaintext;
    Key best_key;  // encipher(best_key, best_plaintext) == ciphertext
    double best_log_prob = 0.0;
    std::vector<RestartTrace> restarts;
};

/// Breaks a monoalphabetic substitution cipher by steepest-ascent hill
/// climbing over keys, scored with the trigram model.
///
/// Each restart starts from a uniformly random key and repeatedly scores
/// every pairwise swap of the key mapping (V(V-1)/2 successors), moving to
/// the successor with the greatest score increase; ties pick the lowest
/// (i, j) swap pair. The restart halts at a local optimum or after
/// `iterations` accepted moves. The best decipherment across all restarts
/// is returned; ties between restarts pick the lowest restart index.
/// Fully deterministic for a given (ciphertext, model, config).
///
/// Throws Error when the alphabet sizes differ or the ciphertext is
/// shorter than the model order.
SolveResult solve(const Sequence& ciphertext, const NgramModel& model, const SolverConfig& config);

/// Fraction of alphabet positions where the two mappings agree, over the
/// full alphabet (symbols absent from any particular ciphertext included).
double key_accuracy(const Key& found, const Key& truth);

/// Fraction of positions with matching symbols. Throws Error on length or
/// alphabet mismatch, or on empty sequences.
double decipherment_accuracy(const Sequence& found_plaintext, const Sequence& true_plaintext);

/// Which pool of the split run_experiment samples plaintexts from.
enum class TestPool { heldout, train };

struct CipherTrial {
    int id = 0;
    double key_acc = 0.0;
    double dec_acc = 0.0;
    bool solved_exactly = false;
    double best_log_prob = 0.0;
};

struct ExperimentReport {
    std::vector<CipherTrial> trials;
    double mean_key_acc = 0.0;
    double mean_dec_acc = 0.0;
    double fraction_solved = 0.0;
    int cipher_length = 0;
};

/// Synthetic decipherment experiment: samples `cipher_count` plaintext
/// excerpts of `cipher_length` from the chosen pool, enciphers each with an
/// independent random key, solves each, and reports per-cipher and mean
/// key/decipherment accuracy plus the fraction of perfect decipherments.
/// Deterministic per config.seed.
ExperimentReport run_experiment(const CorpusSplit& split, const NgramModel& model, int cipher_count,
                                int cipher_length, const SolverConfig& config,
                                TestPool pool = TestPool::heldout);

}  // namespace notecrack
