#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "notecrack/symbols.hpp"

namespace notecrack {

/// Per-order discount triple of modified Kneser-Ney smoothing: d1 applies
/// to counts of 1, d2 to counts of 2, d3 to counts of 3 and above.
struct Discounts {
    double d1 = 0.5;
    double d2 = 0.5;
    double d3 = 0.5;
};

/// Trigram character language model with interpolated modified Kneser-Ney
/// smoothing.
///
/// Each training sequence is padded with two start tokens in front (no end
/// token), so the first real token is predicted from the context
/// (start, start). Lower orders are estimated from continuation counts and
/// the unigram level interpolates with the uniform distribution 1/V, which
/// keeps every probability strictly positive. For every context, the
/// conditional distribution over the alphabet sums to 1.
///
/// Discounts are estimated per order from the count-of-counts closed form
///     Y = n1 / (n1 + 2 n2),   Dk = k - (k+1) Y n_{k+1} / n_k
/// and fall back to absolute discounting with D = 0.5 at an order where the
/// form is undefined (n1, n2 or n3 zero) or leaves its valid range
/// (0 < Dk < k).
///
/// A trained model is immutable and may be queried from many threads.
class NgramModel {
public:
    static constexpr int kOrder = 3;

    /// Trains on the given corpus. Discounts are estimated per order unless
    /// `fixed_discounts` is supplied. Throws Error on an empty corpus
    /// (fewer than 3 tokens in total) or an alphabet mismatch.
    static NgramModel train(std::span<const Sequence> sequences, AlphabetRef alphabet,
                            std::optional<std::array<Discounts, 3>> fixed_discounts = std::nullopt);

    /// The uniform model: P(s|h) = 1/V for every context.
    static NgramModel uniform(AlphabetRef alphabet);

    const AlphabetRef& alphabet() const noexcept { return alphabet_; }
    int alphabet_size() const noexcept { return symbol_count_; }

    /// Index used for the start padding token in context positions.
    int start_index() const noexcept { return symbol_count_; }

    /// Discounts in effect, indexed by order-1 (so [2] is the trigram level).
    const std::array<Discounts, 3>& discounts() const noexcept { return discounts_; }

    /// P(w | a, b). Contexts may contain start_index(); w may not.
    double prob(int a, int b, int w) const { return prob_[table_index(a, b, w)]; }

    /// ln P(w | a, b).
    double log_prob_token(int a, int b, int w) const { return logp_[table_index(a, b, w)]; }

    /// Natural-log probability of the whole sequence with start padding.
    /// Strictly negative and always finite. Throws Error on an empty
    /// sequence or one over a different alphabet.
    double log_prob(const Sequence& sequence) const;

    /// exp(-sum(log_prob) / N) over all sequences, N = total token count.
    /// Uniform model over V symbols scores exactly V. Throws Error when the
    /// input is empty.
    double perplexity(std::span<const Sequence> sequences) const;

    /// Direct access to the ln-probability table for hot scoring loops.
    /// Row (a, b) holds V contiguous entries, w = 0..V-1.
    const double* log_row(int a, int b) const {
        return logp_.data() + (static_cast<std::size_t>(a) * stride_ + static_cast<std::size_t>(b)) *
                                  static_cast<std::size_t>(symbol_count_);
    }

    std::uint64_t trigram_count(int a, int b, int w) const { return counts_[table_index(a, b, w)]; }
    std::uint64_t total_tokens() const noexcept { return total_tokens_; }

    /// Versioned text serialization: header with alphabet and discounts,
    /// then sorted trigram count lines (start token spelled "^").
    void save(std::ostream& out) const;
    void save(const std::filesystem::path& path) const;
    static NgramModel load(std::istream& in);
    static NgramModel load(const std::filesystem::path& path);

private:
    explicit NgramModel(AlphabetRef alphabet);

    std::size_t table_index(int a, int b, int w) const {
        return (static_cast<std::size_t>(a) * stride_ + static_cast<std::size_t>(b)) *
                   static_cast<std::size_t>(symbol_count_) +
               static_cast<std::size_t>(w);
    }

    void count_sequence(const Sequence& sequence);
    void rebuild_tables(bool estimate);

    AlphabetRef alphabet_;
    int symbol_count_ = 0;
    std::size_t stride_ = 0;  // symbol_count_ + 1, contexts include the start token
    std::array<Discounts, 3> discounts_{};
    std::uint64_t total_tokens_ = 0;
    std::vector<std::uint64_t> counts_;  // trigram counts, (V+1) x (V+1) x V
    std::vector<double> prob_;
    std::vector<double> logp_;
};

}  // namespace notecrack
