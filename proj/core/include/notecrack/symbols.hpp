#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "notecrack/errors.hpp"

namespace notecrack {

/// An ordered, finite set of distinct symbol strings. Immutable after
/// construction; symbol indices are stable for the alphabet's lifetime.
/// Symbols may not be empty, may not contain whitespace, and may not be
/// the literal "^" (reserved as the start-of-sequence marker in model
/// files). Minimum size is 2.
class Alphabet {
public:
    Alphabet(std::vector<std::string> symbols, std::string name);

    int size() const noexcept { return static_cast<int>(symbols_.size()); }
    const std::string& name() const noexcept { return name_; }
    const std::vector<std::string>& symbols() const noexcept { return symbols_; }
    const std::string& symbol(int index) const { return symbols_.at(static_cast<std::size_t>(index)); }

    std::optional<int> index_of(std::string_view symbol) const {
        auto it = index_.find(symbol);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    bool operator==(const Alphabet& other) const {
        return symbols_ == other.symbols_;
    }

private:
    std::vector<std::string> symbols_;
    std::string name_;
    std::map<std::string, int, std::less<>> index_;
};

using AlphabetRef = std::shared_ptr<const Alphabet>;

/// Builds an alphabet from the given symbols, preserving their order.
/// Throws Error on duplicates, empty symbols, or size < 2.
AlphabetRef make_alphabet(std::vector<std::string> symbols, std::string name);

/// True when the two references designate the same alphabet (by content).
inline bool same_alphabet(const AlphabetRef& a, const AlphabetRef& b) {
    return a == b || (a && b && *a == *b);
}

/// The 24 cipher glyph classes: orientations A..H times 1..3 semicircles,
/// ordered A1, A2, A3, B1, ... H3.
AlphabetRef dorabella_alphabet();

/// The 24-pitch melody alphabet spanning F3..E6 (C major plus B flat),
/// in ascending pitch order: F3 G3 A3 Bb3 B3 C4 ... C6 D6 E6.
/// Canonical spelling is ASCII ("Bb4"); Unicode flat/sharp signs are
/// accepted on input elsewhere but never produced.
AlphabetRef melody_alphabet();

/// The 24 pitch/duration pairs: pitches {A,B,C,D,E,F,F#,G} by duration
/// classes {short, quarter, long}, pitch-major ("A:short", "A:quarter", ...).
AlphabetRef pitch_duration_alphabet();

/// Lowercase a..z.
AlphabetRef english_alphabet();

/// Looks up one of the built-in alphabets by name
/// ("dorabella", "melody", "pitch-duration", "english").
AlphabetRef alphabet_by_name(std::string_view name);

/// An ordered list of symbol indices into one alphabet. Every index is
/// validated against the alphabet bounds at construction. Immutable.
class Sequence {
public:
    Sequence(AlphabetRef alphabet, std::vector<std::int32_t> tokens);

    const AlphabetRef& alphabet() const noexcept { return alphabet_; }
    std::span<const std::int32_t> tokens() const noexcept { return tokens_; }
    std::size_t size() const noexcept { return tokens_.size(); }
    bool empty() const noexcept { return tokens_.empty(); }
    std::int32_t operator[](std::size_t i) const { return tokens_[i]; }

    /// Symbols joined by single spaces.
    std::string render() const;

    bool operator==(const Sequence& other) const {
        return tokens_ == other.tokens_ && same_alphabet(alphabet_, other.alphabet_);
    }

private:
    AlphabetRef alphabet_;
    std::vector<std::int32_t> tokens_;
};

/// One glyph of the cipher transcription grammar: an orientation letter
/// A..H followed by a semicircle count 1..3, rendered e.g. "A2".
struct DorabellaToken {
    char orientation;  // 'A'..'H'
    int semicircles;   // 1..3

    std::string render() const { return std::string(1, orientation) + std::to_string(semicircles); }
    int alphabet_index() const { return (orientation - 'A') * 3 + (semicircles - 1); }
};

/// Parses a whitespace-separated transcription (line breaks are whitespace)
/// into a sequence over dorabella_alphabet(), in reading order.
/// Throws ParseError naming line and column on any malformed token.
Sequence parse_dorabella(std::string_view text);

/// Parses one line of a sequence file: space-separated symbols of
/// `alphabet`, exact spelling. `line_no` is used for error reporting.
Sequence parse_sequence_line(const AlphabetRef& alphabet, std::string_view line, int line_no = 0);

}  // namespace notecrack
