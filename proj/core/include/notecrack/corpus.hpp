#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "notecrack/symbols.hpp"

namespace notecrack {

/// Exact note value in whole-note units (1/4 = quarter note). Durations are
/// rationals, never floats, so the quarter-note boundary is exact.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    /// Sign of (*this - other).
    int compare(const Rational& other) const {
        const auto lhs = num * other.den;
        const auto rhs = other.num * den;
        return lhs < rhs ? -1 : lhs > rhs ? 1 : 0;
    }
};

/// Parses "3/8" or a bare integer "2". Throws ParseError on anything else.
Rational parse_rational(std::string_view text, int line_no = 0);

/// One note: MIDI pitch number plus exact duration. Velocity, articulation
/// and meter are deliberately not represented.
struct NoteEvent {
    int pitch = 60;      // 0..127
    Rational duration;   // > 0
};

/// Train/test partition of one corpus. The two sides never share a source
/// sequence, and all sequences are over one alphabet.
struct CorpusSplit {
    std::vector<Sequence> train;
    std::vector<Sequence> test;
    std::uint64_t seed = 0;
};

/// Reduces note events to the 24-symbol pitch/duration alphabet:
///  1. transpose down by `declared_key` semitones (pitch class 0..11),
///  2. fold to a single octave (pitch class only),
///  3. map to the nearest of the 8 pitches {A,B,C,D,E,F,F#,G} in semitone
///     distance, ties broken downward (C#->C, D#->D, G#->G, A#->A),
///  4. classify duration against a quarter note: short (<1/4),
///     quarter (=1/4), long (>1/4).
/// Throws Error on an empty event list or a declared key outside 0..11.
Sequence normalize_pitch_duration(std::span<const NoteEvent> events, int declared_key);

/// Maps pitch names (e.g. "C4", "Bb4", also Unicode flat/sharp) onto the
/// 24-pitch melody alphabet. Pitches inside F3..E6 that are not alphabet
/// members snap to the nearest member, ties broken downward; pitches
/// outside the range raise an Error naming the offending pitch.
Sequence normalize_melody(std::span<const std::string> pitch_names);

/// Reduces text to the 26-letter alphabet: drops every character outside
/// A-Z/a-z and folds to lowercase. The result may be empty.
Sequence prepare_english(std::string_view text);

/// Draws `count` excerpts of exactly `length` tokens, each a contiguous
/// span of a single source sequence. No two excerpts share a starting
/// position; sources shorter than `length` are skipped. Deterministic per
/// seed. Throws Error when fewer than `count` starting positions exist.
std::vector<Sequence> sample_excerpts(std::span<const Sequence> sequences, int count, int length,
                                      std::uint64_t seed);

/// Deterministic partition: `train_count` sequences drawn without
/// replacement into train, the rest into test. Throws Error when
/// train_count >= pool size.
CorpusSplit split_corpus(std::span<const Sequence> sequences, int train_count, std::uint64_t seed);

/// Parses a pitch name: letter A..G, optional accidental (b, #, or the
/// Unicode flat/sharp sign), octave number. Returns the MIDI note number
/// (C4 = 60). Throws ParseError on malformed names.
int parse_pitch_name(std::string_view name, int line_no = 0);

/// Parses a pitch-class name (C, C#, Db, ... B) to 0..11.
int parse_pitch_class(std::string_view name, int line_no = 0);

// ---- file formats ----------------------------------------------------------
// All readers skip blank lines and lines starting with '#', so files with a
// trailing manifest block can be read back.

/// Note-event file: header "key: <pitch-class>", then one
/// "<midi-pitch> <numerator>/<denominator>" pair per line.
struct NoteFile {
    int declared_key = 0;
    std::vector<NoteEvent> events;
};
NoteFile read_note_file(std::istream& in);
NoteFile read_note_file(const std::filesystem::path& path);

/// Melody file: one melody per line, space-separated pitch names.
/// Each line goes through normalize_melody.
std::vector<Sequence> read_melody_file(std::istream& in);
std::vector<Sequence> read_melody_file(const std::filesystem::path& path);

/// Sequence file: one sequence per line, space-separated symbols of
/// `alphabet`, exact spelling (no snapping).
std::vector<Sequence> read_sequence_file(std::istream& in, const AlphabetRef& alphabet);
std::vector<Sequence> read_sequence_file(const std::filesystem::path& path, const AlphabetRef& alphabet);

/// English corpus: raw UTF-8 text, one sequence for the whole file.
Sequence read_english_file(const std::filesystem::path& path);

/// Renders sequences one per line, tokens separated by single spaces.
std::string render_sequences(std::span<const Sequence> sequences);

/// Reads a whole file into a string. Throws Error when unreadable.
std::string read_text_file(const std::filesystem::path& path);

}  // namespace notecrack
