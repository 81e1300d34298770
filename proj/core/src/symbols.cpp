#include "notecrack/symbols.hpp"

#include <array>
#include <cctype>

namespace notecrack {

namespace {

bool has_whitespace(std::string_view s) {
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) return true;
    }
    return false;
}

}  // namespace

Alphabet::Alphabet(std::vector<std::string> symbols, std::string name)
    : symbols_(std::move(symbols)), name_(std::move(name)) {
    if (symbols_.size() < 2) {
        throw Error("alphabet '" + name_ + "' needs at least 2 symbols, got " +
                    std::to_string(symbols_.size()));
    }
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        const std::string& s = symbols_[i];
        if (s.empty()) throw Error("alphabet '" + name_ + "': empty symbol at index " + std::to_string(i));
        if (s == "^") throw Error("alphabet '" + name_ + "': symbol \"^\" is reserved");
        if (has_whitespace(s)) {
            throw Error("alphabet '" + name_ + "': symbol \"" + s + "\" contains whitespace");
        }
        auto [it, inserted] = index_.emplace(s, static_cast<int>(i));
        if (!inserted) throw Error("alphabet '" + name_ + "': duplicate symbol \"" + s + "\"");
    }
}

AlphabetRef make_alphabet(std::vector<std::string> symbols, std::string name) {
    return std::make_shared<const Alphabet>(std::move(symbols), std::move(name));
}

AlphabetRef dorabella_alphabet() {
    static const AlphabetRef instance = [] {
        std::vector<std::string> symbols;
        symbols.reserve(24);
        for (char orientation = 'A'; orientation <= 'H'; ++orientation) {
            for (int count = 1; count <= 3; ++count) {
                symbols.push_back(std::string(1, orientation) + std::to_string(count));
            }
        }
        return make_alphabet(std::move(symbols), "dorabella");
    }();
    return instance;
}

AlphabetRef melody_alphabet() {
    // MIDI numbers F3..E6, C major plus Bb, ascending.
    static const AlphabetRef instance = [] {
        static constexpr std::array<int, 24> midi = {
            53, 55, 57, 58, 59,              // F3 G3 A3 Bb3 B3
            60, 62, 64, 65, 67, 69, 70, 71,  // C4 D4 E4 F4 G4 A4 Bb4 B4
            72, 74, 76, 77, 79, 81, 82, 83,  // C5 D5 E5 F5 G5 A5 Bb5 B5
            84, 86, 88,                      // C6 D6 E6
        };
        static constexpr std::array<const char*, 12> pc_names = {
            "C", "", "D", "", "E", "F", "", "G", "", "A", "Bb", "B"};
        std::vector<std::string> symbols;
        symbols.reserve(midi.size());
        for (int m : midi) {
            symbols.push_back(std::string(pc_names[static_cast<std::size_t>(m % 12)]) +
                              std::to_string(m / 12 - 1));
        }
        return make_alphabet(std::move(symbols), "melody");
    }();
    return instance;
}

AlphabetRef pitch_duration_alphabet() {
    static const AlphabetRef instance = [] {
        static constexpr std::array<const char*, 8> pitches = {"A", "B", "C", "D", "E", "F", "F#", "G"};
        static constexpr std::array<const char*, 3> durations = {"short", "quarter", "long"};
        std::vector<std::string> symbols;
        symbols.reserve(24);
        for (const char* p : pitches) {
            for (const char* d : durations) {
                symbols.push_back(std::string(p) + ":" + d);
            }
        }
        return make_alphabet(std::move(symbols), "pitch-duration");
    }();
    return instance;
}

AlphabetRef english_alphabet() {
    static const AlphabetRef instance = [] {
        std::vector<std::string> symbols;
        symbols.reserve(26);
        for (char c = 'a'; c <= 'z'; ++c) symbols.push_back(std::string(1, c));
        return make_alphabet(std::move(symbols), "english");
    }();
    return instance;
}

AlphabetRef alphabet_by_name(std::string_view name) {
    if (name == "dorabella") return dorabella_alphabet();
    if (name == "melody") return melody_alphabet();
    if (name == "pitch-duration") return pitch_duration_alphabet();
    if (name == "english") return english_alphabet();
    throw Error("unknown alphabet \"" + std::string(name) +
                "\" (expected dorabella, melody, pitch-duration, or english)");
}

Sequence::Sequence(AlphabetRef alphabet, std::vector<std::int32_t> tokens)
    : alphabet_(std::move(alphabet)), tokens_(std::move(tokens)) {
    if (!alphabet_) throw Error("sequence requires an alphabet");
    const auto size = static_cast<std::int32_t>(alphabet_->size());
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
        if (tokens_[i] < 0 || tokens_[i] >= size) {
            throw Error("sequence token " + std::to_string(i) + " out of range for alphabet '" +
                        alphabet_->name() + "': " + std::to_string(tokens_[i]));
        }
    }
}

std::string Sequence::render() const {
    std::string out;
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
        if (i > 0) out += ' ';
        out += alphabet_->symbol(tokens_[i]);
    }
    return out;
}

Sequence parse_dorabella(std::string_view text) {
    std::vector<std::int32_t> tokens;
    int line = 1;
    int column = 1;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        const char c = text[i];
        if (c == '\n') {
            ++line;
            column = 1;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++column;
            ++i;
            continue;
        }
        const int token_line = line;
        const int token_column = column;
        std::size_t start = i;
        while (i < n && !std::isspace(static_cast<unsigned char>(text[i]))) {
            ++i;
            ++column;
        }
        const std::string_view tok = text.substr(start, i - start);
        if (tok.size() != 2 || tok[0] < 'A' || tok[0] > 'H' || tok[1] < '1' || tok[1] > '3') {
            throw ParseError("malformed transcription token \"" + std::string(tok) +
                                 "\" (expected letter A-H followed by digit 1-3)",
                             token_line, token_column);
        }
        tokens.push_back(DorabellaToken{tok[0], tok[1] - '0'}.alphabet_index());
    }
    return Sequence(dorabella_alphabet(), std::move(tokens));
}

Sequence parse_sequence_line(const AlphabetRef& alphabet, std::string_view line, int line_no) {
    std::vector<std::int32_t> tokens;
    std::size_t i = 0;
    const std::size_t n = line.size();
    while (i < n) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < n && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        const std::string_view tok = line.substr(start, i - start);
        const auto index = alphabet->index_of(tok);
        if (!index) {
            throw ParseError("token \"" + std::string(tok) + "\" is not in alphabet '" +
                                 alphabet->name() + "'",
                             line_no, static_cast<int>(start) + 1);
        }
        tokens.push_back(*index);
    }
    return Sequence(alphabet, std::move(tokens));
}

}  // namespace notecrack
