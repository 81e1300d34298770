#include "notecrack/abc.hpp"

#include <array>
#include <vector>

#include "notecrack/corpus.hpp"

namespace notecrack {

namespace {

std::string abc_note(int midi) {
    static constexpr std::array<const char*, 12> base = {
        "C", "", "D", "", "E", "F", "", "G", "", "A", "_B", "=B"};
    const int octave = midi / 12 - 1;
    std::string note = base[static_cast<std::size_t>(midi % 12)];
    if (octave >= 5) {
        for (char& c : note) {
            if (c >= 'A' && c <= 'G') c = static_cast<char>(c - 'A' + 'a');
        }
        for (int i = 5; i < octave; ++i) note += '\'';
    } else {
        for (int i = octave; i < 4; ++i) note += ',';
    }
    return note;
}

}  // namespace

std::string to_abc(const Sequence& melody, std::string_view title) {
    if (!same_alphabet(melody.alphabet(), melody_alphabet())) {
        throw Error("ABC export requires a sequence over the melody alphabet");
    }
    static const std::vector<std::string> note_of_symbol = [] {
        std::vector<std::string> notes;
        for (const std::string& s : melody_alphabet()->symbols()) {
            notes.push_back(abc_note(parse_pitch_name(s)));
        }
        return notes;
    }();

    std::string out;
    out += "X:1\n";
    out += "T:";
    out += title;
    out += "\n";
    out += "M:4/4\n";
    out += "L:1/4\n";
    out += "K:C\n";

    const auto tokens = melody.tokens();
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        out += note_of_symbol[static_cast<std::size_t>(tokens[i])];
        const bool last = i + 1 == tokens.size();
        if (last) {
            out += "|]\n";
        } else if ((i + 1) % 4 == 0) {
            // bar every 4 quarter notes, line break every 8 bars
            out += (i + 1) % 32 == 0 ? "|\n" : "|";
        } else {
            out += ' ';
        }
    }
    return out;
}

}  // namespace notecrack
