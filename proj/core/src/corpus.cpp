#include "notecrack/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

#include "notecrack/rng.hpp"

namespace notecrack {

namespace {

// Nearest member of {A,B,C,D,E,F,F#,G} per pitch class, ties downward.
// Indexed by pitch class 0..11, values are pitch-duration alphabet pitch
// names in its pitch-major order {A,B,C,D,E,F,F#,G}.
constexpr std::array<int, 12> kPitchClassToEight = {
    2,  // C  -> C
    2,  // C# -> C   (tie with D, broken downward)
    3,  // D  -> D
    3,  // D# -> D   (tie with E, broken downward)
    4,  // E  -> E
    5,  // F  -> F
    6,  // F# -> F#
    7,  // G  -> G
    7,  // G# -> G   (tie with A, broken downward)
    0,  // A  -> A
    0,  // A# -> A   (tie with B, broken downward)
    1,  // B  -> B
};

int64_t gcd64(int64_t a, int64_t b) {
    while (b != 0) {
        const int64_t t = a % b;
        a = b;
        b = t;
    }
    return a < 0 ? -a : a;
}

bool parse_int(std::string_view s, std::int64_t& out) {
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        out.push_back(line.substr(start, i - start));
    }
    return out;
}

bool skippable(std::string_view line) {
    for (char c : line) {
        if (c == '#') return true;  // only as the first non-blank character
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;  // blank
}

// Consumes a Unicode flat/sharp sign or ASCII b/# at position i; returns the
// semitone offset and advances i, or returns 0 leaving i untouched.
int take_accidental(std::string_view s, std::size_t& i) {
    if (i >= s.size()) return 0;
    if (s[i] == 'b') {
        ++i;
        return -1;
    }
    if (s[i] == '#') {
        ++i;
        return 1;
    }
    static constexpr std::string_view flat = "\xe2\x99\xad";   // U+266D
    static constexpr std::string_view sharp = "\xe2\x99\xaf";  // U+266F
    if (s.substr(i).starts_with(flat)) {
        i += flat.size();
        return -1;
    }
    if (s.substr(i).starts_with(sharp)) {
        i += sharp.size();
        return 1;
    }
    return 0;
}

constexpr std::array<int, 7> kLetterPitchClass = {9, 11, 0, 2, 4, 5, 7};  // A B C D E F G

}  // namespace

Rational parse_rational(std::string_view text, int line_no) {
    const auto slash = text.find('/');
    std::int64_t num = 0;
    std::int64_t den = 1;
    bool ok;
    if (slash == std::string_view::npos) {
        ok = parse_int(text, num);
    } else {
        ok = parse_int(text.substr(0, slash), num) && parse_int(text.substr(slash + 1), den);
    }
    if (!ok || den == 0) {
        throw ParseError("malformed duration \"" + std::string(text) + "\" (expected N or N/D)", line_no);
    }
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = gcd64(num == 0 ? den : num, den);
    return Rational{num / g, den / g};
}

int parse_pitch_name(std::string_view name, int line_no) {
    if (name.empty()) throw ParseError("empty pitch name", line_no);
    const char letter = name[0];
    if (letter < 'A' || letter > 'G') {
        throw ParseError("malformed pitch \"" + std::string(name) + "\" (expected letter A-G)", line_no);
    }
    std::size_t i = 1;
    const int accidental = take_accidental(name, i);
    std::int64_t octave = 0;
    if (!parse_int(name.substr(i), octave) || octave < -1 || octave > 9) {
        throw ParseError("malformed pitch \"" + std::string(name) + "\" (bad octave)", line_no);
    }
    const int midi = static_cast<int>((octave + 1) * 12) + kLetterPitchClass[letter - 'A'] + accidental;
    if (midi < 0 || midi > 127) {
        throw ParseError("pitch \"" + std::string(name) + "\" outside MIDI range", line_no);
    }
    return midi;
}

int parse_pitch_class(std::string_view name, int line_no) {
    if (name.empty() || name[0] < 'A' || name[0] > 'G') {
        throw ParseError("malformed pitch class \"" + std::string(name) + "\"", line_no);
    }
    std::size_t i = 1;
    const int accidental = take_accidental(name, i);
    if (i != name.size()) {
        throw ParseError("malformed pitch class \"" + std::string(name) + "\"", line_no);
    }
    return ((kLetterPitchClass[name[0] - 'A'] + accidental) % 12 + 12) % 12;
}

Sequence normalize_pitch_duration(std::span<const NoteEvent> events, int declared_key) {
    if (events.empty()) throw Error("normalize_pitch_duration: empty event list");
    if (declared_key < 0 || declared_key > 11) {
        throw Error("declared key must be a pitch class 0..11, got " + std::to_string(declared_key));
    }
    const AlphabetRef alphabet = pitch_duration_alphabet();
    static const Rational quarter{1, 4};
    std::vector<std::int32_t> tokens;
    tokens.reserve(events.size());
    for (const NoteEvent& event : events) {
        if (event.pitch < 0 || event.pitch > 127) {
            throw Error("note pitch out of MIDI range: " + std::to_string(event.pitch));
        }
        if (event.duration.num <= 0 || event.duration.den <= 0) {
            throw Error("note duration must be positive");
        }
        const int pc = ((event.pitch - declared_key) % 12 + 12) % 12;
        const int pitch_slot = kPitchClassToEight[static_cast<std::size_t>(pc)];
        const int cmp = event.duration.compare(quarter);
        const int duration_slot = cmp < 0 ? 0 : cmp == 0 ? 1 : 2;  // short, quarter, long
        tokens.push_back(static_cast<std::int32_t>(pitch_slot * 3 + duration_slot));
    }
    return Sequence(alphabet, std::move(tokens));
}

Sequence normalize_melody(std::span<const std::string> pitch_names) {
    const AlphabetRef alphabet = melody_alphabet();
    // MIDI number of each alphabet member, ascending by construction.
    static const std::vector<int> member_midi = [] {
        std::vector<int> v;
        for (const std::string& s : melody_alphabet()->symbols()) v.push_back(parse_pitch_name(s));
        return v;
    }();
    std::vector<std::int32_t> tokens;
    tokens.reserve(pitch_names.size());
    for (const std::string& name : pitch_names) {
        const int midi = parse_pitch_name(name);
        if (midi < member_midi.front() || midi > member_midi.back()) {
            throw Error("pitch \"" + name + "\" outside the melody range " +
                        alphabet->symbol(0) + ".." + alphabet->symbol(alphabet->size() - 1));
        }
        int best = 0;
        int best_distance = 128;
        for (std::size_t i = 0; i < member_midi.size(); ++i) {
            const int distance = std::abs(member_midi[i] - midi);
            if (distance < best_distance) {  // ties keep the earlier (lower) member
                best_distance = distance;
                best = static_cast<int>(i);
            }
        }
        tokens.push_back(best);
    }
    return Sequence(alphabet, std::move(tokens));
}

Sequence prepare_english(std::string_view text) {
    std::vector<std::int32_t> tokens;
    tokens.reserve(text.size());
    for (char c : text) {
        if (c >= 'a' && c <= 'z') {
            tokens.push_back(c - 'a');
        } else if (c >= 'A' && c <= 'Z') {
            tokens.push_back(c - 'A');
        }
    }
    return Sequence(english_alphabet(), std::move(tokens));
}

std::vector<Sequence> sample_excerpts(std::span<const Sequence> sequences, int count, int length,
                                      std::uint64_t seed) {
    if (count < 1) throw Error("sample_excerpts: count must be >= 1");
    if (length < 1) throw Error("sample_excerpts: length must be >= 1");
    struct Candidate {
        std::size_t sequence;
        std::size_t start;
    };
    std::vector<Candidate> candidates;
    for (std::size_t s = 0; s < sequences.size(); ++s) {
        const std::size_t n = sequences[s].size();
        if (n < static_cast<std::size_t>(length)) continue;
        for (std::size_t start = 0; start + static_cast<std::size_t>(length) <= n; ++start) {
            candidates.push_back({s, start});
        }
    }
    if (candidates.size() < static_cast<std::size_t>(count)) {
        throw Error("sample_excerpts: requested " + std::to_string(count) + " excerpts but only " +
                    std::to_string(candidates.size()) + " starting positions are available");
    }
    // Partial Fisher-Yates: only the first `count` slots are settled.
    Rng rng(mix_seed(seed, /*tag=*/0x657863ULL));  // "exc"
    for (int i = 0; i < count; ++i) {
        const std::size_t j = static_cast<std::size_t>(i) +
                              static_cast<std::size_t>(rng.below(candidates.size() - static_cast<std::size_t>(i)));
        std::swap(candidates[static_cast<std::size_t>(i)], candidates[j]);
    }
    std::vector<Sequence> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const Candidate& c = candidates[static_cast<std::size_t>(i)];
        const Sequence& src = sequences[c.sequence];
        std::vector<std::int32_t> tokens(src.tokens().begin() + static_cast<std::ptrdiff_t>(c.start),
                                         src.tokens().begin() + static_cast<std::ptrdiff_t>(c.start) +
                                             length);
        out.emplace_back(src.alphabet(), std::move(tokens));
    }
    return out;
}

CorpusSplit split_corpus(std::span<const Sequence> sequences, int train_count, std::uint64_t seed) {
    if (train_count < 0 || static_cast<std::size_t>(train_count) >= sequences.size()) {
        throw Error("split_corpus: train_count " + std::to_string(train_count) +
                    " must be smaller than the pool size " + std::to_string(sequences.size()));
    }
    std::vector<std::size_t> order(sequences.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(mix_seed(seed, /*tag=*/0x73706cULL));  // "spl"
    for (int i = 0; i < train_count; ++i) {
        const std::size_t j = static_cast<std::size_t>(i) +
                              static_cast<std::size_t>(rng.below(order.size() - static_cast<std::size_t>(i)));
        std::swap(order[static_cast<std::size_t>(i)], order[j]);
    }
    CorpusSplit split;
    split.seed = seed;
    split.train.reserve(static_cast<std::size_t>(train_count));
    for (int i = 0; i < train_count; ++i) split.train.push_back(sequences[order[static_cast<std::size_t>(i)]]);
    std::vector<std::size_t> rest(order.begin() + train_count, order.end());
    std::sort(rest.begin(), rest.end());
    split.test.reserve(rest.size());
    for (std::size_t idx : rest) split.test.push_back(sequences[idx]);
    return split;
}

NoteFile read_note_file(std::istream& in) {
    NoteFile file;
    std::string line;
    int line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (skippable(line)) continue;
        if (!saw_header) {
            const auto fields = split_ws(line);
            if (fields.size() != 2 || fields[0] != "key:") {
                throw ParseError("note file must start with a \"key: <pitch-class>\" header", line_no);
            }
            file.declared_key = parse_pitch_class(fields[1], line_no);
            saw_header = true;
            continue;
        }
        const auto fields = split_ws(line);
        if (fields.size() != 2) {
            throw ParseError("expected \"<pitch> <duration>\" pair", line_no);
        }
        std::int64_t pitch = 0;
        if (!parse_int(fields[0], pitch) || pitch < 0 || pitch > 127) {
            throw ParseError("pitch \"" + std::string(fields[0]) + "\" is not a MIDI number 0..127",
                             line_no);
        }
        const Rational duration = parse_rational(fields[1], line_no);
        if (duration.num <= 0) {
            throw ParseError("duration must be positive", line_no);
        }
        file.events.push_back(NoteEvent{static_cast<int>(pitch), duration});
    }
    if (!saw_header) throw ParseError("note file is missing the \"key:\" header");
    return file;
}

std::vector<Sequence> read_melody_file(std::istream& in) {
    std::vector<Sequence> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (skippable(line)) continue;
        std::vector<std::string> names;
        for (std::string_view tok : split_ws(line)) names.emplace_back(tok);
        try {
            out.push_back(normalize_melody(names));
        } catch (const Error& e) {
            throw ParseError(std::string(e.what()), line_no);
        }
    }
    return out;
}

std::vector<Sequence> read_sequence_file(std::istream& in, const AlphabetRef& alphabet) {
    std::vector<Sequence> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (skippable(line)) continue;
        out.push_back(parse_sequence_line(alphabet, line, line_no));
    }
    return out;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

namespace {

template <typename Fn>
auto with_file(const std::filesystem::path& path, Fn fn) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path.string());
    return fn(in);
}

}  // namespace

NoteFile read_note_file(const std::filesystem::path& path) {
    return with_file(path, [](std::istream& in) { return read_note_file(in); });
}

std::vector<Sequence> read_melody_file(const std::filesystem::path& path) {
    return with_file(path, [](std::istream& in) { return read_melody_file(in); });
}

std::vector<Sequence> read_sequence_file(const std::filesystem::path& path, const AlphabetRef& alphabet) {
    return with_file(path, [&](std::istream& in) { return read_sequence_file(in, alphabet); });
}

Sequence read_english_file(const std::filesystem::path& path) {
    return prepare_english(read_text_file(path));
}

std::string render_sequences(std::span<const Sequence> sequences) {
    std::string out;
    for (const Sequence& s : sequences) {
        out += s.render();
        out += '\n';
    }
    return out;
}

}  // namespace notecrack
