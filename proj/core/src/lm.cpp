#include "notecrack/lm.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace notecrack {

namespace {

// Count-of-counts n1..n4 of one order.
struct CountOfCounts {
    std::uint64_t n[5] = {0, 0, 0, 0, 0};

    void add(std::uint64_t c) {
        if (c >= 1 && c <= 4) ++n[c];
    }
};

// Closed-form modified KN discounts, or the 0.5 fallback when the form is
// undefined or out of range. Strict positivity is required: a zero discount
// at some order could leave unseen symbols with zero probability in
// contexts whose types all sit in that count bucket.
Discounts estimate_discounts(const CountOfCounts& cc) {
    const double n1 = static_cast<double>(cc.n[1]);
    const double n2 = static_cast<double>(cc.n[2]);
    const double n3 = static_cast<double>(cc.n[3]);
    const double n4 = static_cast<double>(cc.n[4]);
    const Discounts fallback{0.5, 0.5, 0.5};
    if (cc.n[1] == 0 || cc.n[2] == 0 || cc.n[3] == 0) return fallback;
    const double y = n1 / (n1 + 2.0 * n2);
    const Discounts d{
        1.0 - 2.0 * y * n2 / n1,
        2.0 - 3.0 * y * n3 / n2,
        3.0 - 4.0 * y * n4 / n3,
    };
    if (!(d.d1 > 0.0 && d.d1 < 1.0)) return fallback;
    if (!(d.d2 > 0.0 && d.d2 < 2.0)) return fallback;
    if (!(d.d3 > 0.0 && d.d3 < 3.0)) return fallback;
    return d;
}

void validate_discounts(const Discounts& d, int order) {
    if (!(d.d1 > 0.0 && d.d1 < 1.0 && d.d2 > 0.0 && d.d2 < 2.0 && d.d3 > 0.0 && d.d3 < 3.0)) {
        throw Error("invalid discounts at order " + std::to_string(order) +
                    " (need 0 < d1 < 1, 0 < d2 < 2, 0 < d3 < 3)");
    }
}

double apply_discount(std::uint64_t count, const Discounts& d) {
    if (count == 0) return 0.0;
    const double c = static_cast<double>(count);
    if (count == 1) return c - d.d1;
    if (count == 2) return c - d.d2;
    return c - d.d3;
}

double discount_mass(const Discounts& d, std::uint64_t n1, std::uint64_t n2, std::uint64_t n3p) {
    return d.d1 * static_cast<double>(n1) + d.d2 * static_cast<double>(n2) +
           d.d3 * static_cast<double>(n3p);
}

std::string format_double(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

}  // namespace

NgramModel::NgramModel(AlphabetRef alphabet) : alphabet_(std::move(alphabet)) {
    if (!alphabet_) throw Error("model requires an alphabet");
    symbol_count_ = alphabet_->size();
    stride_ = static_cast<std::size_t>(symbol_count_) + 1;
    counts_.assign(stride_ * stride_ * static_cast<std::size_t>(symbol_count_), 0);
}

void NgramModel::count_sequence(const Sequence& sequence) {
    const int start = start_index();
    int a = start;
    int b = start;
    for (std::int32_t w : sequence.tokens()) {
        ++counts_[table_index(a, b, w)];
        a = b;
        b = w;
    }
    total_tokens_ += sequence.size();
}

NgramModel NgramModel::train(std::span<const Sequence> sequences, AlphabetRef alphabet,
                             std::optional<std::array<Discounts, 3>> fixed_discounts) {
    NgramModel model(std::move(alphabet));
    for (const Sequence& s : sequences) {
        if (!same_alphabet(s.alphabet(), model.alphabet_)) {
            throw Error("training sequence alphabet '" + s.alphabet()->name() +
                        "' does not match model alphabet '" + model.alphabet_->name() + "'");
        }
        model.count_sequence(s);
    }
    if (model.total_tokens_ < kOrder) {
        throw Error("training corpus too small: " + std::to_string(model.total_tokens_) +
                    " tokens, need at least " + std::to_string(kOrder));
    }
    if (fixed_discounts) {
        for (int order = 1; order <= 3; ++order) validate_discounts((*fixed_discounts)[order - 1], order);
        model.discounts_ = *fixed_discounts;
        model.rebuild_tables(/*estimate=*/false);
    } else {
        // Discount estimation happens inside rebuild_tables, where the
        // continuation counts of the lower orders are available.
        model.rebuild_tables(/*estimate=*/true);
    }
    return model;
}

NgramModel NgramModel::uniform(AlphabetRef alphabet) {
    // Zero counts drive every context through the full backoff chain down
    // to the uniform base distribution.
    NgramModel model(std::move(alphabet));
    model.rebuild_tables(/*estimate=*/false);
    return model;
}

void NgramModel::rebuild_tables(bool estimate) {
    const int v = symbol_count_;
    const std::size_t s = stride_;

    // ---- gather statistics per order ----------------------------------
    std::vector<std::uint64_t> ctx3_total(s * s, 0);
    std::vector<std::uint32_t> ctx3_n1(s * s, 0), ctx3_n2(s * s, 0), ctx3_n3p(s * s, 0);
    std::vector<std::uint32_t> cont2(s * static_cast<std::size_t>(v), 0);  // [v][w] continuation counts
    CountOfCounts cc3;
    for (std::size_t a = 0; a < s; ++a) {
        for (std::size_t b = 0; b < s; ++b) {
            const std::size_t ctx = a * s + b;
            for (int w = 0; w < v; ++w) {
                const std::uint64_t c = counts_[ctx * static_cast<std::size_t>(v) + static_cast<std::size_t>(w)];
                if (c == 0) continue;
                ctx3_total[ctx] += c;
                if (c == 1) {
                    ++ctx3_n1[ctx];
                } else if (c == 2) {
                    ++ctx3_n2[ctx];
                } else {
                    ++ctx3_n3p[ctx];
                }
                cc3.add(c);
                ++cont2[b * static_cast<std::size_t>(v) + static_cast<std::size_t>(w)];
            }
        }
    }

    std::vector<std::uint64_t> ctx2_total(s, 0);
    std::vector<std::uint32_t> ctx2_n1(s, 0), ctx2_n2(s, 0), ctx2_n3p(s, 0);
    std::vector<std::uint32_t> cont1(static_cast<std::size_t>(v), 0);
    CountOfCounts cc2;
    for (std::size_t b = 0; b < s; ++b) {
        for (int w = 0; w < v; ++w) {
            const std::uint32_t c = cont2[b * static_cast<std::size_t>(v) + static_cast<std::size_t>(w)];
            if (c == 0) continue;
            ctx2_total[b] += c;
            if (c == 1) {
                ++ctx2_n1[b];
            } else if (c == 2) {
                ++ctx2_n2[b];
            } else {
                ++ctx2_n3p[b];
            }
            cc2.add(c);
            ++cont1[static_cast<std::size_t>(w)];
        }
    }

    std::uint64_t total1 = 0;
    std::uint64_t uni_n1 = 0, uni_n2 = 0, uni_n3p = 0;
    CountOfCounts cc1;
    for (int w = 0; w < v; ++w) {
        const std::uint32_t c = cont1[static_cast<std::size_t>(w)];
        if (c == 0) continue;
        total1 += c;
        if (c == 1) {
            ++uni_n1;
        } else if (c == 2) {
            ++uni_n2;
        } else {
            ++uni_n3p;
        }
        cc1.add(c);
    }

    if (estimate) {
        discounts_[0] = estimate_discounts(cc1);
        discounts_[1] = estimate_discounts(cc2);
        discounts_[2] = estimate_discounts(cc3);
    }

    // ---- assemble the probability tables bottom-up ---------------------
    const double uniform_p = 1.0 / static_cast<double>(v);
    std::vector<double> p1(static_cast<std::size_t>(v), uniform_p);
    if (total1 > 0) {
        const Discounts& d = discounts_[0];
        const double total = static_cast<double>(total1);
        const double gamma = discount_mass(d, uni_n1, uni_n2, uni_n3p) / total;
        for (int w = 0; w < v; ++w) {
            p1[static_cast<std::size_t>(w)] =
                std::max(apply_discount(cont1[static_cast<std::size_t>(w)], d), 0.0) / total +
                gamma * uniform_p;
        }
    }

    std::vector<double> p2(s * static_cast<std::size_t>(v));
    for (std::size_t b = 0; b < s; ++b) {
        double* row = p2.data() + b * static_cast<std::size_t>(v);
        if (ctx2_total[b] == 0) {
            std::copy(p1.begin(), p1.end(), row);
            continue;
        }
        const Discounts& d = discounts_[1];
        const double total = static_cast<double>(ctx2_total[b]);
        const double gamma = discount_mass(d, ctx2_n1[b], ctx2_n2[b], ctx2_n3p[b]) / total;
        for (int w = 0; w < v; ++w) {
            row[w] = std::max(apply_discount(cont2[b * static_cast<std::size_t>(v) +
                                                   static_cast<std::size_t>(w)],
                                             d),
                              0.0) /
                         total +
                     gamma * p1[static_cast<std::size_t>(w)];
        }
    }

    prob_.assign(counts_.size(), 0.0);
    for (std::size_t a = 0; a < s; ++a) {
        for (std::size_t b = 0; b < s; ++b) {
            const std::size_t ctx = a * s + b;
            double* row = prob_.data() + ctx * static_cast<std::size_t>(v);
            const double* lower = p2.data() + b * static_cast<std::size_t>(v);
            if (ctx3_total[ctx] == 0) {
                std::copy(lower, lower + v, row);
                continue;
            }
            const Discounts& d = discounts_[2];
            const double total = static_cast<double>(ctx3_total[ctx]);
            const double gamma = discount_mass(d, ctx3_n1[ctx], ctx3_n2[ctx], ctx3_n3p[ctx]) / total;
            for (int w = 0; w < v; ++w) {
                row[w] = std::max(apply_discount(counts_[ctx * static_cast<std::size_t>(v) +
                                                         static_cast<std::size_t>(w)],
                                                 d),
                                  0.0) /
                             total +
                         gamma * lower[w];
            }
        }
    }

    logp_.resize(prob_.size());
    for (std::size_t i = 0; i < prob_.size(); ++i) logp_[i] = std::log(prob_[i]);
}

double NgramModel::log_prob(const Sequence& sequence) const {
    if (sequence.empty()) throw Error("log_prob: empty sequence");
    if (!same_alphabet(sequence.alphabet(), alphabet_)) {
        throw Error("log_prob: sequence alphabet '" + sequence.alphabet()->name() +
                    "' does not match model alphabet '" + alphabet_->name() + "'");
    }
    const int start = start_index();
    int a = start;
    int b = start;
    double sum = 0.0;
    for (std::int32_t w : sequence.tokens()) {
        sum += logp_[table_index(a, b, w)];
        a = b;
        b = w;
    }
    return sum;
}

double NgramModel::perplexity(std::span<const Sequence> sequences) const {
    double sum = 0.0;
    std::uint64_t tokens = 0;
    for (const Sequence& s : sequences) {
        if (s.empty()) continue;
        sum += log_prob(s);
        tokens += s.size();
    }
    if (tokens == 0) throw Error("perplexity: no tokens to evaluate");
    return std::exp(-sum / static_cast<double>(tokens));
}

void NgramModel::save(std::ostream& out) const {
    out << "notecrack-lm v1\n";
    out << "alphabet " << alphabet_->name() << "\n";
    out << "symbols";
    for (const std::string& s : alphabet_->symbols()) out << ' ' << s;
    out << "\n";
    out << "order " << kOrder << "\n";
    for (int order = 3; order >= 1; --order) {
        const Discounts& d = discounts_[order - 1];
        out << "discounts " << order << ' ' << format_double(d.d1) << ' ' << format_double(d.d2)
            << ' ' << format_double(d.d3) << "\n";
    }
    std::uint64_t lines = 0;
    for (std::uint64_t c : counts_) {
        if (c > 0) ++lines;
    }
    out << "trigrams " << lines << "\n";
    const int v = symbol_count_;
    const auto symbol_or_start = [&](std::size_t idx) -> std::string {
        return idx == static_cast<std::size_t>(v) ? "^" : alphabet_->symbol(static_cast<int>(idx));
    };
    for (std::size_t a = 0; a < stride_; ++a) {
        for (std::size_t b = 0; b < stride_; ++b) {
            for (int w = 0; w < v; ++w) {
                const std::uint64_t c = counts_[table_index(static_cast<int>(a), static_cast<int>(b), w)];
                if (c == 0) continue;
                out << symbol_or_start(a) << ' ' << symbol_or_start(b) << ' ' << alphabet_->symbol(w)
                    << ' ' << c << "\n";
            }
        }
    }
    out << "end\n";
}

void NgramModel::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write model file: " + path.string());
    save(out);
}

namespace {

std::vector<std::string> split_words(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string word;
    while (in >> word) out.push_back(word);
    return out;
}

std::string next_content_line(std::istream& in, int& line_no) {
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t i = 0;
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i == line.size()) continue;
        if (line[i] == '#') continue;
        return line;
    }
    throw ParseError("unexpected end of model file", line_no);
}

std::uint64_t parse_u64(const std::string& text, int line_no) {
    std::uint64_t value = 0;
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), last, value);
    if (ec != std::errc() || ptr != last) {
        throw ParseError("expected an integer, got \"" + text + "\"", line_no);
    }
    return value;
}

double parse_f64(const std::string& text, int line_no) {
    try {
        std::size_t used = 0;
        const double value = std::stod(text, &used);
        if (used != text.size()) throw ParseError("trailing characters", line_no);
        return value;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError("expected a number, got \"" + text + "\"", line_no);
    }
}

}  // namespace

NgramModel NgramModel::load(std::istream& in) {
    int line_no = 0;
    if (next_content_line(in, line_no) != "notecrack-lm v1") {
        throw ParseError("not a notecrack-lm v1 model file", line_no);
    }
    auto fields = split_words(next_content_line(in, line_no));
    if (fields.size() != 2 || fields[0] != "alphabet") throw ParseError("expected alphabet line", line_no);
    const std::string name = fields[1];

    fields = split_words(next_content_line(in, line_no));
    if (fields.size() < 3 || fields[0] != "symbols") throw ParseError("expected symbols line", line_no);
    const AlphabetRef alphabet = make_alphabet({fields.begin() + 1, fields.end()}, name);

    fields = split_words(next_content_line(in, line_no));
    if (fields.size() != 2 || fields[0] != "order" || fields[1] != std::to_string(kOrder)) {
        throw ParseError("expected \"order 3\" line", line_no);
    }

    NgramModel model(alphabet);
    bool have[3] = {false, false, false};
    for (int i = 0; i < 3; ++i) {
        fields = split_words(next_content_line(in, line_no));
        if (fields.size() != 5 || fields[0] != "discounts") throw ParseError("expected discounts line", line_no);
        const auto order = static_cast<int>(parse_u64(fields[1], line_no));
        if (order < 1 || order > 3 || have[order - 1]) throw ParseError("bad discounts order", line_no);
        Discounts d{parse_f64(fields[2], line_no), parse_f64(fields[3], line_no),
                    parse_f64(fields[4], line_no)};
        validate_discounts(d, order);
        model.discounts_[order - 1] = d;
        have[order - 1] = true;
    }

    fields = split_words(next_content_line(in, line_no));
    if (fields.size() != 2 || fields[0] != "trigrams") throw ParseError("expected trigrams line", line_no);
    const std::uint64_t lines = parse_u64(fields[1], line_no);

    const auto index_or_start = [&](const std::string& sym) -> int {
        if (sym == "^") return model.start_index();
        const auto idx = alphabet->index_of(sym);
        if (!idx) throw ParseError("unknown symbol \"" + sym + "\" in model file", line_no);
        return *idx;
    };
    for (std::uint64_t i = 0; i < lines; ++i) {
        fields = split_words(next_content_line(in, line_no));
        if (fields.size() != 4) throw ParseError("expected trigram count line", line_no);
        const int a = index_or_start(fields[0]);
        const int b = index_or_start(fields[1]);
        const auto w = alphabet->index_of(fields[2]);
        if (!w) throw ParseError("trigram target \"" + fields[2] + "\" is not an alphabet symbol", line_no);
        const std::uint64_t c = parse_u64(fields[3], line_no);
        if (c == 0) throw ParseError("zero trigram count", line_no);
        auto& slot = model.counts_[model.table_index(a, b, *w)];
        if (slot != 0) throw ParseError("duplicate trigram line", line_no);
        slot = c;
        model.total_tokens_ += c;
    }
    if (next_content_line(in, line_no) != "end") throw ParseError("expected end marker", line_no);
    model.rebuild_tables(/*estimate=*/false);
    return model;
}

NgramModel NgramModel::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open model file: " + path.string());
    return load(in);
}

}  // namespace notecrack
