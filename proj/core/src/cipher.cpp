#include "notecrack/cipher.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <sstream>

#include "notecrack/rng.hpp"

namespace notecrack {

Key::Key(AlphabetRef plain, AlphabetRef cipher, std::vector<std::int32_t> mapping)
    : plain_(std::move(plain)), cipher_(std::move(cipher)), mapping_(std::move(mapping)) {
    if (!plain_ || !cipher_) throw Error("key requires plain and cipher alphabets");
    if (plain_->size() != cipher_->size()) {
        throw Error("key alphabets differ in size: " + std::to_string(plain_->size()) + " vs " +
                    std::to_string(cipher_->size()));
    }
    if (mapping_.size() != static_cast<std::size_t>(plain_->size())) {
        throw Error("key mapping has " + std::to_string(mapping_.size()) + " entries, expected " +
                    std::to_string(plain_->size()));
    }
    std::vector<bool> seen(mapping_.size(), false);
    for (std::int32_t m : mapping_) {
        if (m < 0 || static_cast<std::size_t>(m) >= mapping_.size() || seen[static_cast<std::size_t>(m)]) {
            throw Error("key mapping is not a bijection");
        }
        seen[static_cast<std::size_t>(m)] = true;
    }
}

Sequence encipher(const Key& key, const Sequence& plaintext) {
    if (!same_alphabet(plaintext.alphabet(), key.plain_alphabet())) {
        throw Error("encipher: sequence alphabet '" + plaintext.alphabet()->name() +
                    "' does not match key plain alphabet '" + key.plain_alphabet()->name() + "'");
    }
    const auto mapping = key.mapping();
    std::vector<std::int32_t> tokens;
    tokens.reserve(plaintext.size());
    for (std::int32_t t : plaintext.tokens()) tokens.push_back(mapping[static_cast<std::size_t>(t)]);
    return Sequence(key.cipher_alphabet(), std::move(tokens));
}

Sequence decipher(const Key& key, const Sequence& ciphertext) {
    return encipher(invert(key), ciphertext);
}

Key invert(const Key& key) {
    const auto mapping = key.mapping();
    std::vector<std::int32_t> inverse(mapping.size());
    for (std::size_t i = 0; i < mapping.size(); ++i) {
        inverse[static_cast<std::size_t>(mapping[i])] = static_cast<std::int32_t>(i);
    }
    return Key(key.cipher_alphabet(), key.plain_alphabet(), std::move(inverse));
}

Key random_key(const AlphabetRef& alphabet, std::uint64_t seed) {
    return random_key(alphabet, alphabet, seed);
}

Key random_key(AlphabetRef plain, AlphabetRef cipher, std::uint64_t seed) {
    if (plain->size() != cipher->size()) {
        throw Error("random_key: alphabets differ in size");
    }
    std::vector<std::int32_t> mapping(static_cast<std::size_t>(plain->size()));
    std::iota(mapping.begin(), mapping.end(), 0);
    Rng rng(mix_seed(seed, /*tag=*/0x6b6579ULL));  // "key"
    rng.shuffle(std::span<std::int32_t>(mapping));
    return Key(std::move(plain), std::move(cipher), std::move(mapping));
}

std::string render_key(const Key& key) {
    const auto& plain = key.plain_alphabet()->symbols();
    const auto mapping = key.mapping();
    std::string row1;
    std::string row2;
    for (std::size_t i = 0; i < plain.size(); ++i) {
        const std::string& p = plain[i];
        const std::string& c = key.cipher_alphabet()->symbol(mapping[i]);
        const std::size_t width = std::max(p.size(), c.size());
        if (i > 0) {
            row1 += ' ';
            row2 += ' ';
        }
        row1 += p + std::string(width - p.size(), ' ');
        row2 += c + std::string(width - c.size(), ' ');
    }
    // strip trailing padding
    while (!row1.empty() && row1.back() == ' ') row1.pop_back();
    while (!row2.empty() && row2.back() == ' ') row2.pop_back();
    return row1 + "\n" + row2 + "\n";
}

void write_key_file(const std::filesystem::path& path, const Key& key) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write key file: " + path.string());
    out << render_key(key);
}

Key read_key(std::istream& in, AlphabetRef plain, AlphabetRef cipher) {
    std::vector<std::vector<std::string>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line) && rows.size() < 2) {
        ++line_no;
        std::size_t i = 0;
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i == line.size() || line[i] == '#') continue;
        std::vector<std::string> fields;
        std::istringstream words(line);
        std::string w;
        while (words >> w) fields.push_back(w);
        rows.push_back(std::move(fields));
    }
    if (rows.size() != 2) throw ParseError("key file needs two symbol rows", line_no);
    if (rows[0].size() != static_cast<std::size_t>(plain->size()) || rows[0].size() != rows[1].size()) {
        throw ParseError("key rows must list all " + std::to_string(plain->size()) + " symbols");
    }
    std::vector<std::int32_t> mapping(rows[0].size());
    for (std::size_t i = 0; i < rows[0].size(); ++i) {
        const auto p = plain->index_of(rows[0][i]);
        if (!p || *p != static_cast<int>(i)) {
            throw ParseError("key plain row must list the alphabet '" + plain->name() +
                             "' in order; found \"" + rows[0][i] + "\" at position " + std::to_string(i));
        }
        const auto c = cipher->index_of(rows[1][i]);
        if (!c) {
            throw ParseError("key cipher symbol \"" + rows[1][i] + "\" is not in alphabet '" +
                             cipher->name() + "'");
        }
        mapping[i] = *c;
    }
    return Key(std::move(plain), std::move(cipher), std::move(mapping));
}

Key read_key_file(const std::filesystem::path& path, AlphabetRef plain, AlphabetRef cipher) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open key file: " + path.string());
    return read_key(in, std::move(plain), std::move(cipher));
}

}  // namespace notecrack
