#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "notecrack/symbols.hpp"

namespace notecrack {

/// A monoalphabetic substitution key: a bijection from a plaintext alphabet
/// onto a ciphertext alphabet of equal size. mapping()[i] is the cipher
/// index of plaintext symbol i. Plain and cipher alphabets stay distinct
/// objects even when structurally identical, so plaintext and ciphertext
/// domains cannot be confused. Immutable.
class Key {
public:
    Key(AlphabetRef plain, AlphabetRef cipher, std::vector<std::int32_t> mapping);

    const AlphabetRef& plain_alphabet() const noexcept { return plain_; }
    const AlphabetRef& cipher_alphabet() const noexcept { return cipher_; }
    std::span<const std::int32_t> mapping() const noexcept { return mapping_; }

    bool operator==(const Key& other) const {
        return mapping_ == other.mapping_ && same_alphabet(plain_, other.plain_) &&
               same_alphabet(cipher_, other.cipher_);
    }

private:
    AlphabetRef plain_;
    AlphabetRef cipher_;
    std::vector<std::int32_t> mapping_;
};

/// Token-wise substitution: plaintext over key.plain_alphabet() to a
/// same-length sequence over key.cipher_alphabet().
Sequence encipher(const Key& key, const Sequence& plaintext);

/// encipher with the inverse key.
Sequence decipher(const Key& key, const Sequence& ciphertext);

/// The inverse bijection. invert(invert(k)) == k.
Key invert(const Key& key);

/// Uniformly random key over one alphabet (plain == cipher), Fisher-Yates
/// from the seeded generator. Deterministic per seed.
Key random_key(const AlphabetRef& alphabet, std::uint64_t seed);

/// Uniformly random key between two alphabets of equal size.
Key random_key(AlphabetRef plain, AlphabetRef cipher, std::uint64_t seed);

/// Two whitespace-aligned rows: plain symbols in alphabet order, then the
/// cipher symbol each one maps to.
std::string render_key(const Key& key);
void write_key_file(const std::filesystem::path& path, const Key& key);

/// Reads the two-row format back, given the alphabets it is over.
Key read_key_file(const std::filesystem::path& path, AlphabetRef plain, AlphabetRef cipher);
Key read_key(std::istream& in, AlphabetRef plain, AlphabetRef cipher);

}  // namespace notecrack
