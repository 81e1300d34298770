#pragma once

#include <string>
#include <string_view>

#include "notecrack/symbols.hpp"

namespace notecrack {

/// Renders a melody-alphabet sequence as ABC notation: header fields
/// X, T, M:4/4, L:1/4, K:C, then the notes as uniform quarter notes with a
/// bar line every four. B flat is always written with an explicit flat
/// (_B) and B natural with an explicit natural (=B), so the rendering does
/// not depend on ABC's within-measure accidental carry-over.
/// Throws Error when the sequence is not over the melody alphabet.
std::string to_abc(const Sequence& melody, std::string_view title);

}  // namespace notecrack
