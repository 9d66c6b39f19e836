#pragma once

#include <string>
#include <unordered_set>
#include <vector>

#include "codealign/token.hpp"

namespace codealign {

using KeywordTable = std::unordered_set<std::string>;

// Built-in keyword tables. The files shipped under data/ contain the same
// words; a unit test keeps them in sync.
const KeywordTable& cpp_keywords();
const KeywordTable& fortran_keywords();

// Reads a one-keyword-per-line table. Blank lines and lines starting with
// '#' are ignored.
KeywordTable load_keyword_table(const std::string& path);

// Lexes the snippet with the built-in keyword table for its language.
// Comments are stripped. Throws MalformedEncoding on invalid UTF-8 and
// EmptyInput when the text is empty or whitespace-only.
TokenSequence tokenize(const CodeSnippet& snippet);
TokenSequence tokenize(const CodeSnippet& snippet, const KeywordTable& keywords);

bool is_valid_utf8(const std::string& text);

} // namespace codealign
