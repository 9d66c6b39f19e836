#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace codealign {

enum class Language { Fortran, Cpp };

const char* language_name(Language lang);

// One unit of source text. `id` must be unique within any corpus.
struct CodeSnippet {
    std::string id;
    Language language = Language::Cpp;
    std::string text;
};

enum class TokenKind { Identifier, Keyword, Literal, Operator, Punct, Other };

const char* token_kind_name(TokenKind kind);

struct Token {
    std::string lexeme;
    TokenKind kind = TokenKind::Other;
    std::size_t offset = 0; // byte offset into the original source
    std::size_t length = 0;
    int line = 1; // 1-based source line, used for line-oriented constructs
};

struct TokenSequence {
    std::vector<Token> tokens;

    bool empty() const { return tokens.empty(); }
    std::size_t size() const { return tokens.size(); }
    const Token& operator[](std::size_t i) const { return tokens[i]; }

    // Lexemes joined with single spaces; re-lexing the result yields the
    // same (lexeme, kind) sequence.
    std::string joined() const;
};

} // namespace codealign
