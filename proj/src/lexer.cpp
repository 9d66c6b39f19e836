#include "codealign/lexer.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "codealign/error.hpp"

namespace codealign {

const char* language_name(Language lang) {
    return lang == Language::Fortran ? "fortran" : "cpp";
}

const char* token_kind_name(TokenKind kind) {
    switch (kind) {
        case TokenKind::Identifier: return "Identifier";
        case TokenKind::Keyword: return "Keyword";
        case TokenKind::Literal: return "Literal";
        case TokenKind::Operator: return "Operator";
        case TokenKind::Punct: return "Punct";
        case TokenKind::Other: return "Other";
    }
    return "Other";
}

std::string TokenSequence::joined() const {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out += ' ';
        out += tokens[i].lexeme;
    }
    return out;
}

const KeywordTable& cpp_keywords() {
    static const KeywordTable table = {
        "alignas", "alignof", "and", "and_eq", "asm", "auto", "bitand", "bitor",
        "bool", "break", "case", "catch", "char", "char8_t", "char16_t",
        "char32_t", "class", "co_await", "co_return", "co_yield", "compl",
        "concept", "const", "const_cast", "consteval", "constexpr", "constinit",
        "continue", "decltype", "default", "delete", "do", "double",
        "dynamic_cast", "else", "enum", "explicit", "export", "extern", "false",
        "float", "for", "friend", "goto", "if", "inline", "int", "long",
        "mutable", "namespace", "new", "noexcept", "not", "not_eq", "nullptr",
        "operator", "or", "or_eq", "private", "protected", "public", "register",
        "reinterpret_cast", "requires", "return", "short", "signed", "sizeof",
        "static", "static_assert", "static_cast", "struct", "switch", "template",
        "this", "thread_local", "throw", "true", "try", "typedef", "typeid",
        "typename", "union", "unsigned", "using", "virtual", "void", "volatile",
        "wchar_t", "while", "xor", "xor_eq",
    };
    return table;
}

const KeywordTable& fortran_keywords() {
    static const KeywordTable table = {
        "allocatable", "allocate", "assign", "associate", "block", "call",
        "case", "character", "close", "common", "complex", "contains",
        "continue", "cycle", "data", "deallocate", "default", "dimension",
        "do", "double", "else", "elseif", "elsewhere", "end", "enddo", "endif",
        "endfunction", "endprogram", "endsubroutine", "entry", "equivalence",
        "exit", "external", "format", "function", "goto", "if", "implicit",
        "in", "inout", "integer", "intent", "interface", "intrinsic", "kind",
        "logical", "module", "namelist", "none", "nullify", "only", "open",
        "optional", "out", "parameter", "pause", "pointer", "precision",
        "print", "private", "procedure", "program", "public", "pure", "read",
        "real", "recursive", "result", "return", "rewind", "save", "select",
        "sequence", "stop", "subroutine", "target", "then", "type", "use",
        "where", "while", "write",
    };
    return table;
}

KeywordTable load_keyword_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::IoFailure, "cannot open keyword table " + path);
    KeywordTable table;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        table.insert(line);
    }
    return table;
}

bool is_valid_utf8(const std::string& text) {
    const auto* s = reinterpret_cast<const unsigned char*>(text.data());
    std::size_t n = text.size();
    std::size_t i = 0;
    while (i < n) {
        unsigned char c = s[i];
        std::size_t extra;
        unsigned cp_min;
        if (c < 0x80) {
            ++i;
            continue;
        } else if ((c & 0xE0) == 0xC0) {
            extra = 1;
            cp_min = 0x80;
        } else if ((c & 0xF0) == 0xE0) {
            extra = 2;
            cp_min = 0x800;
        } else if ((c & 0xF8) == 0xF0) {
            extra = 3;
            cp_min = 0x10000;
        } else {
            return false;
        }
        if (i + extra >= n) return false;
        unsigned cp = c & (0x3F >> extra);
        for (std::size_t k = 1; k <= extra; ++k) {
            if ((s[i + k] & 0xC0) != 0x80) return false;
            cp = (cp << 6) | (s[i + k] & 0x3F);
        }
        if (cp < cp_min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
        i += extra + 1;
    }
    return true;
}

namespace {

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
           static_cast<unsigned char>(c) >= 0x80;
}

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
           static_cast<unsigned char>(c) >= 0x80;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::string lowered(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

class Lexer {
public:
    Lexer(const std::string& text, Language lang, const KeywordTable& keywords)
        : text_(text), lang_(lang), keywords_(keywords) {}

    TokenSequence run() {
        TokenSequence seq;
        while (pos_ < text_.size()) {
            if (skip_space_and_comments()) continue;
            if (pos_ >= text_.size()) break;
            seq.tokens.push_back(next_token());
        }
        return seq;
    }

private:
    const std::string& text_;
    Language lang_;
    const KeywordTable& keywords_;
    std::size_t pos_ = 0;
    int line_ = 1;

    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }

    void advance(std::size_t n = 1) {
        for (std::size_t k = 0; k < n && pos_ < text_.size(); ++k) {
            if (text_[pos_] == '\n') ++line_;
            ++pos_;
        }
    }

    bool skip_space_and_comments() {
        char c = peek();
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v') {
            advance();
            return true;
        }
        if (lang_ == Language::Cpp) {
            if (c == '/' && peek(1) == '/') {
                while (pos_ < text_.size() && peek() != '\n') advance();
                return true;
            }
            if (c == '/' && peek(1) == '*') {
                advance(2);
                while (pos_ < text_.size() && !(peek() == '*' && peek(1) == '/')) advance();
                advance(2);
                return true;
            }
        } else {
            if (c == '!') {
                while (pos_ < text_.size() && peek() != '\n') advance();
                return true;
            }
        }
        return false;
    }

    Token make(std::size_t start, int line, TokenKind kind) {
        Token t;
        t.lexeme = text_.substr(start, pos_ - start);
        t.kind = kind;
        t.offset = start;
        t.length = pos_ - start;
        t.line = line;
        return t;
    }

    Token next_token() {
        return lang_ == Language::Cpp ? next_cpp() : next_fortran();
    }

    Token lex_string(char quote) {
        std::size_t start = pos_;
        int line = line_;
        advance();
        while (pos_ < text_.size()) {
            char c = peek();
            if (lang_ == Language::Cpp && c == '\\') {
                advance(2);
                continue;
            }
            if (c == quote) {
                // Fortran escapes a quote by doubling it.
                if (lang_ == Language::Fortran && peek(1) == quote) {
                    advance(2);
                    continue;
                }
                advance();
                break;
            }
            if (c == '\n') break; // unterminated literal: stop at the line end
            advance();
        }
        return make(start, line, TokenKind::Literal);
    }

    Token lex_number() {
        std::size_t start = pos_;
        int line = line_;
        bool hex = peek() == '0' && (peek(1) == 'x' || peek(1) == 'X');
        if (hex) advance(2);
        while (pos_ < text_.size()) {
            char c = peek();
            if (is_digit(c) || (hex && std::isxdigit(static_cast<unsigned char>(c)))) {
                advance();
            } else if (c == '\'' && lang_ == Language::Cpp && is_digit(peek(1))) {
                advance(); // digit separator
            } else if (c == '.' && is_digit(peek(1))) {
                advance();
            } else if (c == '.' && !hex) {
                // trailing dot: only part of the number when not starting a
                // dot-operator (Fortran ".and.") or member access
                char after = peek(1);
                if (lang_ == Language::Fortran &&
                    std::isalpha(static_cast<unsigned char>(after))) {
                    // "1.eq." style: leave the dot for the next token
                    break;
                }
                if (is_ident_start(after)) break;
                advance();
            } else if ((c == 'e' || c == 'E' || (!hex && lang_ == Language::Fortran && (c == 'd' || c == 'D'))) &&
                       (is_digit(peek(1)) ||
                        ((peek(1) == '+' || peek(1) == '-') && is_digit(peek(2))))) {
                advance(2);
            } else if ((c == 'p' || c == 'P') && hex &&
                       (is_digit(peek(1)) ||
                        ((peek(1) == '+' || peek(1) == '-') && is_digit(peek(2))))) {
                advance(2);
            } else if (lang_ == Language::Cpp &&
                       (c == 'f' || c == 'F' || c == 'l' || c == 'L' || c == 'u' || c == 'U')) {
                advance();
            } else if (lang_ == Language::Fortran && c == '_' && is_ident_char(peek(1))) {
                advance(); // kind suffix: 1_ik
                while (pos_ < text_.size() && is_ident_char(peek())) advance();
                break;
            } else {
                break;
            }
        }
        return make(start, line, TokenKind::Literal);
    }

    Token lex_identifier() {
        std::size_t start = pos_;
        int line = line_;
        while (pos_ < text_.size() && is_ident_char(peek())) advance();
        std::string word = text_.substr(start, pos_ - start);
        bool kw = lang_ == Language::Cpp ? keywords_.count(word) > 0
                                         : keywords_.count(lowered(word)) > 0;
        return make(start, line, kw ? TokenKind::Keyword : TokenKind::Identifier);
    }

    Token next_cpp() {
        char c = peek();
        if (c == '"' || c == '\'') return lex_string(c);
        if (is_digit(c) || (c == '.' && is_digit(peek(1)))) return lex_number();
        if (is_ident_start(c)) return lex_identifier();

        static const char* three[] = {"<<=", ">>=", "->*", "...", "<=>"};
        static const char* two[] = {"::", "->", "++", "--", "<<", ">>", "<=", ">=",
                                    "==", "!=", "&&", "||", "+=", "-=", "*=", "/=",
                                    "%=", "&=", "|=", "^=", "##"};
        std::size_t start = pos_;
        int line = line_;
        for (const char* op : three) {
            if (text_.compare(pos_, 3, op) == 0) {
                advance(3);
                return make(start, line, TokenKind::Operator);
            }
        }
        for (const char* op : two) {
            if (text_.compare(pos_, 2, op) == 0) {
                advance(2);
                return make(start, line, TokenKind::Operator);
            }
        }
        advance();
        switch (c) {
            case ';': case ',': case '(': case ')': case '{': case '}':
            case '[': case ']': case '#':
                return make(start, line, TokenKind::Punct);
            case '+': case '-': case '*': case '/': case '%': case '<':
            case '>': case '=': case '!': case '&': case '|': case '^':
            case '~': case '.': case '?': case ':':
                return make(start, line, TokenKind::Operator);
            default:
                return make(start, line, TokenKind::Other);
        }
    }

    Token next_fortran() {
        char c = peek();
        if (c == '"' || c == '\'') return lex_string(c);
        if (is_digit(c) || (c == '.' && is_digit(peek(1)))) return lex_number();
        if (c == '.') {
            // dot operator: .and. .eq. .true. ...
            std::size_t j = pos_ + 1;
            while (j < text_.size() && std::isalpha(static_cast<unsigned char>(text_[j]))) ++j;
            if (j > pos_ + 1 && j < text_.size() && text_[j] == '.') {
                std::size_t start = pos_;
                int line = line_;
                advance(j + 1 - pos_);
                std::string word = lowered(text_.substr(start, pos_ - start));
                bool boolean = word == ".true." || word == ".false.";
                return make(start, line, boolean ? TokenKind::Literal : TokenKind::Operator);
            }
        }
        if (is_ident_start(c)) return lex_identifier();

        static const char* two[] = {"**", "//", "==", "/=", "<=", ">=", "=>", "::"};
        std::size_t start = pos_;
        int line = line_;
        for (const char* op : two) {
            if (text_.compare(pos_, 2, op) == 0) {
                advance(2);
                return make(start, line, TokenKind::Operator);
            }
        }
        advance();
        switch (c) {
            case ';': case ',': case '(': case ')': case '[': case ']':
                return make(start, line, TokenKind::Punct);
            case '+': case '-': case '*': case '/': case '<': case '>':
            case '=': case ':': case '%': case '&': case '.':
                return make(start, line, TokenKind::Operator);
            default:
                return make(start, line, TokenKind::Other);
        }
    }
};

bool whitespace_only(const std::string& text) {
    return std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

} // namespace

TokenSequence tokenize(const CodeSnippet& snippet, const KeywordTable& keywords) {
    if (snippet.text.empty() || whitespace_only(snippet.text))
        fail(ErrorCode::EmptyInput, "snippet '" + snippet.id + "' has no content");
    if (!is_valid_utf8(snippet.text))
        fail(ErrorCode::MalformedEncoding, "snippet '" + snippet.id + "' is not valid UTF-8");
    return Lexer(snippet.text, snippet.language, keywords).run();
}

TokenSequence tokenize(const CodeSnippet& snippet) {
    return tokenize(snippet, snippet.language == Language::Cpp ? cpp_keywords()
                                                               : fortran_keywords());
}

} // namespace codealign
