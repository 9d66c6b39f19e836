#include "codealign/ast.hpp"

#include <cstring>

#include "codealign/error.hpp"
#include "codealign/lexer.hpp"

namespace codealign {

namespace {

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;

} // namespace

std::size_t SyntaxTree::count_label(const char* label) const {
    std::size_t n = 0;
    for (const auto& node : nodes_)
        if (std::strcmp(node.label, label) == 0) ++n;
    return n;
}

std::uint64_t SyntaxTree::subtree_hash(int i) const {
    const Node& nd = nodes_[i];
    std::uint64_t h = fnv1a(kFnvOffset, nd.label, std::strlen(nd.label));
    for (int c : nd.children) {
        std::uint64_t ch = subtree_hash(c);
        h = fnv1a(h, &ch, sizeof ch);
    }
    return h;
}

int SyntaxTree::add_node(const char* label, int parent, std::size_t begin, std::size_t end) {
    Node nd;
    nd.label = label;
    nd.parent = parent;
    nd.begin = begin;
    nd.end = end;
    int idx = static_cast<int>(nodes_.size());
    nodes_.push_back(std::move(nd));
    if (parent >= 0) nodes_[parent].children.push_back(idx);
    return idx;
}

void SyntaxTree::reparent(int child, int parent) {
    nodes_[child].parent = parent;
    nodes_[parent].children.push_back(child);
}

namespace {

constexpr const char* kTranslationUnit = "translation_unit";
constexpr const char* kPreproc = "preproc_directive";
constexpr const char* kFunctionDefinition = "function_definition";
constexpr const char* kParameterList = "parameter_list";
constexpr const char* kParameter = "parameter";
constexpr const char* kCompound = "compound_statement";
constexpr const char* kDeclaration = "declaration";
constexpr const char* kInitDeclarator = "init_declarator";
constexpr const char* kArrayDeclarator = "array_declarator";
constexpr const char* kInitializerList = "initializer_list";
constexpr const char* kIf = "if_statement";
constexpr const char* kFor = "for_statement";
constexpr const char* kWhile = "while_statement";
constexpr const char* kDoWhile = "do_statement";
constexpr const char* kSwitch = "switch_statement";
constexpr const char* kCaseClause = "case_clause";
constexpr const char* kReturn = "return_statement";
constexpr const char* kBreak = "break_statement";
constexpr const char* kContinue = "continue_statement";
constexpr const char* kGoto = "goto_statement";
constexpr const char* kExprStatement = "expression_statement";
constexpr const char* kEmptyStatement = "empty_statement";
constexpr const char* kUsing = "using_declaration";
constexpr const char* kNamespace = "namespace_definition";
constexpr const char* kStructSpecifier = "struct_specifier";
constexpr const char* kEnumSpecifier = "enum_specifier";
constexpr const char* kAccessSpecifier = "access_specifier";
constexpr const char* kTemplateDecl = "template_declaration";
constexpr const char* kAssignment = "assignment_expression";
constexpr const char* kConditional = "conditional_expression";
constexpr const char* kBinary = "binary_expression";
constexpr const char* kUnary = "unary_expression";
constexpr const char* kUpdate = "update_expression";
constexpr const char* kCast = "cast_expression";
constexpr const char* kCall = "call_expression";
constexpr const char* kSubscript = "subscript_expression";
constexpr const char* kMember = "member_expression";
constexpr const char* kParen = "parenthesized_expression";
constexpr const char* kComma = "comma_expression";
constexpr const char* kIdentifier = "identifier";
constexpr const char* kQualifiedIdentifier = "qualified_identifier";
constexpr const char* kNumber = "number_literal";
constexpr const char* kString = "string_literal";
constexpr const char* kBoolLiteral = "bool_literal";
constexpr const char* kNullLiteral = "null_literal";
constexpr const char* kTypeSpecifier = "type_specifier";
constexpr const char* kRangeClause = "range_clause";
constexpr const char* kLambda = "lambda_expression";
constexpr const char* kError = "error";

const KeywordTable& type_start_keywords() {
    static const KeywordTable kw = {
        "void", "bool", "char", "char8_t", "char16_t", "char32_t", "wchar_t",
        "short", "int", "long", "float", "double", "signed", "unsigned",
        "const", "constexpr", "consteval", "constinit", "volatile", "static",
        "extern", "register", "inline", "mutable", "auto", "struct", "class",
        "enum", "union", "typename", "thread_local",
    };
    return kw;
}

bool is_type_keyword(const Token& t) {
    return t.kind == TokenKind::Keyword && type_start_keywords().count(t.lexeme) > 0;
}

class Parser {
public:
    Parser(const TokenSequence& tokens, std::size_t text_size)
        : toks_(tokens.tokens), text_size_(text_size) {}

    SyntaxTree parse() {
        int root = tree_.add_node(kTranslationUnit, -1, 0, text_size_);
        while (!at_end()) {
            std::size_t before = pos_;
            parse_external(root);
            if (pos_ == before) {
                tree_.add_node(kError, root, tok_begin(pos_), tok_end(pos_));
                ++pos_;
            }
        }
        return std::move(tree_);
    }

private:
    const std::vector<Token>& toks_;
    std::size_t text_size_;
    SyntaxTree tree_;
    std::size_t pos_ = 0;
    int depth_ = 0;
    static constexpr int kMaxDepth = 160;

    struct DepthGuard {
        Parser& p;
        bool ok;
        explicit DepthGuard(Parser& parser) : p(parser), ok(++p.depth_ <= kMaxDepth) {}
        ~DepthGuard() { --p.depth_; }
    };

    bool at_end() const { return pos_ >= toks_.size(); }
    const Token& cur() const { return toks_[pos_]; }

    bool peek_is(const char* lex, std::size_t ahead = 0) const {
        return pos_ + ahead < toks_.size() && toks_[pos_ + ahead].lexeme == lex;
    }

    bool peek_kind(TokenKind k, std::size_t ahead = 0) const {
        return pos_ + ahead < toks_.size() && toks_[pos_ + ahead].kind == k;
    }

    std::size_t tok_begin(std::size_t i) const {
        if (toks_.empty()) return 0;
        if (i >= toks_.size()) return toks_.back().offset + toks_.back().length;
        return toks_[i].offset;
    }

    std::size_t tok_end(std::size_t i) const {
        if (toks_.empty()) return 0;
        if (i >= toks_.size()) i = toks_.size() - 1;
        return toks_[i].offset + toks_[i].length;
    }

    void close_span(int node, std::size_t begin_tok) {
        std::size_t end_tok = pos_ == 0 ? 0 : pos_ - 1;
        tree_.set_span(node, tok_begin(begin_tok), tok_end(end_tok));
    }

    bool eat(const char* lex) {
        if (peek_is(lex)) {
            ++pos_;
            return true;
        }
        return false;
    }

    // Skips to a statement boundary after a parse failure; the skipped
    // region becomes an "error" node. Consumes a ';' sync token.
    void recover(int parent, std::size_t start_tok) {
        int brace = 0;
        int paren = 0;
        while (!at_end()) {
            const std::string& l = cur().lexeme;
            if (l == "(") ++paren;
            else if (l == ")") {
                if (paren == 0 && brace == 0) break;
                if (paren > 0) --paren;
            } else if (l == "{") ++brace;
            else if (l == "}") {
                if (brace == 0) break;
                --brace;
            } else if (l == ";" && brace == 0 && paren == 0) {
                ++pos_;
                break;
            }
            ++pos_;
        }
        std::size_t end_tok = pos_ == 0 ? start_tok : pos_ - 1;
        if (pos_ <= start_tok) end_tok = start_tok;
        tree_.add_node(kError, parent, tok_begin(start_tok), tok_end(end_tok));
    }

    void parse_preproc(int parent) {
        std::size_t start = pos_;
        int line = cur().line;
        ++pos_; // '#'
        while (!at_end() && cur().line == line) ++pos_;
        tree_.add_node(kPreproc, parent, tok_begin(start), tok_end(pos_ - 1));
    }

    void parse_external(int parent) {
        DepthGuard guard(*this);
        if (!guard.ok) {
            recover(parent, pos_);
            return;
        }
        if (peek_is("#")) { parse_preproc(parent); return; }
        if (peek_is("using") || peek_is("typedef")) { parse_using(parent); return; }
        if (peek_is("namespace")) { parse_namespace(parent); return; }
        if (peek_is("template")) { parse_template(parent); return; }
        if (peek_is(";")) {
            std::size_t start = pos_++;
            tree_.add_node(kEmptyStatement, parent, tok_begin(start), tok_end(start));
            return;
        }
        if (try_parse_struct(parent)) return;
        if (try_parse_declaration_or_function(parent)) return;
        parse_statement(parent);
    }

    void parse_using(int parent) {
        std::size_t start = pos_;
        while (!at_end() && !peek_is(";") && !peek_is("}")) ++pos_;
        eat(";");
        tree_.add_node(kUsing, parent, tok_begin(start), tok_end(pos_ - 1));
    }

    void parse_namespace(int parent) {
        std::size_t start = pos_;
        ++pos_;
        int node = tree_.add_node(kNamespace, parent, tok_begin(start), tok_begin(start));
        while (peek_kind(TokenKind::Identifier) || peek_is("::")) ++pos_;
        if (eat("{")) {
            while (!at_end() && !peek_is("}")) {
                std::size_t before = pos_;
                parse_external(node);
                if (pos_ == before) ++pos_;
            }
            eat("}");
        } else {
            recover(node, pos_);
        }
        close_span(node, start);
    }

    void parse_template(int parent) {
        std::size_t start = pos_;
        ++pos_;
        int node = tree_.add_node(kTemplateDecl, parent, tok_begin(start), tok_begin(start));
        if (peek_is("<")) skip_angle_brackets();
        if (!at_end()) {
            if (!try_parse_struct(node) && !try_parse_declaration_or_function(node))
                recover(node, pos_);
        }
        close_span(node, start);
    }

    // struct/class/union/enum with a body; plain "struct Foo x;" falls back
    // to the declaration path.
    bool try_parse_struct(int parent) {
        if (!(peek_is("struct") || peek_is("class") || peek_is("union") || peek_is("enum")))
            return false;
        std::size_t save = pos_;
        bool is_enum = peek_is("enum");
        ++pos_;
        if (is_enum && (peek_is("class") || peek_is("struct"))) ++pos_;
        if (peek_kind(TokenKind::Identifier)) ++pos_;
        if (peek_is(":")) { // base clause / enum underlying type
            ++pos_;
            while (!at_end() && !peek_is("{") && !peek_is(";")) ++pos_;
        }
        if (!peek_is("{")) {
            pos_ = save;
            return false;
        }
        std::size_t start = save;
        if (is_enum) {
            // enum body kept opaque
            int depth = 0;
            do {
                if (peek_is("{")) ++depth;
                else if (peek_is("}")) --depth;
                ++pos_;
            } while (!at_end() && depth > 0);
            while (!at_end() && !peek_is(";")) ++pos_;
            eat(";");
            tree_.add_node(kEnumSpecifier, parent, tok_begin(start), tok_end(pos_ - 1));
            return true;
        }
        int node = tree_.add_node(kStructSpecifier, parent, tok_begin(start), tok_begin(start));
        ++pos_; // '{'
        while (!at_end() && !peek_is("}")) {
            std::size_t before = pos_;
            parse_external(node);
            if (pos_ == before) ++pos_;
        }
        eat("}");
        while (!at_end() && !peek_is(";")) ++pos_; // trailing declarators kept opaque
        eat(";");
        close_span(node, start);
        return true;
    }

    // --- declarations -------------------------------------------------------

    bool looks_like_declaration() const {
        if (at_end()) return false;
        const Token& t = cur();
        if (is_type_keyword(t)) return true;
        if (t.kind != TokenKind::Identifier) return false;
        std::size_t i = pos_;
        while (i + 1 < toks_.size() && toks_[i].kind == TokenKind::Identifier &&
               toks_[i + 1].lexeme == "::") {
            i += 2;
        }
        if (i >= toks_.size() || toks_[i].kind != TokenKind::Identifier) return false;
        std::size_t j = i + 1;
        if (j < toks_.size() && toks_[j].lexeme == "<") {
            int angle = 1;
            ++j;
            std::size_t guard = 0;
            while (j < toks_.size() && angle > 0 && guard < 64) {
                const std::string& l = toks_[j].lexeme;
                if (l == "<") ++angle;
                else if (l == ">") --angle;
                else if (l == ">>") angle -= 2;
                else if (l == ";" || l == "{") return false;
                ++j;
                ++guard;
            }
            if (angle > 0) return false;
        }
        while (j < toks_.size() && (toks_[j].lexeme == "*" || toks_[j].lexeme == "&")) ++j;
        return j < toks_.size() && toks_[j].kind == TokenKind::Identifier;
    }

    bool parse_specifiers() {
        bool any = false;
        while (!at_end()) {
            const Token& t = cur();
            if (is_type_keyword(t)) {
                if (t.lexeme == "struct" || t.lexeme == "class" || t.lexeme == "enum" ||
                    t.lexeme == "union") {
                    ++pos_;
                    if (peek_kind(TokenKind::Identifier)) ++pos_;
                    any = true;
                    continue;
                }
                ++pos_;
                any = true;
                continue;
            }
            if (!any && t.kind == TokenKind::Identifier) {
                ++pos_;
                while (peek_is("::") && peek_kind(TokenKind::Identifier, 1)) pos_ += 2;
                if (peek_is("<")) skip_angle_brackets();
                any = true;
                continue;
            }
            break;
        }
        return any;
    }

    void skip_angle_brackets() {
        int angle = 0;
        std::size_t guard = 0;
        do {
            if (peek_is("<")) ++angle;
            else if (peek_is(">")) --angle;
            else if (peek_is(">>")) angle -= 2;
            ++pos_;
            ++guard;
        } while (!at_end() && angle > 0 && guard < 128);
    }

    bool parse_init_declarator(int parent) {
        std::size_t start = pos_;
        while (peek_is("*") || peek_is("&") || peek_is("const")) ++pos_;
        if (!peek_kind(TokenKind::Identifier)) return false;
        int node = tree_.add_node(kInitDeclarator, parent, tok_begin(start), tok_begin(start));
        tree_.add_node(kIdentifier, node, tok_begin(pos_), tok_end(pos_));
        ++pos_;
        while (peek_is("[")) {
            std::size_t bstart = pos_;
            ++pos_;
            int arr = tree_.add_node(kArrayDeclarator, node, tok_begin(bstart), tok_begin(bstart));
            if (!peek_is("]")) {
                if (!parse_expression(arr, /*allow_comma=*/false)) recover(arr, pos_);
            }
            eat("]");
            close_span(arr, bstart);
        }
        if (eat("=")) {
            if (peek_is("{")) {
                parse_initializer_list(node);
            } else if (!parse_expression(node, /*allow_comma=*/false)) {
                recover(node, pos_);
            }
        } else if (peek_is("{")) {
            parse_initializer_list(node);
        } else if (peek_is("(")) {
            std::size_t cstart = pos_;
            ++pos_;
            int call = tree_.add_node(kCall, node, tok_begin(cstart), tok_begin(cstart));
            parse_argument_list(call);
            close_span(call, cstart);
        }
        close_span(node, start);
        return true;
    }

    void parse_initializer_list(int parent) {
        DepthGuard guard(*this);
        std::size_t start = pos_;
        ++pos_; // '{'
        int node = tree_.add_node(kInitializerList, parent, tok_begin(start), tok_begin(start));
        if (!guard.ok) {
            recover(node, pos_);
            close_span(node, start);
            return;
        }
        while (!at_end() && !peek_is("}")) {
            std::size_t before = pos_;
            if (peek_is("{")) {
                parse_initializer_list(node);
            } else if (!parse_expression(node, /*allow_comma=*/false)) {
                recover(node, pos_);
            }
            if (!eat(",") && !peek_is("}")) {
                if (pos_ == before) break;
            }
        }
        eat("}");
        close_span(node, start);
    }

    bool try_parse_declaration_or_function(int parent) {
        if (at_end()) return false;
        if (!looks_like_declaration() && !is_type_keyword(cur())) return false;
        std::size_t start = pos_;
        std::size_t save = pos_;
        if (!parse_specifiers()) {
            pos_ = save;
            return false;
        }
        while (peek_is("*") || peek_is("&")) ++pos_;
        if (!peek_kind(TokenKind::Identifier)) {
            pos_ = save;
            return false;
        }
        std::size_t name_tok = pos_;
        ++pos_;
        if (peek_is("(")) {
            int node = tree_.add_node(kFunctionDefinition, parent, tok_begin(start),
                                      tok_begin(start));
            tree_.add_node(kIdentifier, node, tok_begin(name_tok), tok_end(name_tok));
            parse_parameter_list(node);
            while (peek_is("const") || peek_is("noexcept") || peek_is("override")) ++pos_;
            if (peek_is("{")) {
                parse_compound(node);
            } else if (!eat(";")) {
                recover(node, pos_);
            }
            close_span(node, start);
            return true;
        }
        pos_ = name_tok;
        int node = tree_.add_node(kDeclaration, parent, tok_begin(start), tok_begin(start));
        bool first = true;
        while (true) {
            if (!parse_init_declarator(node)) {
                if (first) {
                    recover(node, pos_);
                    close_span(node, start);
                    return true;
                }
                break;
            }
            first = false;
            if (!eat(",")) break;
        }
        if (!eat(";")) recover(node, pos_);
        close_span(node, start);
        return true;
    }

    void parse_parameter_list(int parent) {
        std::size_t start = pos_;
        ++pos_; // '('
        int node = tree_.add_node(kParameterList, parent, tok_begin(start), tok_begin(start));
        while (!at_end() && !peek_is(")")) {
            std::size_t before = pos_;
            parse_parameter(node);
            if (!eat(",") && !peek_is(")")) {
                if (pos_ == before) {
                    recover(node, pos_);
                    break;
                }
            }
        }
        eat(")");
        close_span(node, start);
    }

    void parse_parameter(int parent) {
        std::size_t start = pos_;
        int node = tree_.add_node(kParameter, parent, tok_begin(start), tok_begin(start));
        parse_specifiers();
        while (peek_is("*") || peek_is("&")) ++pos_;
        if (peek_kind(TokenKind::Identifier)) {
            tree_.add_node(kIdentifier, node, tok_begin(pos_), tok_end(pos_));
            ++pos_;
        }
        while (peek_is("[")) {
            ++pos_;
            while (!at_end() && !peek_is("]") && !peek_is(")") && !peek_is(",")) ++pos_;
            eat("]");
        }
        if (eat("=")) parse_expression(node, /*allow_comma=*/false);
        close_span(node, start);
    }

    // --- statements ---------------------------------------------------------

    void parse_compound(int parent) {
        std::size_t start = pos_;
        ++pos_; // '{'
        int node = tree_.add_node(kCompound, parent, tok_begin(start), tok_begin(start));
        while (!at_end() && !peek_is("}")) {
            std::size_t before = pos_;
            parse_statement(node);
            if (pos_ == before) {
                recover(node, pos_);
                if (pos_ == before) ++pos_;
            }
        }
        eat("}");
        close_span(node, start);
    }

    void parse_statement(int parent) {
        DepthGuard guard(*this);
        if (at_end()) return;
        if (!guard.ok) {
            recover(parent, pos_);
            return;
        }
        const std::string& l = cur().lexeme;
        if (l == "#") { parse_preproc(parent); return; }
        if (l == "{") { parse_compound(parent); return; }
        if (l == "if") { parse_if(parent); return; }
        if (l == "for") { parse_for(parent); return; }
        if (l == "while") { parse_while(parent); return; }
        if (l == "do") { parse_do(parent); return; }
        if (l == "switch") { parse_switch(parent); return; }
        if (l == "return") { parse_return(parent); return; }
        if (l == "break" || l == "continue") {
            std::size_t start = pos_++;
            eat(";");
            tree_.add_node(l == "break" ? kBreak : kContinue, parent, tok_begin(start),
                           tok_end(pos_ - 1));
            return;
        }
        if (l == "goto") {
            std::size_t start = pos_++;
            if (peek_kind(TokenKind::Identifier)) ++pos_;
            eat(";");
            tree_.add_node(kGoto, parent, tok_begin(start), tok_end(pos_ - 1));
            return;
        }
        if (l == "case" || l == "default") { parse_case(parent); return; }
        if (l == "using" || l == "typedef") { parse_using(parent); return; }
        if ((l == "public" || l == "private" || l == "protected") && peek_is(":", 1)) {
            std::size_t start = pos_;
            pos_ += 2;
            tree_.add_node(kAccessSpecifier, parent, tok_begin(start), tok_end(pos_ - 1));
            return;
        }
        if (l == ";") {
            std::size_t start = pos_++;
            tree_.add_node(kEmptyStatement, parent, tok_begin(start), tok_end(start));
            return;
        }
        if (try_parse_struct(parent)) return;
        if (try_parse_declaration_or_function(parent)) return;
        parse_expression_statement(parent);
    }

    void parse_if(int parent) {
        std::size_t start = pos_;
        ++pos_;
        int node = tree_.add_node(kIf, parent, tok_begin(start), tok_begin(start));
        if (eat("(")) {
            if (!parse_expression(node, /*allow_comma=*/true)) recover(node, pos_);
            eat(")");
        } else {
            recover(node, pos_);
        }
        parse_statement(node);
        if (eat("else")) parse_statement(node);
        close_span(node, start);
    }

    // Detects "for (decl : range)" by scanning for ':' before ';'/')' at
    // depth zero inside the header.
    bool header_is_range_for() const {
        std::size_t i = pos_;
        int paren = 0;
        std::size_t guard = 0;
        while (i < toks_.size() && guard < 256) {
            const std::string& l = toks_[i].lexeme;
            if (l == "(") ++paren;
            else if (l == ")") {
                if (paren == 0) return false;
                --paren;
            } else if (l == ";") {
                if (paren == 0) return false;
            } else if (l == ":" && paren == 0) {
                return true;
            } else if (l == "::") {
                // qualifier, not a range clause
            }
            ++i;
            ++guard;
        }
        return false;
    }

    void parse_for(int parent) {
        std::size_t start = pos_;
        ++pos_;
        int node = tree_.add_node(kFor, parent, tok_begin(start), tok_begin(start));
        if (eat("(")) {
            if (header_is_range_for()) {
                std::size_t rstart = pos_;
                int range = tree_.add_node(kRangeClause, node, tok_begin(rstart), tok_begin(rstart));
                while (!at_end() && !peek_is(":")) ++pos_;
                eat(":");
                if (!parse_expression(range, /*allow_comma=*/false)) recover(range, pos_);
                eat(")");
                close_span(range, rstart);
            } else {
                if (!eat(";")) {
                    if (!try_parse_declaration_or_function(node)) {
                        if (parse_expression(node, /*allow_comma=*/true)) eat(";");
                        else recover(node, pos_);
                    }
                }
                if (!peek_is(";")) {
                    if (!peek_is(")")) parse_expression(node, /*allow_comma=*/true);
                }
                eat(";");
                if (!peek_is(")")) parse_expression(node, /*allow_comma=*/true);
                eat(")");
            }
        } else {
            recover(node, pos_);
        }
        parse_statement(node);
        close_span(node, start);
    }

    void parse_while(int parent) {
        std::size_t start = pos_;
        ++pos_;
        int node = tree_.add_node(kWhile, parent, tok_begin(start), tok_begin(start));
        if (eat("(")) {
            if (!parse_expression(node, /*allow_comma=*/true)) recover(node, pos_);
            eat(")");
        } else {
            recover(node, pos_);
        }
        parse_statement(node);
        close_span(node, start);
    }

    void parse_do(int parent) {
        std::size_t start = pos_;
        ++pos_;
        int node = tree_.add_node(kDoWhile, parent, tok_begin(start), tok_begin(start));
        parse_statement(node);
        if (eat("while")) {
            if (eat("(")) {
                parse_expression(node, /*allow_comma=*/true);
                eat(")");
            }
            eat(";");
        } else {
            recover(node, pos_);
        }
        close_span(node, start);
    }

    void parse_switch(int parent) {
        std::size_t start = pos_;
        ++pos_;
        int node = tree_.add_node(kSwitch, parent, tok_begin(start), tok_begin(start));
        if (eat("(")) {
            parse_expression(node, /*allow_comma=*/true);
            eat(")");
        }
        if (peek_is("{")) parse_compound(node);
        else recover(node, pos_);
        close_span(node, start);
    }

    void parse_case(int parent) {
        std::size_t start = pos_;
        bool is_default = cur().lexeme == "default";
        ++pos_;
        int node = tree_.add_node(kCaseClause, parent, tok_begin(start), tok_begin(start));
        if (!is_default) parse_expression(node, /*allow_comma=*/false);
        eat(":");
        close_span(node, start);
    }

    void parse_return(int parent) {
        std::size_t start = pos_;
        ++pos_;
        int node = tree_.add_node(kReturn, parent, tok_begin(start), tok_begin(start));
        if (!peek_is(";")) {
            if (!parse_expression(node, /*allow_comma=*/true)) recover(node, pos_);
        }
        eat(";");
        close_span(node, start);
    }

    void parse_expression_statement(int parent) {
        std::size_t start = pos_;
        int node = tree_.add_node(kExprStatement, parent, tok_begin(start), tok_begin(start));
        if (!parse_expression(node, /*allow_comma=*/true)) {
            recover(node, start);
            close_span(node, start);
            return;
        }
        if (!eat(";")) recover(node, pos_);
        close_span(node, start);
    }

    // --- expressions ----------------------------------------------------------

    // Adds exactly one child to `parent` on success.
    bool parse_expression(int parent, bool allow_comma) {
        DepthGuard guard(*this);
        if (!guard.ok || at_end()) return false;
        int expr = parse_assignment();
        if (expr < 0) return false;
        if (allow_comma && peek_is(",")) {
            std::size_t begin = tree_.node(expr).begin;
            int comma = tree_.add_node(kComma, parent, begin, begin);
            tree_.reparent(expr, comma);
            while (eat(",")) {
                int rhs = parse_assignment();
                if (rhs < 0) break;
                tree_.reparent(rhs, comma);
            }
            tree_.set_span(comma, begin, tok_end(pos_ == 0 ? 0 : pos_ - 1));
            return true;
        }
        tree_.reparent(expr, parent);
        return true;
    }

    int detached(const char* label, std::size_t begin_tok) {
        return tree_.add_node(label, -1, tok_begin(begin_tok), tok_begin(begin_tok));
    }

    int parse_assignment() {
        std::size_t start = pos_;
        int lhs = parse_conditional();
        if (lhs < 0) return -1;
        static const char* assign_ops[] = {"=",  "+=", "-=", "*=", "/=",  "%=",
                                           "&=", "|=", "^=", "<<=", ">>="};
        for (const char* op : assign_ops) {
            if (peek_is(op)) {
                ++pos_;
                int rhs = parse_assignment();
                int node = detached(kAssignment, start);
                tree_.set_op(node, op);
                tree_.reparent(lhs, node);
                if (rhs >= 0) tree_.reparent(rhs, node);
                else tree_.add_node(kError, node, tok_begin(pos_), tok_end(pos_));
                tree_.set_span(node, tok_begin(start), tok_end(pos_ == 0 ? 0 : pos_ - 1));
                return node;
            }
        }
        return lhs;
    }

    int parse_conditional() {
        std::size_t start = pos_;
        int cond = parse_binary(0);
        if (cond < 0) return -1;
        if (peek_is("?")) {
            ++pos_;
            int node = detached(kConditional, start);
            tree_.reparent(cond, node);
            int then_e = parse_assignment();
            if (then_e >= 0) tree_.reparent(then_e, node);
            eat(":");
            int else_e = parse_assignment();
            if (else_e >= 0) tree_.reparent(else_e, node);
            tree_.set_span(node, tok_begin(start), tok_end(pos_ - 1));
            return node;
        }
        return cond;
    }

    static int binary_precedence(const std::string& op) {
        if (op == "||" || op == "or") return 1;
        if (op == "&&" || op == "and") return 2;
        if (op == "|") return 3;
        if (op == "^") return 4;
        if (op == "&") return 5;
        if (op == "==" || op == "!=") return 6;
        if (op == "<" || op == ">" || op == "<=" || op == ">=" || op == "<=>") return 7;
        if (op == "<<" || op == ">>") return 8;
        if (op == "+" || op == "-") return 9;
        if (op == "*" || op == "/" || op == "%") return 10;
        return -1;
    }

    int parse_binary(int min_prec) {
        std::size_t start = pos_;
        int lhs = parse_unary();
        if (lhs < 0) return -1;
        while (!at_end()) {
            int prec = binary_precedence(cur().lexeme);
            if (prec < 0 || prec < min_prec) break;
            ++pos_;
            int rhs = parse_binary(prec + 1);
            int node = detached(kBinary, start);
            tree_.reparent(lhs, node);
            if (rhs >= 0) {
                tree_.reparent(rhs, node);
            } else {
                tree_.add_node(kError, node, tok_begin(pos_), tok_end(pos_));
                tree_.set_span(node, tok_begin(start), tok_end(pos_ == 0 ? 0 : pos_ - 1));
                return node;
            }
            tree_.set_span(node, tok_begin(start), tok_end(pos_ - 1));
            lhs = node;
        }
        return lhs;
    }

    int parse_unary() {
        DepthGuard guard(*this);
        if (!guard.ok || at_end()) return -1;
        std::size_t start = pos_;
        const std::string& l = cur().lexeme;
        if (l == "++" || l == "--") {
            ++pos_;
            int operand = parse_unary();
            int node = detached(kUpdate, start);
            if (operand >= 0) tree_.reparent(operand, node);
            tree_.set_span(node, tok_begin(start), tok_end(pos_ - 1));
            return node;
        }
        if (l == "+" || l == "-" || l == "!" || l == "~" || l == "*" || l == "&" ||
            l == "not" || l == "compl") {
            ++pos_;
            int operand = parse_unary();
            if (operand < 0) {
                pos_ = start;
                return -1;
            }
            int node = detached(kUnary, start);
            tree_.reparent(operand, node);
            tree_.set_span(node, tok_begin(start), tok_end(pos_ - 1));
            return node;
        }
        if (l == "sizeof" || l == "new" || l == "delete" || l == "throw") {
            ++pos_;
            int operand = parse_unary();
            int node = detached(kUnary, start);
            if (operand >= 0) tree_.reparent(operand, node);
            tree_.set_span(node, tok_begin(start), tok_end(pos_ - 1));
            return node;
        }
        if (l == "(" && pos_ + 1 < toks_.size() && is_type_keyword(toks_[pos_ + 1])) {
            std::size_t save = pos_;
            ++pos_;
            if (parse_specifiers()) {
                while (peek_is("*") || peek_is("&")) ++pos_;
                if (eat(")")) {
                    int operand = parse_unary();
                    if (operand >= 0) {
                        int node = detached(kCast, start);
                        tree_.reparent(operand, node);
                        tree_.set_span(node, tok_begin(start), tok_end(pos_ - 1));
                        return node;
                    }
                }
            }
            pos_ = save;
        }
        return parse_postfix();
    }

    int parse_postfix() {
        std::size_t start = pos_;
        int expr = parse_primary();
        if (expr < 0) return -1;
        std::size_t guard = 0;
        while (!at_end() && guard++ < 4096) {
            if (peek_is("(")) {
                ++pos_;
                int node = detached(kCall, start);
                tree_.reparent(expr, node);
                parse_argument_list(node);
                tree_.set_span(node, tok_begin(start), tok_end(pos_ - 1));
                expr = node;
            } else if (peek_is("[")) {
                ++pos_;
                int node = detached(kSubscript, start);
                tree_.reparent(expr, node);
                if (!peek_is("]")) parse_expression(node, /*allow_comma=*/false);
                eat("]");
                tree_.set_span(node, tok_begin(start), tok_end(pos_ - 1));
                expr = node;
            } else if (peek_is(".") || peek_is("->")) {
                ++pos_;
                int node = detached(kMember, start);
                tree_.reparent(expr, node);
                if (peek_kind(TokenKind::Identifier) || peek_kind(TokenKind::Keyword)) {
                    tree_.add_node(kIdentifier, node, tok_begin(pos_), tok_end(pos_));
                    ++pos_;
                }
                tree_.set_span(node, tok_begin(start), tok_end(pos_ - 1));
                expr = node;
            } else if (peek_is("++") || peek_is("--")) {
                ++pos_;
                int node = detached(kUpdate, start);
                tree_.reparent(expr, node);
                tree_.set_span(node, tok_begin(start), tok_end(pos_ - 1));
                expr = node;
            } else {
                break;
            }
        }
        return expr;
    }

    void parse_argument_list(int call_node) {
        while (!at_end() && !peek_is(")")) {
            std::size_t before = pos_;
            if (!parse_expression(call_node, /*allow_comma=*/false)) {
                recover(call_node, pos_);
                break;
            }
            if (!eat(",") && !peek_is(")")) {
                if (pos_ == before) break;
            }
        }
        eat(")");
    }

    int leaf(const char* label, std::size_t begin_tok) {
        return tree_.add_node(label, -1, tok_begin(begin_tok), tok_end(pos_ - 1));
    }

    int parse_primary() {
        if (at_end()) return -1;
        std::size_t start = pos_;
        const Token& t = cur();
        if (t.lexeme == "(") {
            ++pos_;
            int node = detached(kParen, start);
            if (!parse_expression(node, /*allow_comma=*/true)) {
                tree_.add_node(kError, node, tok_begin(pos_), tok_end(pos_));
            }
            eat(")");
            tree_.set_span(node, tok_begin(start), tok_end(pos_ - 1));
            return node;
        }
        if (t.lexeme == "[") {
            ++pos_;
            while (!at_end() && !peek_is("]")) ++pos_;
            eat("]");
            int node = detached(kLambda, start);
            if (peek_is("(")) {
                int depth = 1;
                ++pos_;
                std::size_t guard = 0;
                while (!at_end() && depth > 0 && guard++ < 4096) {
                    if (peek_is("(")) ++depth;
                    else if (peek_is(")")) --depth;
                    ++pos_;
                }
            }
            if (peek_is("{")) parse_compound(node);
            tree_.set_span(node, tok_begin(start), tok_end(pos_ - 1));
            return node;
        }
        if (t.lexeme == "true" || t.lexeme == "false") {
            ++pos_;
            return leaf(kBoolLiteral, start);
        }
        if (t.lexeme == "nullptr") {
            ++pos_;
            return leaf(kNullLiteral, start);
        }
        if (t.kind == TokenKind::Literal) {
            ++pos_;
            bool is_string = !t.lexeme.empty() && (t.lexeme[0] == '"' || t.lexeme[0] == '\'');
            return leaf(is_string ? kString : kNumber, start);
        }
        if (t.kind == TokenKind::Identifier || t.lexeme == "this" || t.lexeme == "operator") {
            ++pos_;
            bool qualified = false;
            while (peek_is("::") &&
                   (peek_kind(TokenKind::Identifier, 1) || peek_kind(TokenKind::Keyword, 1))) {
                pos_ += 2;
                qualified = true;
            }
            if (peek_is("<")) {
                std::size_t save = pos_;
                skip_angle_brackets();
                if (peek_is("(")) qualified = true;
                else pos_ = save;
            }
            return leaf(qualified ? kQualifiedIdentifier : kIdentifier, start);
        }
        if (is_type_keyword(t) && peek_is("(", 1)) {
            ++pos_;
            return leaf(kTypeSpecifier, start); // functional cast: int(x)
        }
        return -1;
    }
};

} // namespace

SyntaxTree parse_cpp_tokens(const TokenSequence& tokens, std::size_t text_size) {
    return Parser(tokens, text_size).parse();
}

SyntaxTree parse_ast(const CodeSnippet& snippet) {
    if (snippet.language != Language::Cpp)
        fail(ErrorCode::UnsupportedLanguage,
             "AST construction is only supported for C++ (got " +
                 std::string(language_name(snippet.language)) + ")");
    TokenSequence tokens = tokenize(snippet);
    return parse_cpp_tokens(tokens, snippet.text.size());
}

} // namespace codealign
