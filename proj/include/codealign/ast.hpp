#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "codealign/token.hpp"

namespace codealign {

// Rooted ordered tree over the token stream. Node 0 is always the root
// ("translation_unit"); labels are stable grammar-rule names.
class SyntaxTree {
public:
    struct Node {
        const char* label;
        int parent = -1;
        std::size_t begin = 0; // byte span into the source
        std::size_t end = 0;
        std::string op; // operator lexeme for assignment nodes; not hashed
        std::vector<int> children;
    };

    int root() const { return 0; }
    std::size_t size() const { return nodes_.size(); }
    const Node& node(int i) const { return nodes_[i]; }
    const char* label(int i) const { return nodes_[i].label; }
    const std::vector<int>& children(int i) const { return nodes_[i].children; }

    std::size_t count_label(const char* label) const;
    std::size_t error_count() const { return count_label("error"); }

    // Structural hash of the subtree at `i`: node labels only, order
    // preserved, source text ignored. Stable across runs and platforms.
    std::uint64_t subtree_hash(int i) const;

    // parent == -1 creates a detached node; reparent links it later.
    int add_node(const char* label, int parent, std::size_t begin, std::size_t end);
    void reparent(int child, int parent);
    void set_op(int i, std::string op) { nodes_[i].op = std::move(op); }
    void set_span(int i, std::size_t begin, std::size_t end) {
        nodes_[i].begin = begin;
        nodes_[i].end = end;
    }

private:
    std::vector<Node> nodes_;
};

// Parses C++ source into a SyntaxTree. Never throws on malformed code:
// unparseable regions become "error" nodes and parsing resumes at the next
// statement boundary. Throws UnsupportedLanguage when the snippet is not
// C++ and propagates lexer errors (EmptyInput, MalformedEncoding).
SyntaxTree parse_ast(const CodeSnippet& snippet);
SyntaxTree parse_cpp_tokens(const TokenSequence& tokens, std::size_t text_size);

} // namespace codealign
