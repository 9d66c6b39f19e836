#include "codealign/dataflow.hpp"

#include <algorithm>
#include <cstring>
#include <map>

#include "codealign/lexer.hpp"

namespace codealign {

std::vector<std::pair<std::string, std::string>> DataflowGraph::edge_name_pairs() const {
    std::vector<std::pair<std::string, std::string>> pairs;
    pairs.reserve(edges.size());
    for (const Edge& e : edges)
        pairs.emplace_back(nodes[e.use].name, nodes[e.def].name);
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

namespace {

bool label_is(const SyntaxTree& t, int i, const char* label) {
    return std::strcmp(t.label(i), label) == 0;
}

class DataflowBuilder {
public:
    DataflowBuilder(const SyntaxTree& tree, const TokenSequence& tokens)
        : tree_(tree), tokens_(tokens) {}

    DataflowGraph build() {
        if (tree_.size() > 0) visit(tree_.root());
        return std::move(graph_);
    }

private:
    const SyntaxTree& tree_;
    const TokenSequence& tokens_;
    DataflowGraph graph_;
    std::map<std::string, int> occurrence_count_;
    std::map<std::string, int> last_def_; // name -> node index in graph_

    // Joins the token lexemes covered by the node span; identifier leaves
    // are single tokens, qualified names concatenate ("std::cout").
    std::string span_text(int node) const {
        const auto& nd = tree_.node(node);
        std::string out;
        for (const Token& t : tokens_.tokens) {
            if (t.offset >= nd.begin && t.offset + t.length <= nd.end) out += t.lexeme;
            if (t.offset >= nd.end) break;
        }
        return out;
    }

    int add_occurrence(const std::string& name) {
        int idx = static_cast<int>(graph_.nodes.size());
        graph_.nodes.push_back({name, occurrence_count_[name]++});
        return idx;
    }

    void record_use(const std::string& name) {
        int use = add_occurrence(name);
        auto it = last_def_.find(name);
        if (it != last_def_.end()) graph_.edges.push_back({use, it->second});
    }

    void record_def(const std::string& name) {
        int def = add_occurrence(name);
        last_def_[name] = def;
    }

    bool is_identifier_node(int i) const {
        return label_is(tree_, i, "identifier") || label_is(tree_, i, "qualified_identifier");
    }

    // Visits an expression subtree, recording every identifier as a use.
    void visit_uses(int i) {
        if (is_identifier_node(i)) {
            record_use(span_text(i));
            return;
        }
        if (label_is(tree_, i, "member_expression")) {
            const auto& ch = tree_.children(i);
            if (!ch.empty()) visit_uses(ch[0]); // member name itself is not a variable
            return;
        }
        if (label_is(tree_, i, "assignment_expression")) {
            visit_assignment(i);
            return;
        }
        for (int c : tree_.children(i)) visit_uses(c);
    }

    void visit_assignment(int i) {
        const auto& ch = tree_.children(i);
        if (ch.size() < 2) {
            for (int c : ch) visit_uses(c);
            return;
        }
        int lhs = ch[0];
        // evaluation order: right-hand side first
        for (std::size_t k = 1; k < ch.size(); ++k) visit_uses(ch[k]);
        const std::string& op = tree_.node(i).op;
        bool compound = !op.empty() && op != "=";
        if (is_identifier_node(lhs)) {
            std::string name = span_text(lhs);
            if (compound) record_use(name);
            record_def(name);
        } else if (label_is(tree_, lhs, "subscript_expression") ||
                   label_is(tree_, lhs, "member_expression")) {
            // x[i] = v defines x and reads i
            const auto& lch = tree_.children(lhs);
            for (std::size_t k = 1; k < lch.size(); ++k) visit_uses(lch[k]);
            if (!lch.empty() && is_identifier_node(lch[0])) {
                std::string name = span_text(lch[0]);
                if (compound) record_use(name);
                record_def(name);
            } else if (!lch.empty()) {
                visit_uses(lch[0]);
            }
        } else {
            visit_uses(lhs);
        }
    }

    void visit_declaration(int i) {
        for (int c : tree_.children(i)) {
            if (!label_is(tree_, c, "init_declarator")) continue;
            const auto& ch = tree_.children(c);
            if (ch.empty()) continue;
            int name_node = ch[0];
            // array sizes and initializers are uses, evaluated before the
            // declared name becomes visible as a definition
            for (std::size_t k = 1; k < ch.size(); ++k) visit_uses(ch[k]);
            if (is_identifier_node(name_node)) record_def(span_text(name_node));
        }
    }

    void visit_parameter(int i) {
        for (int c : tree_.children(i))
            if (is_identifier_node(c)) record_def(span_text(c));
    }

    void visit(int i) {
        const char* label = tree_.label(i);
        if (std::strcmp(label, "preproc_directive") == 0) return;
        if (std::strcmp(label, "declaration") == 0) {
            visit_declaration(i);
            return;
        }
        if (std::strcmp(label, "parameter") == 0) {
            visit_parameter(i);
            return;
        }
        if (std::strcmp(label, "function_definition") == 0) {
            const auto& ch = tree_.children(i);
            for (std::size_t k = 0; k < ch.size(); ++k) {
                if (k == 0 && is_identifier_node(ch[k])) continue; // function name
                visit(ch[k]);
            }
            return;
        }
        if (std::strcmp(label, "assignment_expression") == 0) {
            visit_assignment(i);
            return;
        }
        if (std::strcmp(label, "update_expression") == 0 ||
            std::strcmp(label, "binary_expression") == 0 ||
            std::strcmp(label, "unary_expression") == 0 ||
            std::strcmp(label, "call_expression") == 0 ||
            std::strcmp(label, "subscript_expression") == 0 ||
            std::strcmp(label, "member_expression") == 0 ||
            std::strcmp(label, "conditional_expression") == 0 ||
            std::strcmp(label, "cast_expression") == 0 ||
            std::strcmp(label, "parenthesized_expression") == 0 ||
            std::strcmp(label, "comma_expression") == 0 ||
            std::strcmp(label, "identifier") == 0 ||
            std::strcmp(label, "qualified_identifier") == 0) {
            visit_uses(i);
            return;
        }
        for (int c : tree_.children(i)) visit(c);
    }
};

} // namespace

DataflowGraph extract_dataflow(const SyntaxTree& tree, const TokenSequence& tokens) {
    return DataflowBuilder(tree, tokens).build();
}

DataflowGraph extract_dataflow(const CodeSnippet& snippet) {
    TokenSequence tokens = tokenize(snippet);
    SyntaxTree tree = parse_cpp_tokens(tokens, snippet.text.size());
    return extract_dataflow(tree, tokens);
}

} // namespace codealign
