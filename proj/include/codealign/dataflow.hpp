#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "codealign/ast.hpp"
#include "codealign/token.hpp"

namespace codealign {

// Variable occurrences with comes-from edges: each use points at the
// nearest preceding assignment or declaration of the same name. The
// analysis is intra-procedural and scope-approximate (last write wins per
// name, no aliasing).
struct DataflowGraph {
    struct Occurrence {
        std::string name;
        int index = 0; // per-name occurrence counter, 0-based
    };
    struct Edge {
        int use = 0; // indices into nodes
        int def = 0;
    };

    std::vector<Occurrence> nodes;
    std::vector<Edge> edges;

    // Multiset of (use name, def name) pairs, sorted; the unit of
    // dataflow matching.
    std::vector<std::pair<std::string, std::string>> edge_name_pairs() const;
};

DataflowGraph extract_dataflow(const SyntaxTree& tree, const TokenSequence& tokens);

// Convenience: tokenize + parse + extract in one call.
DataflowGraph extract_dataflow(const CodeSnippet& snippet);

} // namespace codealign
