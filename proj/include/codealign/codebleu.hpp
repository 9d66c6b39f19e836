#pragma once

#include <optional>
#include <vector>

#include "codealign/ast.hpp"
#include "codealign/dataflow.hpp"
#include "codealign/similarity.hpp"
#include "codealign/token.hpp"

namespace codealign {

// Relative weights of the four metric components; normalized over the
// components that are present for a given pair.
struct ComponentWeights {
    double alpha = 0.25; // n-gram match
    double beta = 0.25;  // keyword-weighted n-gram match
    double gamma = 0.25; // syntax subtree match
    double delta = 0.25; // dataflow match
};

struct MetricOptions {
    ComponentWeights weights;
    int max_n = 4;
    double keyword_weight = 5.0;
    bool symmetrize = false; // pairwise matrix: average S and S^T
};

struct CodeBleuScore {
    double total = 0.0;
    std::optional<double> ngram;
    std::optional<double> weighted_ngram;
    std::optional<double> syntax;
    std::optional<double> semantic;
};

// Modified n-gram precision BLEU over token lexemes with add-epsilon
// smoothing on zero-match orders and brevity penalty
// min(1, exp(1 - |ref|/|cand|)).
double ngram_match(const TokenSequence& candidate, const TokenSequence& reference,
                   int max_n = 4);

// As ngram_match, but every n-gram containing at least one Keyword token
// counts keyword_weight times in both the clipped matches and the totals.
double weighted_ngram_match(const TokenSequence& candidate, const TokenSequence& reference,
                            double keyword_weight = 5.0, int max_n = 4);

// Fraction of candidate subtrees (depth >= 1, structural label hash) found
// in the reference subtree multiset, with multiplicity. nullopt when the
// candidate has no qualifying subtree.
std::optional<double> syntax_match(const SyntaxTree& candidate, const SyntaxTree& reference);

// Fraction of candidate edges whose (use,def) name pair occurs in the
// reference edge multiset. nullopt when the reference has no edges.
std::optional<double> dataflow_match(const DataflowGraph& candidate,
                                     const DataflowGraph& reference);

// Per-snippet analysis cached for matrix computation.
struct AnalyzedSnippet {
    std::string id;
    TokenSequence tokens;
    SyntaxTree tree;
    DataflowGraph dataflow;
    std::size_t text_size = 0;
};

AnalyzedSnippet analyze_snippet(const CodeSnippet& snippet);

CodeBleuScore codebleu(const CodeSnippet& candidate, const CodeSnippet& reference,
                       const MetricOptions& opts = {});
CodeBleuScore codebleu(const AnalyzedSnippet& candidate, const AnalyzedSnippet& reference,
                       const MetricOptions& opts = {});

// Directed pairwise matrix: values[i][j] = codebleu(snippet_i, snippet_j).
// The OpenMP build evaluates cells in parallel; results are bitwise equal
// to pairwise_matrix_serial for any schedule.
SimilarityMatrix pairwise_matrix(const std::vector<CodeSnippet>& snippets,
                                 const MetricOptions& opts = {});
SimilarityMatrix pairwise_matrix_serial(const std::vector<CodeSnippet>& snippets,
                                        const MetricOptions& opts = {});

// Weighted combination over present components (weights renormalized).
double combine_components(const ComponentWeights& weights, const CodeBleuScore& components);

} // namespace codealign
