#include "codealign/codebleu.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <unordered_map>

#include "codealign/error.hpp"
#include "codealign/lexer.hpp"

namespace codealign {

namespace {

constexpr double kEpsilon = 1e-9;

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;

// Rolling hash key for an n-gram of lexemes plus a keyword flag.
struct NgramStats {
    double count = 0;       // raw occurrences in the candidate
    double ref_count = 0;   // raw occurrences in the reference
    bool has_keyword = false;
};

using NgramMap = std::unordered_map<std::uint64_t, NgramStats>;

std::uint64_t ngram_key(const std::vector<Token>& toks, std::size_t start, int n) {
    std::uint64_t h = kFnvOffset;
    for (int k = 0; k < n; ++k) {
        const std::string& lex = toks[start + k].lexeme;
        h = fnv1a(h, lex.data(), lex.size());
        h = fnv1a(h, "\x1f", 1);
    }
    return h;
}

bool ngram_has_keyword(const std::vector<Token>& toks, std::size_t start, int n) {
    for (int k = 0; k < n; ++k)
        if (toks[start + k].kind == TokenKind::Keyword) return true;
    return false;
}

double brevity_penalty(std::size_t cand_len, std::size_t ref_len) {
    if (cand_len >= ref_len) return 1.0;
    return std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(cand_len));
}

double bleu_core(const TokenSequence& candidate, const TokenSequence& reference,
                 double keyword_weight, int max_n) {
    const auto& cand = candidate.tokens;
    const auto& ref = reference.tokens;
    if (cand.empty() || ref.empty())
        fail(ErrorCode::EmptyInput, "n-gram match requires non-empty token sequences");
    if (max_n < 1) fail(ErrorCode::InvalidArgument, "max_n must be >= 1");

    double log_sum = 0.0;
    for (int n = 1; n <= max_n; ++n) {
        NgramMap grams;
        if (cand.size() >= static_cast<std::size_t>(n)) {
            for (std::size_t i = 0; i + n <= cand.size(); ++i) {
                auto& st = grams[ngram_key(cand, i, n)];
                if (st.count == 0) st.has_keyword = ngram_has_keyword(cand, i, n);
                st.count += 1;
            }
        }
        if (ref.size() >= static_cast<std::size_t>(n)) {
            for (std::size_t i = 0; i + n <= ref.size(); ++i) {
                auto it = grams.find(ngram_key(ref, i, n));
                if (it != grams.end()) it->second.ref_count += 1;
            }
        }
        double matched = 0.0;
        double total = 0.0;
        for (const auto& [key, st] : grams) {
            double w = st.has_keyword ? keyword_weight : 1.0;
            total += w * st.count;
            matched += w * std::min(st.count, st.ref_count);
        }
        double precision;
        if (matched > 0.0) {
            precision = matched / total;
        } else {
            // add-epsilon smoothing on zero-match orders
            precision = kEpsilon / (total + kEpsilon);
        }
        log_sum += std::log(precision);
    }
    double geo_mean = std::exp(log_sum / max_n);
    double score = geo_mean * brevity_penalty(cand.size(), ref.size());
    return std::clamp(score, 0.0, 1.0);
}

void collect_subtree_hashes(const SyntaxTree& tree, int node,
                            std::map<std::uint64_t, long>& out, std::uint64_t* hash_out) {
    const auto& nd = tree.node(node);
    std::uint64_t h = fnv1a(kFnvOffset, nd.label, std::strlen(nd.label));
    for (int c : nd.children) {
        std::uint64_t ch = 0;
        collect_subtree_hashes(tree, c, out, &ch);
        h = fnv1a(h, &ch, sizeof ch);
    }
    if (!nd.children.empty()) out[h] += 1; // depth >= 1 only
    if (hash_out) *hash_out = h;
}

std::map<std::uint64_t, long> subtree_multiset(const SyntaxTree& tree) {
    std::map<std::uint64_t, long> out;
    if (tree.size() > 0) collect_subtree_hashes(tree, tree.root(), out, nullptr);
    return out;
}

std::optional<double> syntax_match_multisets(const std::map<std::uint64_t, long>& cand,
                                             const std::map<std::uint64_t, long>& ref) {
    long total = 0;
    long matched = 0;
    for (const auto& [h, c] : cand) {
        total += c;
        auto it = ref.find(h);
        if (it != ref.end()) matched += std::min(c, it->second);
    }
    if (total == 0) return std::nullopt;
    return static_cast<double>(matched) / static_cast<double>(total);
}

std::optional<double> dataflow_match_pairs(
    const std::vector<std::pair<std::string, std::string>>& cand_pairs,
    const std::vector<std::pair<std::string, std::string>>& ref_pairs) {
    if (ref_pairs.empty()) return std::nullopt;
    if (cand_pairs.empty()) return 0.0;
    std::map<std::pair<std::string, std::string>, long> ref_counts;
    for (const auto& p : ref_pairs) ref_counts[p] += 1;
    long matched = 0;
    for (const auto& p : cand_pairs) {
        auto it = ref_counts.find(p);
        if (it != ref_counts.end() && it->second > 0) {
            ++matched;
            --it->second;
        }
    }
    return static_cast<double>(matched) / static_cast<double>(cand_pairs.size());
}

} // namespace

double ngram_match(const TokenSequence& candidate, const TokenSequence& reference, int max_n) {
    return bleu_core(candidate, reference, 1.0, max_n);
}

double weighted_ngram_match(const TokenSequence& candidate, const TokenSequence& reference,
                            double keyword_weight, int max_n) {
    if (keyword_weight < 1.0)
        fail(ErrorCode::InvalidArgument, "keyword_weight must be >= 1");
    return bleu_core(candidate, reference, keyword_weight, max_n);
}

std::optional<double> syntax_match(const SyntaxTree& candidate, const SyntaxTree& reference) {
    return syntax_match_multisets(subtree_multiset(candidate), subtree_multiset(reference));
}

std::optional<double> dataflow_match(const DataflowGraph& candidate,
                                     const DataflowGraph& reference) {
    return dataflow_match_pairs(candidate.edge_name_pairs(), reference.edge_name_pairs());
}

AnalyzedSnippet analyze_snippet(const CodeSnippet& snippet) {
    if (snippet.language != Language::Cpp)
        fail(ErrorCode::UnsupportedLanguage, "CodeBLEU scores C++ snippets only");
    AnalyzedSnippet out;
    out.id = snippet.id;
    out.tokens = tokenize(snippet);
    out.tree = parse_cpp_tokens(out.tokens, snippet.text.size());
    out.dataflow = extract_dataflow(out.tree, out.tokens);
    out.text_size = snippet.text.size();
    return out;
}

double combine_components(const ComponentWeights& weights, const CodeBleuScore& components) {
    double num = 0.0;
    double den = 0.0;
    if (components.ngram) {
        num += weights.alpha * *components.ngram;
        den += weights.alpha;
    }
    if (components.weighted_ngram) {
        num += weights.beta * *components.weighted_ngram;
        den += weights.beta;
    }
    if (components.syntax) {
        num += weights.gamma * *components.syntax;
        den += weights.gamma;
    }
    if (components.semantic) {
        num += weights.delta * *components.semantic;
        den += weights.delta;
    }
    if (den <= 0.0) return 0.0;
    return num / den;
}

CodeBleuScore codebleu(const AnalyzedSnippet& candidate, const AnalyzedSnippet& reference,
                       const MetricOptions& opts) {
    CodeBleuScore score;
    if (!candidate.tokens.empty() && !reference.tokens.empty()) {
        score.ngram = ngram_match(candidate.tokens, reference.tokens, opts.max_n);
        score.weighted_ngram = weighted_ngram_match(candidate.tokens, reference.tokens,
                                                    opts.keyword_weight, opts.max_n);
    }
    score.syntax = syntax_match(candidate.tree, reference.tree);
    score.semantic = dataflow_match(candidate.dataflow, reference.dataflow);
    score.total = combine_components(opts.weights, score);
    return score;
}

CodeBleuScore codebleu(const CodeSnippet& candidate, const CodeSnippet& reference,
                       const MetricOptions& opts) {
    return codebleu(analyze_snippet(candidate), analyze_snippet(reference), opts);
}

namespace {

SimilarityMatrix pairwise_from_analyses(const std::vector<AnalyzedSnippet>& analyses,
                                        const MetricOptions& opts, bool parallel) {
    const std::size_t n = analyses.size();
    SimilarityMatrix m(n, MatrixKind::CodeBleu);
    const long total = static_cast<long>(n * n);
#pragma omp parallel for schedule(dynamic, 8) if (parallel)
    for (long cell = 0; cell < total; ++cell) {
        std::size_t i = static_cast<std::size_t>(cell) / n;
        std::size_t j = static_cast<std::size_t>(cell) % n;
        m.at(i, j) = i == j ? 1.0 : codebleu(analyses[i], analyses[j], opts).total;
    }
    if (opts.symmetrize) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                double v = 0.5 * (m.at(i, j) + m.at(j, i));
                m.at(i, j) = v;
                m.at(j, i) = v;
            }
    }
    return m;
}

std::vector<AnalyzedSnippet> analyze_all(const std::vector<CodeSnippet>& snippets) {
    if (snippets.size() < 2)
        fail(ErrorCode::EmptyInput, "pairwise matrix requires at least 2 snippets");
    std::vector<AnalyzedSnippet> analyses(snippets.size());
    for (std::size_t i = 0; i < snippets.size(); ++i) analyses[i] = analyze_snippet(snippets[i]);
    return analyses;
}

} // namespace

SimilarityMatrix pairwise_matrix(const std::vector<CodeSnippet>& snippets,
                                 const MetricOptions& opts) {
    return pairwise_from_analyses(analyze_all(snippets), opts, true);
}

SimilarityMatrix pairwise_matrix_serial(const std::vector<CodeSnippet>& snippets,
                                        const MetricOptions& opts) {
    return pairwise_from_analyses(analyze_all(snippets), opts, false);
}

} // namespace codealign
