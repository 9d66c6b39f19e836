#pragma once

#include <cstdint>
#include <string>

#include "codealign/linalg.hpp"
#include "codealign/similarity.hpp"
#include "codealign/token.hpp"

namespace codealign {

struct Temperature {
    double tau = 0.1;
};

struct EmbeddingDims {
    std::size_t feature_dim = 512; // D: hashed n-gram features
    std::size_t hidden_dim = 512;  // h
    std::size_t output_dim = 256;  // d
};

// Frozen featurizer: signed hashed bag of token 1..3-grams, L2-normalized.
// Deterministic, comment- and whitespace-invariant (it sees tokens only).
Vec featurize(const CodeSnippet& snippet, std::size_t feature_dim = 512);
Vec featurize_tokens(const TokenSequence& tokens, std::size_t feature_dim = 512);

// Trainable two-layer projection: out = W2 tanh(W1 f + b1) + b2.
// `version` increments once per optimizer step; retrieval indexes check it.
class ProjectionHead {
public:
    ProjectionHead() = default;
    ProjectionHead(Mat w1, Vec b1, Mat w2, Vec b2);

    static ProjectionHead identity(const EmbeddingDims& dims = {});
    static ProjectionHead random_init(const EmbeddingDims& dims, std::uint64_t seed);

    Vec apply(const Vec& features) const;

    std::size_t feature_dim() const { return w1_.cols; }
    std::size_t hidden_dim() const { return w1_.rows; }
    std::size_t output_dim() const { return w2_.rows; }

    std::uint64_t version() const { return version_; }
    void bump_version() { ++version_; }
    void set_version(std::uint64_t v) { version_ = v; }

    Mat& w1() { return w1_; }
    Vec& b1() { return b1_; }
    Mat& w2() { return w2_; }
    Vec& b2() { return b2_; }
    const Mat& w1() const { return w1_; }
    const Vec& b1() const { return b1_; }
    const Mat& w2() const { return w2_; }
    const Vec& b2() const { return b2_; }

    std::size_t parameter_count() const;

    void save(const std::string& path) const;
    static ProjectionHead load(const std::string& path);

    bool equals_bitwise(const ProjectionHead& other) const;

private:
    Mat w1_;
    Vec b1_;
    Mat w2_;
    Vec b2_;
    std::uint64_t version_ = 0;
};

Vec embed(const ProjectionHead& head, const CodeSnippet& snippet);

// values[i][j] = cos(v_i, v_j) / tau; exactly symmetric, diagonal 1/tau.
// OpenMP kernel; bitwise equal to the serial variant.
SimilarityMatrix scaled_cosine_matrix(const std::vector<Vec>& vectors, Temperature tau);
SimilarityMatrix scaled_cosine_matrix_serial(const std::vector<Vec>& vectors, Temperature tau);

} // namespace codealign
