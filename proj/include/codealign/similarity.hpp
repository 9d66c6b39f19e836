#pragma once

#include <cstddef>
#include <vector>

namespace codealign {

enum class MatrixKind { CodeBleu, ScaledCosine };

// Dense N x N score matrix. CodeBleu entries live in [0,1] with a unit
// diagonal; ScaledCosine entries live in [-1/tau, 1/tau].
struct SimilarityMatrix {
    std::size_t n = 0;
    std::vector<double> values; // row-major
    MatrixKind kind = MatrixKind::CodeBleu;

    SimilarityMatrix() = default;
    SimilarityMatrix(std::size_t size, MatrixKind k)
        : n(size), values(size * size, 0.0), kind(k) {}

    double& at(std::size_t i, std::size_t j) { return values[i * n + j]; }
    double at(std::size_t i, std::size_t j) const { return values[i * n + j]; }
};

} // namespace codealign
