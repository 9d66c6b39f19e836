#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

namespace codealign {

using Vec = std::vector<double>;

// Row-major dense matrix, just big enough for the projection head math.
struct Mat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

    double& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

// y = M x
Vec matvec(const Mat& m, const Vec& x);

double dot(const Vec& x, const Vec& y);
double norm2(const Vec& x);
double cosine(const Vec& x, const Vec& y);

// xorshift-based generator with splitmix64 seeding; identical streams on
// every platform, unlike the distributions in <random>.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();
    double next_uniform();              // [0, 1)
    double next_gaussian();             // Box-Muller
    std::size_t next_below(std::size_t n);

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = next_below(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t state_[2];
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace codealign
