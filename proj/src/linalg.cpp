#include "codealign/linalg.hpp"

#include <cmath>

namespace codealign {

Vec matvec(const Mat& m, const Vec& x) {
    Vec y(m.rows, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i) {
        double acc = 0.0;
        const double* row = m.a.data() + i * m.cols;
        for (std::size_t j = 0; j < m.cols; ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
    return y;
}

double dot(const Vec& x, const Vec& y) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
    return acc;
}

double norm2(const Vec& x) { return std::sqrt(dot(x, x)); }

double cosine(const Vec& x, const Vec& y) {
    double nx = norm2(x);
    double ny = norm2(y);
    if (nx == 0.0 || ny == 0.0) return 0.0;
    return dot(x, y) / (nx * ny);
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97f4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace

Rng::Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    state_[0] = splitmix64(s);
    state_[1] = splitmix64(s);
}

std::uint64_t Rng::next_u64() {
    // xorshift128+
    std::uint64_t x = state_[0];
    const std::uint64_t y = state_[1];
    state_[0] = y;
    x ^= x << 23;
    state_[1] = x ^ y ^ (x >> 17) ^ (y >> 26);
    return state_[1] + y;
}

double Rng::next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::next_gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = 0.0;
    do {
        u1 = next_uniform();
    } while (u1 <= 0.0);
    double u2 = next_uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
}

std::size_t Rng::next_below(std::size_t n) {
    return n == 0 ? 0 : static_cast<std::size_t>(next_u64() % n);
}

} // namespace codealign
