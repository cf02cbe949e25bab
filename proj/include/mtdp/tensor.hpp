#pragma once

#include <cstddef>
#include <vector>

namespace mtdp {

/// Dense 1-D array of doubles.
struct Vec {
    std::vector<double> data;

    Vec() = default;
    explicit Vec(size_t n, double fill = 0.0) : data(n, fill) {}
    Vec(std::initializer_list<double> init) : data(init) {}

    size_t size() const { return data.size(); }
    double& operator[](size_t i) { return data[i]; }
    double operator[](size_t i) const { return data[i]; }

    bool operator==(const Vec&) const = default;
};

/// Dense row-major matrix of doubles.
struct Mat {
    size_t rows = 0;
    size_t cols = 0;
    std::vector<double> data;

    Mat() = default;
    Mat(size_t r, size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& at(size_t r, size_t c) { return data[r * cols + c]; }
    double at(size_t r, size_t c) const { return data[r * cols + c]; }

    double* row(size_t r) { return data.data() + r * cols; }
    const double* row(size_t r) const { return data.data() + r * cols; }

    bool operator==(const Mat&) const = default;
};

/// Dense rank-3 tensor, d0-major layout. Holds stacked per-filter feature maps.
struct Ten3 {
    size_t d0 = 0;
    size_t d1 = 0;
    size_t d2 = 0;
    std::vector<double> data;

    Ten3() = default;
    Ten3(size_t a, size_t b, size_t c, double fill = 0.0)
        : d0(a), d1(b), d2(c), data(a * b * c, fill) {}

    double& at(size_t i, size_t j, size_t k) { return data[(i * d1 + j) * d2 + k]; }
    double at(size_t i, size_t j, size_t k) const { return data[(i * d1 + j) * d2 + k]; }
};

/// Result of a rectangular max scan: the value and where it was found.
struct WindowMax {
    double value = 0.0;
    size_t row = 0;
    size_t col = 0;
};

/// out[i] = sum_j m[i,j] * v[j]. Throws std::invalid_argument on shape mismatch.
Vec matvec(const Mat& m, const Vec& v);

/// Elementwise tanh.
Vec tanh_map(const Vec& v);

/// Numerically stable softmax (max-subtracted). v must be nonempty.
Vec softmax(const Vec& v);

/// Max over the half-open rectangle [r0,r1) x [c0,c1) of m, with its argmax
/// position. Ties resolve to the first occurrence in row-major order.
/// Throws std::invalid_argument on an empty or out-of-range window.
WindowMax window_max(const Mat& m, size_t r0, size_t r1, size_t c0, size_t c1);

bool all_finite(const Vec& v);
bool all_finite(const Mat& m);

}  // namespace mtdp
