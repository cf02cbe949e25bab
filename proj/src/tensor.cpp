#include "mtdp/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mtdp {

Vec matvec(const Mat& m, const Vec& v) {
    if (m.cols != v.size()) {
        throw std::invalid_argument("matvec: shape mismatch, matrix cols " +
                                    std::to_string(m.cols) + " vs vector length " +
                                    std::to_string(v.size()));
    }
    Vec out(m.rows);
    for (size_t i = 0; i < m.rows; ++i) {
        const double* row = m.row(i);
        double acc = 0.0;
        for (size_t j = 0; j < m.cols; ++j) acc += row[j] * v[j];
        out[i] = acc;
    }
    return out;
}

Vec tanh_map(const Vec& v) {
    Vec out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = std::tanh(v[i]);
    return out;
}

Vec softmax(const Vec& v) {
    if (v.size() == 0) throw std::invalid_argument("softmax: empty input");
    double mx = *std::max_element(v.data.begin(), v.data.end());
    Vec out(v.size());
    double sum = 0.0;
    for (size_t i = 0; i < v.size(); ++i) {
        out[i] = std::exp(v[i] - mx);
        sum += out[i];
    }
    for (size_t i = 0; i < v.size(); ++i) out[i] /= sum;
    return out;
}

WindowMax window_max(const Mat& m, size_t r0, size_t r1, size_t c0, size_t c1) {
    if (r0 >= r1 || c0 >= c1 || r1 > m.rows || c1 > m.cols) {
        throw std::invalid_argument("window_max: empty or out-of-range window [" +
                                    std::to_string(r0) + "," + std::to_string(r1) + ")x[" +
                                    std::to_string(c0) + "," + std::to_string(c1) + ") on " +
                                    std::to_string(m.rows) + "x" + std::to_string(m.cols));
    }
    WindowMax best{m.at(r0, c0), r0, c0};
    for (size_t r = r0; r < r1; ++r) {
        for (size_t c = c0; c < c1; ++c) {
            if (m.at(r, c) > best.value) best = {m.at(r, c), r, c};
        }
    }
    return best;
}

bool all_finite(const Vec& v) {
    for (double x : v.data)
        if (!std::isfinite(x)) return false;
    return true;
}

bool all_finite(const Mat& m) {
    for (double x : m.data)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace mtdp
