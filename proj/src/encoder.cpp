#include "mtdp/encoder.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mtdp {

EncoderParams init_encoder(size_t window, size_t pool, size_t filter_count, size_t dim,
                           Rng& rng) {
    if (window == 0 || pool == 0 || filter_count == 0 || dim == 0) {
        throw std::invalid_argument("init_encoder: all dimensions must be >= 1");
    }
    EncoderParams p;
    p.window = window;
    p.pool = pool;
    p.filter_count = filter_count;
    p.filters = Mat(filter_count, 2 * window * dim);
    p.bias = Vec(filter_count);
    double r = std::sqrt(6.0 / (static_cast<double>(2 * window * dim) + 1.0));
    for (double& w : p.filters.data) w = rng.uniform(-r, r);
    return p;
}

std::vector<std::string> pad_tokens(std::vector<std::string> tokens, size_t window,
                                    size_t pool) {
    size_t need = window + pool - 1;
    while (tokens.size() < need) tokens.push_back(kPadToken);
    return tokens;
}

FeatureMap convolve_pair(const Mat& a1, const Mat& a2, const EncoderParams& params) {
    const size_t h = params.window;
    const size_t dim = params.dim();
    if (a1.cols != a2.cols || a1.cols != dim) {
        throw std::invalid_argument("convolve_pair: embedding dim mismatch (" +
                                    std::to_string(a1.cols) + ", " + std::to_string(a2.cols) +
                                    ") vs filter dim " + std::to_string(dim));
    }
    if (a1.rows < h || a2.rows < h) {
        throw std::invalid_argument("convolve_pair: argument shorter than window " +
                                    std::to_string(h));
    }
    const size_t out_rows = a1.rows - h + 1;
    const size_t out_cols = a2.rows - h + 1;

    FeatureMap fm;
    fm.per_filter.reserve(params.filter_count);
    for (size_t k = 0; k < params.filter_count; ++k) {
        Mat c(out_rows, out_cols);
        const double* w = params.filters.row(k);
        const double b = params.bias[k];
        for (size_t i = 0; i < out_rows; ++i) {
            for (size_t j = 0; j < out_cols; ++j) {
                double acc = 0.0;
                // first half of the filter covers the Arg1 window...
                for (size_t d = 0; d < h; ++d) {
                    const double* row = a1.row(i + d);
                    const double* wd = w + d * dim;
                    for (size_t e = 0; e < dim; ++e) acc += wd[e] * row[e];
                }
                // ...second half the Arg2 window
                for (size_t d = 0; d < h; ++d) {
                    const double* row = a2.row(j + d);
                    const double* wd = w + (h + d) * dim;
                    for (size_t e = 0; e < dim; ++e) acc += wd[e] * row[e];
                }
                c.at(i, j) = std::tanh(acc + b);
            }
        }
        fm.per_filter.push_back(std::move(c));
    }
    return fm;
}

PooledGrid dynamic_pool(const FeatureMap& maps, size_t pool) {
    if (maps.per_filter.empty()) throw std::invalid_argument("dynamic_pool: no feature maps");
    const size_t rows = maps.per_filter[0].rows;
    const size_t cols = maps.per_filter[0].cols;
    if (rows < pool || cols < pool) {
        throw std::logic_error("dynamic_pool: feature map " + std::to_string(rows) + "x" +
                               std::to_string(cols) + " smaller than pooling grid " +
                               std::to_string(pool) + " (argument padding failed)");
    }
    const size_t nf = maps.per_filter.size();
    PooledGrid out;
    out.cells = Ten3(nf, pool, pool);
    out.argmax.assign(nf, std::vector<WindowMax>(pool * pool));
    for (size_t k = 0; k < nf; ++k) {
        const Mat& m = maps.per_filter[k];
        for (size_t u = 0; u < pool; ++u) {
            size_t r0 = u * rows / pool;
            size_t r1 = (u + 1) * rows / pool;
            for (size_t v = 0; v < pool; ++v) {
                size_t c0 = v * cols / pool;
                size_t c1 = (v + 1) * cols / pool;
                WindowMax wm = window_max(m, r0, r1, c0, c1);
                out.cells.at(k, u, v) = wm.value;
                out.argmax[k][u * pool + v] = wm;
            }
        }
    }
    return out;
}

Vec encode(const std::vector<std::string>& tokens1, const std::vector<std::string>& tokens2,
           const Vocabulary& vocab, const EmbeddingTable& table, const EncoderParams& params,
           EncodeCache* cache) {
    if (tokens1.empty() || tokens2.empty()) {
        throw std::invalid_argument("encode: empty argument token list");
    }
    std::vector<int> ids1 = lookup_ids(pad_tokens(tokens1, params.window, params.pool), vocab);
    std::vector<int> ids2 = lookup_ids(pad_tokens(tokens2, params.window, params.pool), vocab);
    Mat a1 = embed_ids(ids1, table);
    Mat a2 = embed_ids(ids2, table);
    FeatureMap fm = convolve_pair(a1, a2, params);
    PooledGrid pooled = dynamic_pool(fm, params.pool);
    Vec flat = pooled.flatten();
    if (cache) {
        cache->ids1 = std::move(ids1);
        cache->ids2 = std::move(ids2);
        cache->a1 = std::move(a1);
        cache->a2 = std::move(a2);
        cache->maps = std::move(fm);
        cache->pooled = std::move(pooled);
    }
    return flat;
}

void encode_backward(const EncoderParams& params, const EncodeCache& cache, const Vec& dflat,
                     EncoderGrad& grad, Mat* da1, Mat* da2) {
    const size_t h = params.window;
    const size_t np = params.pool;
    const size_t dim = params.dim();
    if (dflat.size() != params.output_len()) {
        throw std::invalid_argument("encode_backward: upstream gradient length " +
                                    std::to_string(dflat.size()) + " vs output length " +
                                    std::to_string(params.output_len()));
    }
    for (size_t k = 0; k < params.filter_count; ++k) {
        const Mat& c = cache.maps.per_filter[k];
        double* wgrad = grad.filters.row(k);
        const double* w = params.filters.row(k);
        for (size_t cell = 0; cell < np * np; ++cell) {
            double g = dflat[k * np * np + cell];
            if (g == 0.0) continue;
            const WindowMax& wm = cache.pooled.argmax[k][cell];
            double act = c.at(wm.row, wm.col);
            double dz = g * (1.0 - act * act);  // through tanh
            grad.bias[k] += dz;
            for (size_t d = 0; d < h; ++d) {
                const double* r1 = cache.a1.row(wm.row + d);
                const double* r2 = cache.a2.row(wm.col + d);
                double* w1 = wgrad + d * dim;
                double* w2 = wgrad + (h + d) * dim;
                for (size_t e = 0; e < dim; ++e) {
                    w1[e] += dz * r1[e];
                    w2[e] += dz * r2[e];
                }
                if (da1) {
                    double* dst = da1->row(wm.row + d);
                    const double* ws = w + d * dim;
                    for (size_t e = 0; e < dim; ++e) dst[e] += dz * ws[e];
                }
                if (da2) {
                    double* dst = da2->row(wm.col + d);
                    const double* ws = w + (h + d) * dim;
                    for (size_t e = 0; e < dim; ++e) dst[e] += dz * ws[e];
                }
            }
        }
    }
}

}  // namespace mtdp
