#pragma once

#include <vector>

#include "mtdp/embedding.hpp"
#include "mtdp/rng.hpp"
#include "mtdp/tensor.hpp"

namespace mtdp {

/// Convolution bank for one argument-pair encoder. Each filter spans an
/// h-token window from each argument, so rows of `filters` have length
/// 2 * window * dim.
struct EncoderParams {
    size_t window = 0;        // h, tokens taken from each argument
    size_t pool = 0;          // n_p, side of the pooled grid
    size_t filter_count = 0;  // n_f
    Mat filters;              // (n_f, 2*h*dim)
    Vec bias;                 // (n_f)

    size_t dim() const { return filter_count == 0 ? 0 : filters.cols / (2 * window); }
    size_t output_len() const { return pool * pool * filter_count; }
};

/// Per-filter convolution outputs, each of shape (m1-h+1, m2-h+1), post-tanh.
struct FeatureMap {
    std::vector<Mat> per_filter;
};

/// Fixed n_p x n_p max grids stacked over filters, plus where each maximum
/// came from (needed to route gradients back through the pooling).
struct PooledGrid {
    Ten3 cells;                                 // (n_f, n_p, n_p)
    std::vector<std::vector<WindowMax>> argmax; // [filter][u*n_p + v]

    /// Filter-major, then row-major flattening; this order is part of the
    /// checkpoint contract.
    Vec flatten() const {
        Vec v;
        v.data = cells.data;
        return v;
    }
};

/// Everything the backward pass needs from one encode call.
struct EncodeCache {
    std::vector<int> ids1, ids2;  // padded token ids
    Mat a1, a2;                   // embedded arguments, (m, dim)
    FeatureMap maps;
    PooledGrid pooled;
};

/// Gradient accumulator matching EncoderParams shapes.
struct EncoderGrad {
    Mat filters;
    Vec bias;

    explicit EncoderGrad(const EncoderParams& p)
        : filters(p.filters.rows, p.filters.cols), bias(p.bias.size()) {}
    EncoderGrad() = default;
};

/// Fan-scaled uniform init: filters in [-r, r] with r = sqrt(6/(2*h*dim+1)),
/// biases zero.
EncoderParams init_encoder(size_t window, size_t pool, size_t filter_count, size_t dim,
                           Rng& rng);

/// Extends the token list with PAD until a feature map of at least
/// pool x pool is guaranteed, i.e. length >= window + pool - 1.
std::vector<std::string> pad_tokens(std::vector<std::string> tokens, size_t window,
                                    size_t pool);

/// Eq-style window-pair convolution: for filter k and positions (i,j),
/// c_ij = tanh(w_k . [a1 rows i..i+h-1, a2 rows j..j+h-1] + b_k).
/// Output maps have shape (a1.rows-h+1, a2.rows-h+1).
FeatureMap convolve_pair(const Mat& a1, const Mat& a2, const EncoderParams& params);

/// Splits each map into pool x pool rectangles with floor boundaries
/// r_k = floor(k*rows/pool) and records each rectangle's max and argmax.
PooledGrid dynamic_pool(const FeatureMap& maps, size_t pool);

/// pad -> lookup -> convolve -> pool -> flatten. Output length is
/// pool^2 * filter_count. Pass a cache to enable encode_backward.
Vec encode(const std::vector<std::string>& tokens1, const std::vector<std::string>& tokens2,
           const Vocabulary& vocab, const EmbeddingTable& table, const EncoderParams& params,
           EncodeCache* cache = nullptr);

/// Backpropagates d(loss)/d(flattened output) through pooling and the
/// convolution. Parameter gradients accumulate into `grad`; input gradients
/// accumulate into da1/da2 when non-null (callers route those into the
/// embedding table by cache ids).
void encode_backward(const EncoderParams& params, const EncodeCache& cache, const Vec& dflat,
                     EncoderGrad& grad, Mat* da1 = nullptr, Mat* da2 = nullptr);

}  // namespace mtdp
