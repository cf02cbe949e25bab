#include "mtdp/model.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include "mtdp/rng.hpp"

namespace mtdp {

int TaskSpec::label_index(const std::string& label) const {
    for (size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == label) return static_cast<int>(i);
    }
    return -1;
}

int ModelState::task_index(const std::string& id) const {
    for (size_t i = 0; i < tasks.size(); ++i) {
        if (tasks[i].id == id) return static_cast<int>(i);
    }
    return -1;
}

const TaskSpec& ModelState::task(const std::string& id) const {
    int i = task_index(id);
    if (i < 0) throw std::invalid_argument("unregistered task: " + id);
    return tasks[static_cast<size_t>(i)];
}

namespace {

Mat fan_init(size_t rows, size_t cols, Rng& rng) {
    Mat m(rows, cols);
    double r = std::sqrt(6.0 / (static_cast<double>(cols) + 1.0));
    for (double& w : m.data) w = rng.uniform(-r, r);
    return m;
}

}  // namespace

ModelState init_model(Vocabulary vocab, EmbeddingTable embeddings, const SharedSpec& shared,
                      std::vector<TaskSpec> tasks, uint64_t seed) {
    if (tasks.empty()) throw std::invalid_argument("init_model: no tasks");
    size_t dim = embeddings.dim();
    ModelState state;
    state.vocab = std::move(vocab);
    state.embeddings = std::move(embeddings);
    state.tasks = std::move(tasks);

    Rng rng(derive_seed(seed, 0));
    state.shared_encoder =
        init_encoder(shared.window, shared.pool, shared.filter_count, dim, rng);

    size_t shared_len = state.shared_encoder.output_len();
    for (const TaskSpec& t : state.tasks) {
        if (t.n_classes() < 2) {
            throw std::invalid_argument("task " + t.id + ": needs at least 2 labels");
        }
        TaskParams params;
        params.encoder = init_encoder(t.window, t.pool, t.filter_count, dim, rng);
        size_t fused_in = params.encoder.output_len() + shared_len;
        params.head.w1 = fan_init(t.fusion_dim, fused_in, rng);
        params.head.b1 = Vec(t.fusion_dim);
        params.head.w2 = fan_init(t.n_classes(), t.fusion_dim + t.features.dim(), rng);
        params.head.b2 = Vec(t.n_classes());
        state.task_params.push_back(std::move(params));
    }
    return state;
}

Vec forward(const ModelState& state, const std::string& task_id, const ArgumentPair& pair,
            ForwardCache* cache) {
    int ti = state.task_index(task_id);
    if (ti < 0) throw std::invalid_argument("unregistered task: " + task_id);
    const TaskSpec& spec = state.tasks[static_cast<size_t>(ti)];
    const TaskParams& params = state.task_params[static_cast<size_t>(ti)];

    EncodeCache priv_cache, shared_cache;
    Vec p_task = encode(pair.arg1, pair.arg2, state.vocab, state.embeddings, params.encoder,
                        cache ? &priv_cache : nullptr);
    Vec p_shared = encode(pair.arg1, pair.arg2, state.vocab, state.embeddings,
                          state.shared_encoder, cache ? &shared_cache : nullptr);

    Vec p_cat(p_task.size() + p_shared.size());
    for (size_t i = 0; i < p_task.size(); ++i) p_cat[i] = p_task[i];
    for (size_t i = 0; i < p_shared.size(); ++i) p_cat[p_task.size() + i] = p_shared[i];

    Vec z1 = matvec(params.head.w1, p_cat);
    for (size_t i = 0; i < z1.size(); ++i) z1[i] += params.head.b1[i];
    Vec q = tanh_map(z1);

    SurfaceVector sf = extract(pair, spec.features);
    Vec r(q.size() + spec.features.dim());
    for (size_t i = 0; i < q.size(); ++i) r[i] = q[i];
    for (size_t i : sf.indices) r[q.size() + i] = 1.0;

    Vec z2 = matvec(params.head.w2, r);
    for (size_t i = 0; i < z2.size(); ++i) z2[i] += params.head.b2[i];
    Vec probs = softmax(z2);

    if (cache) {
        cache->task = task_id;
        cache->priv = std::move(priv_cache);
        cache->shared = std::move(shared_cache);
        cache->p_cat = std::move(p_cat);
        cache->q = std::move(q);
        cache->r = std::move(r);
        cache->probs = probs;
        cache->sf = std::move(sf);
    }
    return probs;
}

double loss(const Vec& probs, int gold, size_t n_classes) {
    if (probs.size() != n_classes || gold < 0 || static_cast<size_t>(gold) >= n_classes) {
        throw std::invalid_argument("loss: gold index " + std::to_string(gold) +
                                    " out of range for " + std::to_string(n_classes) +
                                    " classes");
    }
    double p = probs[static_cast<size_t>(gold)];
    if (p < 1e-12) {
        std::cerr << "warning: clamping zero probability for gold class " << gold << "\n";
        p = 1e-12;
    }
    return -std::log(p);
}

void Gradients::scale(double s) {
    for (double& x : shared.filters.data) x *= s;
    for (double& x : shared.bias.data) x *= s;
    for (double& x : task_private.filters.data) x *= s;
    for (double& x : task_private.bias.data) x *= s;
    for (double& x : dw1.data) x *= s;
    for (double& x : db1.data) x *= s;
    for (double& x : dw2.data) x *= s;
    for (double& x : db2.data) x *= s;
    for (auto& [id, row] : embedding) {
        for (double& x : row.data) x *= s;
    }
}

bool Gradients::finite() const {
    auto ok = [](const std::vector<double>& v) {
        for (double x : v)
            if (!std::isfinite(x)) return false;
        return true;
    };
    if (!ok(shared.filters.data) || !ok(shared.bias.data)) return false;
    if (!ok(task_private.filters.data) || !ok(task_private.bias.data)) return false;
    if (!ok(dw1.data) || !ok(db1.data) || !ok(dw2.data) || !ok(db2.data)) return false;
    for (const auto& [id, row] : embedding) {
        if (!ok(row.data)) return false;
    }
    return true;
}

Gradients make_gradients(const ModelState& state, const std::string& task_id) {
    int ti = state.task_index(task_id);
    if (ti < 0) throw std::invalid_argument("unregistered task: " + task_id);
    const TaskParams& params = state.task_params[static_cast<size_t>(ti)];
    Gradients g;
    g.task = task_id;
    g.shared = EncoderGrad(state.shared_encoder);
    g.task_private = EncoderGrad(params.encoder);
    g.dw1 = Mat(params.head.w1.rows, params.head.w1.cols);
    g.db1 = Vec(params.head.b1.size());
    g.dw2 = Mat(params.head.w2.rows, params.head.w2.cols);
    g.db2 = Vec(params.head.b2.size());
    return g;
}

namespace {

// Scatter d(loss)/d(embedded rows) into per-id gradient rows. PAD stays frozen.
void scatter_embedding_grad(const std::vector<int>& ids, const Mat& da,
                            std::unordered_map<int, Vec>& out) {
    for (size_t r = 0; r < da.rows; ++r) {
        int id = ids[r];
        if (id == kPadId) continue;
        auto [it, fresh] = out.try_emplace(id, Vec(da.cols));
        Vec& row = it->second;
        const double* src = da.row(r);
        for (size_t c = 0; c < da.cols; ++c) row[c] += src[c];
    }
}

}  // namespace

void backward(const ModelState& state, const std::string& task_id, const ForwardCache& cache,
              int gold, Gradients& grad) {
    int ti = state.task_index(task_id);
    if (ti < 0) throw std::invalid_argument("unregistered task: " + task_id);
    const TaskSpec& spec = state.tasks[static_cast<size_t>(ti)];
    const TaskParams& params = state.task_params[static_cast<size_t>(ti)];

    if (cache.task != task_id || cache.probs.size() != spec.n_classes() ||
        cache.q.size() != spec.fusion_dim ||
        cache.p_cat.size() != params.encoder.output_len() + state.shared_encoder.output_len()) {
        throw std::invalid_argument("backward: cache does not match task " + task_id);
    }
    if (gold < 0 || static_cast<size_t>(gold) >= spec.n_classes()) {
        throw std::invalid_argument("backward: gold index out of range");
    }
    if (grad.task != task_id) {
        throw std::invalid_argument("backward: gradient bundle belongs to task " + grad.task);
    }

    // softmax + cross-entropy: d(loss)/d(logits) = probs - onehot(gold)
    Vec dz2 = cache.probs;
    dz2[static_cast<size_t>(gold)] -= 1.0;

    for (size_t i = 0; i < dz2.size(); ++i) {
        grad.db2[i] += dz2[i];
        double* wrow = grad.dw2.row(i);
        for (size_t j = 0; j < cache.r.size(); ++j) wrow[j] += dz2[i] * cache.r[j];
    }

    // dr = w2^T dz2; only the q block flows further (features are inputs)
    Vec dq(spec.fusion_dim);
    for (size_t i = 0; i < dz2.size(); ++i) {
        const double* wrow = params.head.w2.row(i);
        for (size_t j = 0; j < spec.fusion_dim; ++j) dq[j] += wrow[j] * dz2[i];
    }

    Vec dz1(spec.fusion_dim);
    for (size_t j = 0; j < spec.fusion_dim; ++j) {
        dz1[j] = dq[j] * (1.0 - cache.q[j] * cache.q[j]);
    }

    for (size_t i = 0; i < dz1.size(); ++i) {
        grad.db1[i] += dz1[i];
        double* wrow = grad.dw1.row(i);
        for (size_t j = 0; j < cache.p_cat.size(); ++j) wrow[j] += dz1[i] * cache.p_cat[j];
    }

    Vec dp(cache.p_cat.size());
    for (size_t i = 0; i < dz1.size(); ++i) {
        const double* wrow = params.head.w1.row(i);
        for (size_t j = 0; j < dp.size(); ++j) dp[j] += wrow[j] * dz1[i];
    }

    size_t priv_len = params.encoder.output_len();
    Vec dp_priv(priv_len), dp_shared(dp.size() - priv_len);
    for (size_t i = 0; i < priv_len; ++i) dp_priv[i] = dp[i];
    for (size_t i = priv_len; i < dp.size(); ++i) dp_shared[i - priv_len] = dp[i];

    Mat da1p(cache.priv.a1.rows, cache.priv.a1.cols);
    Mat da2p(cache.priv.a2.rows, cache.priv.a2.cols);
    encode_backward(params.encoder, cache.priv, dp_priv, grad.task_private, &da1p, &da2p);
    scatter_embedding_grad(cache.priv.ids1, da1p, grad.embedding);
    scatter_embedding_grad(cache.priv.ids2, da2p, grad.embedding);

    Mat da1s(cache.shared.a1.rows, cache.shared.a1.cols);
    Mat da2s(cache.shared.a2.rows, cache.shared.a2.cols);
    encode_backward(state.shared_encoder, cache.shared, dp_shared, grad.shared, &da1s, &da2s);
    scatter_embedding_grad(cache.shared.ids1, da1s, grad.embedding);
    scatter_embedding_grad(cache.shared.ids2, da2s, grad.embedding);
}

void apply_gradients(ModelState& state, const Gradients& grad, double lr_net, double lr_emb) {
    int ti = state.task_index(grad.task);
    if (ti < 0) throw std::invalid_argument("unregistered task: " + grad.task);
    TaskParams& params = state.task_params[static_cast<size_t>(ti)];

    auto step = [lr_net](std::vector<double>& theta, const std::vector<double>& g) {
        for (size_t i = 0; i < theta.size(); ++i) theta[i] -= lr_net * g[i];
    };
    step(state.shared_encoder.filters.data, grad.shared.filters.data);
    step(state.shared_encoder.bias.data, grad.shared.bias.data);
    step(params.encoder.filters.data, grad.task_private.filters.data);
    step(params.encoder.bias.data, grad.task_private.bias.data);
    step(params.head.w1.data, grad.dw1.data);
    step(params.head.b1.data, grad.db1.data);
    step(params.head.w2.data, grad.dw2.data);
    step(params.head.b2.data, grad.db2.data);

    if (lr_emb == 0.0) return;  // embeddings bitwise untouched
    for (const auto& [id, row] : grad.embedding) {
        if (id == kPadId) continue;
        double* dst = state.embeddings.weights.row(static_cast<size_t>(id));
        for (size_t c = 0; c < row.size(); ++c) dst[c] -= lr_emb * row[c];
    }
}

int predict(const ModelState& state, const std::string& task_id, const ArgumentPair& pair) {
    Vec probs = forward(state, task_id, pair);
    size_t best = 0;
    for (size_t i = 1; i < probs.size(); ++i) {
        if (probs[i] > probs[best]) best = i;
    }
    return static_cast<int>(best);
}

}  // namespace mtdp
