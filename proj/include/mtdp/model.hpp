#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "mtdp/corpus.hpp"
#include "mtdp/embedding.hpp"
#include "mtdp/encoder.hpp"
#include "mtdp/features.hpp"

namespace mtdp {

/// Hyperparameters and label inventory for one classification task.
struct TaskSpec {
    std::string id;
    std::vector<std::string> labels;
    size_t window = 0;        // h
    size_t pool = 0;          // n_p
    size_t filter_count = 0;  // n_f
    size_t fusion_dim = 0;    // n_r
    double mu = 1.0;          // regulative ratio on the network learning rate
    double mu_e = 1.0;        // regulative ratio on the embedding learning rate
    FeatureTemplateSet features;

    size_t n_classes() const { return labels.size(); }
    int label_index(const std::string& label) const;
};

/// Shared-encoder hyperparameters (h^s, n^s_p, n^s_f).
struct SharedSpec {
    size_t window = 6;
    size_t pool = 10;
    size_t filter_count = 40;
};

/// w1/b1 fuse [p_task, p_shared] into the task representation; w2/b2 map
/// [q, surface features] onto class scores.
struct HeadParams {
    Mat w1;  // (n_r, private_len + shared_len)
    Vec b1;  // (n_r)
    Mat w2;  // (n_classes, n_r + feature_dim)
    Vec b2;  // (n_classes)
};

struct TaskParams {
    EncoderParams encoder;
    HeadParams head;
};

/// Everything learnable plus the task registry: embeddings (theta_e), the
/// shared encoder, and each task's private encoder and head (theta).
struct ModelState {
    Vocabulary vocab;
    EmbeddingTable embeddings;
    EncoderParams shared_encoder;
    std::vector<TaskSpec> tasks;
    std::vector<TaskParams> task_params;  // parallel to tasks

    int task_index(const std::string& id) const;
    const TaskSpec& task(const std::string& id) const;
};

/// Builds a model with fan-scaled random weights (biases zero) for the given
/// tasks. Feature templates must already be fitted.
ModelState init_model(Vocabulary vocab, EmbeddingTable embeddings, const SharedSpec& shared,
                      std::vector<TaskSpec> tasks, uint64_t seed);

/// Intermediates of one forward pass, consumed by backward().
struct ForwardCache {
    std::string task;
    EncodeCache priv;
    EncodeCache shared;
    Vec p_cat;  // [p_task; p_shared]
    Vec q;      // tanh fusion output
    Vec r;      // [q; surface features], dense
    Vec probs;
    SurfaceVector sf;
};

/// Class distribution for one argument pair under one task's head.
Vec forward(const ModelState& state, const std::string& task_id, const ArgumentPair& pair,
            ForwardCache* cache = nullptr);

/// Cross-entropy against the gold index: -log probs[gold], with probs[gold]
/// clamped at 1e-12 (clamping is reported on stderr).
double loss(const Vec& probs, int gold, size_t n_classes);

/// Gradient bundle for one task's parameters plus the shared blocks. Rows of
/// `embedding` are keyed by vocabulary id; PAD never appears.
struct Gradients {
    std::string task;
    EncoderGrad shared;
    EncoderGrad task_private;
    Mat dw1;
    Vec db1;
    Mat dw2;
    Vec db2;
    std::unordered_map<int, Vec> embedding;

    void scale(double s);
    bool finite() const;
};

Gradients make_gradients(const ModelState& state, const std::string& task_id);

/// Accumulates d(loss)/d(theta) into grad. The cache must come from a
/// forward() call on the same task and model shape, otherwise
/// std::invalid_argument.
void backward(const ModelState& state, const std::string& task_id, const ForwardCache& cache,
              int gold, Gradients& grad);

/// theta -= lr_net * grad, embeddings -= lr_emb * grad (PAD row frozen).
/// Callers fold the regulative ratios and batch averaging into the rates.
void apply_gradients(ModelState& state, const Gradients& grad, double lr_net, double lr_emb);

/// Argmax of forward(), first index on ties.
int predict(const ModelState& state, const std::string& task_id, const ArgumentPair& pair);

}  // namespace mtdp
