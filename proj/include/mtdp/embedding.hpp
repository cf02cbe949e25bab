#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mtdp/tensor.hpp"

namespace mtdp {

inline constexpr int kPadId = 0;
inline constexpr int kUnkId = 1;
inline constexpr const char* kPadToken = "<pad>";
inline constexpr const char* kUnkToken = "<unk>";

/// ASCII lowercasing; non-ASCII bytes pass through untouched.
std::string normalize_token(const std::string& token);

/// Token <-> id bijection with PAD=0 and UNK=1 always reserved.
class Vocabulary {
public:
    Vocabulary();

    /// Adds the normalized token if absent, returns its id either way.
    int add(const std::string& token);

    /// Id of the normalized token, or UNK when unknown.
    int id_of(const std::string& token) const;

    bool contains(const std::string& token) const;
    const std::string& token_of(int id) const { return id_to_token_[id]; }
    size_t size() const { return id_to_token_.size(); }

private:
    std::unordered_map<std::string, int> token_to_id_;
    std::vector<std::string> id_to_token_;
};

/// The word-vector table x_w, one row per vocabulary id. Row PAD is all-zero
/// and stays frozen through training.
struct EmbeddingTable {
    Mat weights;  // (vocab_size, dim)

    size_t dim() const { return weights.cols; }
    size_t rows() const { return weights.rows; }
};

/// Parses a pretrained text table: one `token v1 .. v_dim` entry per line,
/// space or tab separated. UNK is set to the mean of all loaded vectors,
/// PAD stays zero. Malformed lines raise std::runtime_error naming path:line.
std::pair<Vocabulary, EmbeddingTable> load_pretrained(const std::string& path,
                                                      size_t expected_dim);

/// Writes the table in the same text format (17 significant digits, so a
/// save/load round trip is lossless). PAD and UNK rows are included.
void save_embeddings(const std::string& path, const Vocabulary& vocab,
                     const EmbeddingTable& table);

/// Fresh table with entries uniform in [-scale, scale] from the given seed.
/// PAD row is zeroed.
EmbeddingTable random_init(const Vocabulary& vocab, size_t dim, double scale, uint64_t seed);

/// Stacks the embeddings of a token sequence into a (len, dim) matrix.
/// Unknown tokens map to the UNK row.
Mat lookup_sequence(const std::vector<std::string>& tokens, const Vocabulary& vocab,
                    const EmbeddingTable& table);

/// Same lookup but returning ids, for callers that need gradient routing.
std::vector<int> lookup_ids(const std::vector<std::string>& tokens, const Vocabulary& vocab);

Mat embed_ids(const std::vector<int>& ids, const EmbeddingTable& table);

}  // namespace mtdp
