#include "mtdp/embedding.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mtdp/rng.hpp"

namespace mtdp {

std::string normalize_token(const std::string& token) {
    std::string out = token;
    for (char& c : out) {
        unsigned char u = static_cast<unsigned char>(c);
        if (u < 0x80) c = static_cast<char>(std::tolower(u));
    }
    return out;
}

Vocabulary::Vocabulary() {
    id_to_token_ = {kPadToken, kUnkToken};
    token_to_id_ = {{kPadToken, kPadId}, {kUnkToken, kUnkId}};
}

int Vocabulary::add(const std::string& token) {
    std::string t = normalize_token(token);
    auto it = token_to_id_.find(t);
    if (it != token_to_id_.end()) return it->second;
    int id = static_cast<int>(id_to_token_.size());
    token_to_id_.emplace(t, id);
    id_to_token_.push_back(std::move(t));
    return id;
}

int Vocabulary::id_of(const std::string& token) const {
    auto it = token_to_id_.find(normalize_token(token));
    return it == token_to_id_.end() ? kUnkId : it->second;
}

bool Vocabulary::contains(const std::string& token) const {
    return token_to_id_.count(normalize_token(token)) > 0;
}

namespace {

bool parse_double(const std::string& s, double& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

}  // namespace

std::pair<Vocabulary, EmbeddingTable> load_pretrained(const std::string& path,
                                                      size_t expected_dim) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open embedding file: " + path);

    Vocabulary vocab;
    std::vector<std::vector<double>> rows;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string token;
        ss >> token;
        std::vector<double> values;
        values.reserve(expected_dim);
        std::string field;
        while (ss >> field) {
            double v;
            if (!parse_double(field, v)) {
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": non-numeric value '" + field + "'");
            }
            values.push_back(v);
        }
        if (values.size() != expected_dim) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected " +
                                     std::to_string(expected_dim) + " values, got " +
                                     std::to_string(values.size()));
        }
        int before = static_cast<int>(vocab.size());
        int id = vocab.add(token);
        if (id < before) continue;  // duplicate token: first entry wins
        rows.push_back(std::move(values));
    }

    EmbeddingTable table;
    table.weights = Mat(vocab.size(), expected_dim);
    // PAD row stays zero; UNK is the mean of everything loaded.
    for (size_t r = 0; r < rows.size(); ++r) {
        for (size_t c = 0; c < expected_dim; ++c) {
            table.weights.at(r + 2, c) = rows[r][c];
            table.weights.at(kUnkId, c) += rows[r][c];
        }
    }
    if (!rows.empty()) {
        for (size_t c = 0; c < expected_dim; ++c) {
            table.weights.at(kUnkId, c) /= static_cast<double>(rows.size());
        }
    }
    return {std::move(vocab), std::move(table)};
}

void save_embeddings(const std::string& path, const Vocabulary& vocab,
                     const EmbeddingTable& table) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write embedding file: " + path);
    out.precision(17);
    for (size_t id = 0; id < table.rows(); ++id) {
        out << vocab.token_of(static_cast<int>(id));
        for (size_t c = 0; c < table.dim(); ++c) out << ' ' << table.weights.at(id, c);
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

EmbeddingTable random_init(const Vocabulary& vocab, size_t dim, double scale, uint64_t seed) {
    if (dim == 0 || scale <= 0.0) {
        throw std::invalid_argument("random_init: dim must be >= 1 and scale > 0");
    }
    EmbeddingTable table;
    table.weights = Mat(vocab.size(), dim);
    Rng rng(seed);
    for (size_t id = 1; id < vocab.size(); ++id) {  // id 0 is PAD, stays zero
        for (size_t c = 0; c < dim; ++c) table.weights.at(id, c) = rng.uniform(-scale, scale);
    }
    return table;
}

std::vector<int> lookup_ids(const std::vector<std::string>& tokens, const Vocabulary& vocab) {
    std::vector<int> ids;
    ids.reserve(tokens.size());
    for (const auto& t : tokens) ids.push_back(vocab.id_of(t));
    return ids;
}

Mat embed_ids(const std::vector<int>& ids, const EmbeddingTable& table) {
    Mat out(ids.size(), table.dim());
    for (size_t i = 0; i < ids.size(); ++i) {
        const double* src = table.weights.row(static_cast<size_t>(ids[i]));
        double* dst = out.row(i);
        for (size_t c = 0; c < table.dim(); ++c) dst[c] = src[c];
    }
    return out;
}

Mat lookup_sequence(const std::vector<std::string>& tokens, const Vocabulary& vocab,
                    const EmbeddingTable& table) {
    if (tokens.empty()) throw std::invalid_argument("lookup_sequence: empty token list");
    return embed_ids(lookup_ids(tokens, vocab), table);
}

}  // namespace mtdp
