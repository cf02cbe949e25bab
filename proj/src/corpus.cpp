#include "mtdp/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "mtdp/embedding.hpp"
#include "mtdp/rng.hpp"

namespace mtdp {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::vector<std::string> ConnectivePattern::tokens() const { return tokenize(connective); }

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) {
            out.push_back(normalize_token(cur));
            cur.clear();
        }
    };
    for (char ch : text) {
        unsigned char u = static_cast<unsigned char>(ch);
        if (u < 0x80 && std::isspace(u)) {
            flush();
        } else if (u < 0x80 && !std::isalnum(u)) {
            flush();
            out.emplace_back(1, ch);
        } else {
            cur.push_back(ch);
        }
    }
    flush();
    return out;
}

const std::set<std::string>& default_abbreviations() {
    static const std::set<std::string> abbrevs = {
        "mr.",  "mrs.", "ms.",  "dr.",   "prof.", "st.",  "jr.",  "sr.",  "etc.",
        "e.g.", "i.e.", "vs.",  "inc.",  "co.",   "corp.", "no.", "fig.", "u.s.",
        "u.k.", "a.m.", "p.m.", "jan.",  "feb.",  "mar.", "apr.", "jun.", "jul.",
        "aug.", "sep.", "sept.", "oct.", "nov.",  "dec."};
    return abbrevs;
}

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// The whitespace-delimited word ending at position i (inclusive), lowercased.
std::string word_ending_at(const std::string& text, size_t i) {
    size_t b = i;
    while (b > 0 && !std::isspace(static_cast<unsigned char>(text[b - 1]))) --b;
    return normalize_token(text.substr(b, i - b + 1));
}

}  // namespace

std::vector<std::string> split_sentences(const std::string& text,
                                         const std::set<std::string>& abbreviations) {
    std::vector<std::string> sentences;
    size_t start = 0;
    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c != '.' && c != '!' && c != '?') continue;
        if (i + 1 >= text.size()) break;  // end of text flushes below
        if (!std::isspace(static_cast<unsigned char>(text[i + 1]))) continue;
        size_t j = i + 1;
        while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        if (j >= text.size()) break;
        char next = text[j];
        bool sentence_opener = std::isupper(static_cast<unsigned char>(next)) ||
                               next == '"' || next == '\'';
        if (!sentence_opener) continue;
        if (c == '.' && abbreviations.count(word_ending_at(text, i))) continue;
        std::string sent = trim(text.substr(start, i + 1 - start));
        if (!sent.empty()) sentences.push_back(std::move(sent));
        start = j;
    }
    std::string tail = trim(text.substr(start));
    if (!tail.empty()) sentences.push_back(std::move(tail));
    return sentences;
}

namespace {

std::vector<std::string> string_array(const json& j, const char* field, const std::string& ctx) {
    if (!j.is_array()) throw std::runtime_error(ctx + ": field '" + field + "' must be an array");
    std::vector<std::string> out;
    out.reserve(j.size());
    for (const auto& e : j) {
        if (!e.is_string())
            throw std::runtime_error(ctx + ": field '" + field + "' must contain strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

}  // namespace

std::vector<ArgumentPair> load_dataset(const std::string& path, const std::string& task,
                                       const std::vector<std::string>& label_set,
                                       std::map<std::string, size_t>* label_counts) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset: " + path);
    std::set<std::string> labels(label_set.begin(), label_set.end());

    std::vector<ArgumentPair> pairs;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::string ctx = path + ":" + std::to_string(lineno);
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw std::runtime_error(ctx + ": invalid JSON: " + e.what());
        }
        for (const char* req : {"task", "arg1", "arg2", "label"}) {
            if (!j.contains(req)) throw std::runtime_error(ctx + ": missing field '" + req + "'");
        }
        ArgumentPair p;
        p.task = j["task"].get<std::string>();
        if (p.task != task) {
            throw std::runtime_error(ctx + ": record task '" + p.task + "' does not match '" +
                                     task + "'");
        }
        p.arg1 = string_array(j["arg1"], "arg1", ctx);
        p.arg2 = string_array(j["arg2"], "arg2", ctx);
        if (p.arg1.empty() || p.arg2.empty()) {
            throw std::runtime_error(ctx + ": empty argument");
        }
        p.label = j["label"].get<std::string>();
        if (!labels.count(p.label)) {
            throw std::runtime_error(ctx + ": unknown label '" + p.label + "' for task '" +
                                     task + "'");
        }
        if (j.contains("rules1")) p.rules1 = string_array(j["rules1"], "rules1", ctx);
        if (j.contains("rules2")) p.rules2 = string_array(j["rules2"], "rules2", ctx);
        if (j.contains("same_sentence")) p.same_sentence = j["same_sentence"].get<bool>();
        if (j.contains("id")) p.id = j["id"].get<std::string>();
        if (label_counts) ++(*label_counts)[p.label];
        pairs.push_back(std::move(p));
    }
    if (pairs.empty()) {
        std::cerr << "warning: dataset " << path << " is empty\n";
    }
    return pairs;
}

void save_dataset(const std::string& path, const std::vector<ArgumentPair>& pairs) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write dataset: " + path);
    for (const auto& p : pairs) {
        ordered_json j;
        j["task"] = p.task;
        j["arg1"] = p.arg1;
        j["arg2"] = p.arg2;
        j["label"] = p.label;
        if (!p.rules1.empty()) j["rules1"] = p.rules1;
        if (!p.rules2.empty()) j["rules2"] = p.rules2;
        if (p.same_sentence) j["same_sentence"] = *p.same_sentence;
        if (p.id) j["id"] = *p.id;
        out << j.dump() << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<ConnectivePattern> load_connectives(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open connective list: " + path);
    std::vector<ConnectivePattern> patterns;
    std::string line;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        ConnectivePattern p;
        p.connective = normalize_token(t);
        patterns.push_back(std::move(p));
    }
    if (patterns.empty()) throw std::runtime_error("connective list is empty: " + path);
    return patterns;
}

std::vector<ArgumentPair> extract_connective_pairs(
    const std::vector<std::string>& sentences, const std::vector<ConnectivePattern>& patterns,
    const ExtractionRuleSet& rules, const std::string& source_id, const std::string& task) {
    if (patterns.empty()) throw std::invalid_argument("extract_connective_pairs: no patterns");
    if (rules.min_tokens > rules.max_tokens) {
        throw std::invalid_argument("extract_connective_pairs: min_tokens > max_tokens");
    }

    // Longest connective first so "in fact" wins over a hypothetical "in".
    std::vector<std::pair<std::vector<std::string>, const ConnectivePattern*>> toks;
    for (const auto& p : patterns) {
        if (p.position != ConnectivePosition::SentenceInitialSecondArg) continue;
        auto t = p.tokens();
        if (!t.empty()) toks.emplace_back(std::move(t), &p);
    }
    std::stable_sort(toks.begin(), toks.end(),
                     [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });

    auto ends_with_final_punct = [](const std::string& s) {
        if (s.empty()) return false;
        char c = s.back();
        return c == '.' || c == '!' || c == '?';
    };

    std::vector<std::vector<std::string>> sent_tokens;
    sent_tokens.reserve(sentences.size());
    for (const auto& s : sentences) sent_tokens.push_back(tokenize(s));

    std::vector<ArgumentPair> out;
    for (size_t i = 0; i + 1 < sentences.size(); ++i) {
        const auto& t2 = sent_tokens[i + 1];
        const ConnectivePattern* match = nullptr;
        size_t match_len = 0;
        for (const auto& [ct, pat] : toks) {
            if (ct.size() > t2.size()) continue;
            if (std::equal(ct.begin(), ct.end(), t2.begin())) {
                match = pat;
                match_len = ct.size();
                break;
            }
        }
        if (!match) continue;
        if (rules.require_final_punct &&
            (!ends_with_final_punct(sentences[i]) || !ends_with_final_punct(sentences[i + 1]))) {
            continue;
        }
        ArgumentPair p;
        p.task = task;
        p.arg1 = sent_tokens[i];
        size_t drop = match_len;
        if (drop < t2.size() && t2[drop] == ",") ++drop;
        p.arg2.assign(t2.begin() + static_cast<ptrdiff_t>(drop), t2.end());
        if (p.arg1.empty() || p.arg2.empty()) continue;
        if (p.arg1.size() < rules.min_tokens || p.arg1.size() > rules.max_tokens) continue;
        if (p.arg2.size() < rules.min_tokens || p.arg2.size() > rules.max_tokens) continue;
        p.label = match->connective;
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04zu", i);
        p.id = source_id + ":" + buf;
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<ArgumentPair> sample_corpus(const std::vector<ArgumentPair>& pairs, size_t n,
                                        uint64_t seed) {
    if (n > pairs.size()) {
        throw std::runtime_error("sample_corpus: requested " + std::to_string(n) +
                                 " instances but only " + std::to_string(pairs.size()) +
                                 " available");
    }
    std::vector<size_t> idx(pairs.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    Rng rng(seed);
    // partial Fisher-Yates: the first n positions are the sample, in draw order
    for (size_t i = 0; i < n; ++i) {
        size_t j = i + rng.below(idx.size() - i);
        std::swap(idx[i], idx[j]);
    }
    idx.resize(n);
    std::vector<ArgumentPair> out;
    out.reserve(n);
    for (size_t i : idx) out.push_back(pairs[i]);
    std::stable_sort(out.begin(), out.end(), [](const ArgumentPair& a, const ArgumentPair& b) {
        return a.id.value_or("") < b.id.value_or("");
    });
    return out;
}

std::vector<std::pair<std::string, std::string>> read_raw_documents(const std::string& path) {
    fs::path root(path);
    if (!fs::exists(root)) throw std::runtime_error("no such file or directory: " + path);

    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open document: " + p.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };

    std::vector<std::pair<std::string, std::string>> docs;
    if (fs::is_regular_file(root)) {
        docs.emplace_back(root.filename().string(), slurp(root));
        return docs;
    }
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        docs.emplace_back(fs::relative(entry.path(), root).generic_string(), slurp(entry.path()));
    }
    std::sort(docs.begin(), docs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return docs;
}

}  // namespace mtdp
