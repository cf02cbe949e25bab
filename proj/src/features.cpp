#include "mtdp/features.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "mtdp/embedding.hpp"

namespace mtdp {

void TemplateVocab::assign(std::vector<std::string> ordered) {
    feats = std::move(ordered);
    index.clear();
    for (size_t i = 0; i < feats.size(); ++i) index[feats[i]] = static_cast<int>(i);
}

int TemplateVocab::find(const std::string& f) const {
    auto it = index.find(f);
    return it == index.end() ? -1 : it->second;
}

Vec SurfaceVector::dense(size_t dim) const {
    Vec v(dim);
    for (size_t i : indices) v[i] = 1.0;
    return v;
}

namespace {

std::vector<std::string> first_last_strings(const ArgumentPair& pair) {
    return {"A1_FIRST=" + normalize_token(pair.arg1.front()),
            "A1_LAST=" + normalize_token(pair.arg1.back()),
            "A2_FIRST=" + normalize_token(pair.arg2.front()),
            "A2_LAST=" + normalize_token(pair.arg2.back())};
}

// Distinct rule strings present in either argument of one pair.
std::set<std::string> pair_rules(const ArgumentPair& pair) {
    std::set<std::string> rules(pair.rules1.begin(), pair.rules1.end());
    rules.insert(pair.rules2.begin(), pair.rules2.end());
    return rules;
}

std::vector<std::string> by_frequency(const std::map<std::string, size_t>& counts,
                                      size_t min_count) {
    std::vector<std::pair<std::string, size_t>> kept;
    for (const auto& [feat, n] : counts) {
        if (n >= min_count) kept.emplace_back(feat, n);
    }
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::vector<std::string> ordered;
    ordered.reserve(kept.size());
    for (auto& [feat, n] : kept) ordered.push_back(std::move(feat));
    return ordered;
}

}  // namespace

FeatureTemplateSet fit_templates(const std::vector<ArgumentPair>& corpus,
                                 FeatureTemplateSet spec) {
    std::map<std::string, size_t> fl_counts;
    std::map<std::string, size_t> rule_counts;
    for (const auto& pair : corpus) {
        if (spec.first_last_words) {
            for (auto& f : first_last_strings(pair)) ++fl_counts[f];
        }
        if (spec.production_rules) {
            for (const auto& r : pair_rules(pair)) ++rule_counts[r];
        }
    }
    spec.first_last.assign(by_frequency(fl_counts, spec.min_count));
    spec.rules.assign(by_frequency(rule_counts, spec.min_count));
    return spec;
}

SurfaceVector extract(const ArgumentPair& pair, const FeatureTemplateSet& spec) {
    SurfaceVector sv;
    if (spec.first_last_words) {
        for (const auto& f : first_last_strings(pair)) {
            int i = spec.first_last.find(f);
            if (i >= 0) sv.indices.push_back(static_cast<size_t>(i));
        }
    }
    if (spec.production_rules) {
        size_t off = spec.first_last.size();
        for (const auto& r : pair_rules(pair)) {
            int i = spec.rules.find(r);
            if (i >= 0) sv.indices.push_back(off + static_cast<size_t>(i));
        }
    }
    if (spec.same_sentence && pair.same_sentence.value_or(false)) {
        sv.indices.push_back(spec.dim() - 1);
    }
    std::sort(sv.indices.begin(), sv.indices.end());
    sv.indices.erase(std::unique(sv.indices.begin(), sv.indices.end()), sv.indices.end());
    return sv;
}

void save_templates(const std::string& path, const FeatureTemplateSet& spec) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write feature vocabulary: " + path);
    for (size_t i = 0; i < spec.first_last.size(); ++i) {
        out << "first_last_words\t" << spec.first_last.feats[i] << '\t' << i << '\n';
    }
    for (size_t i = 0; i < spec.rules.size(); ++i) {
        out << "production_rules\t" << spec.rules.feats[i] << '\t' << i << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

FeatureTemplateSet load_templates(const std::string& path, FeatureTemplateSet base) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open feature vocabulary: " + path);
    std::vector<std::string> fl, rules;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        size_t t1 = line.find('\t');
        size_t t2 = line.rfind('\t');
        if (t1 == std::string::npos || t2 == t1) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected template<TAB>feature<TAB>index");
        }
        std::string tmpl = line.substr(0, t1);
        std::string feat = line.substr(t1 + 1, t2 - t1 - 1);
        size_t idx = std::stoul(line.substr(t2 + 1));
        auto place = [&](std::vector<std::string>& v) {
            if (v.size() != idx) {
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": out-of-order index " + std::to_string(idx));
            }
            v.push_back(feat);
        };
        if (tmpl == "first_last_words") place(fl);
        else if (tmpl == "production_rules") place(rules);
        else throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                      ": unknown template '" + tmpl + "'");
    }
    base.first_last.assign(std::move(fl));
    base.rules.assign(std::move(rules));
    return base;
}

}  // namespace mtdp
