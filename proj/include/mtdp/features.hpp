#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "mtdp/corpus.hpp"
#include "mtdp/tensor.hpp"

namespace mtdp {

/// Fitted vocabulary for one feature template, ordered by descending
/// training-set frequency with lexicographic tie-break.
struct TemplateVocab {
    std::vector<std::string> feats;
    std::unordered_map<std::string, int> index;

    void assign(std::vector<std::string> ordered);
    size_t size() const { return feats.size(); }
    int find(const std::string& f) const;
};

/// Which surface templates a task uses, and their fitted vocabularies.
/// Dimension layout: first/last-word block, then production-rule block, then
/// the single same-sentence bit.
struct FeatureTemplateSet {
    std::string task;
    bool first_last_words = false;
    bool production_rules = false;
    bool same_sentence = false;
    size_t min_count = 5;

    TemplateVocab first_last;
    TemplateVocab rules;

    size_t dim() const {
        return first_last.size() + rules.size() + (same_sentence ? 1 : 0);
    }
};

/// Sparse binary feature vector; indices strictly increasing.
struct SurfaceVector {
    std::vector<size_t> indices;

    Vec dense(size_t dim) const;
};

/// Counts feature strings over the training split and keeps those occurring
/// at least spec.min_count times.
FeatureTemplateSet fit_templates(const std::vector<ArgumentPair>& corpus,
                                 FeatureTemplateSet spec);

/// Pure extraction against fitted templates. Unseen feature strings map to
/// nothing; missing parse metadata yields an all-zero rule block.
SurfaceVector extract(const ArgumentPair& pair, const FeatureTemplateSet& spec);

/// Text serialization: one `template<TAB>feature<TAB>index` line per entry.
void save_templates(const std::string& path, const FeatureTemplateSet& spec);

/// Restores the vocabularies into a template set carrying the enabled flags.
FeatureTemplateSet load_templates(const std::string& path, FeatureTemplateSet base);

}  // namespace mtdp
