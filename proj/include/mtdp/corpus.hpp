#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace mtdp {

/// One classification instance: two token spans and a label, plus the
/// optional metadata some tasks consume. The universal input record.
struct ArgumentPair {
    std::string task;
    std::vector<std::string> arg1;
    std::vector<std::string> arg2;
    std::string label;
    std::vector<std::string> rules1;  // precomputed production-rule strings, may be empty
    std::vector<std::string> rules2;
    std::optional<bool> same_sentence;
    std::optional<std::string> id;

    bool operator==(const ArgumentPair&) const = default;
};

enum class ConnectivePosition { SentenceInitialSecondArg, IntraSentence };

/// A connective used as a weak label, e.g. "because" or "in fact".
struct ConnectivePattern {
    std::string connective;  // lowercase, possibly multiword
    ConnectivePosition position = ConnectivePosition::SentenceInitialSecondArg;

    std::vector<std::string> tokens() const;
};

/// Noise filters applied to extracted pairs.
struct ExtractionRuleSet {
    size_t min_tokens = 3;
    size_t max_tokens = 100;
    bool require_final_punct = true;
};

/// Lowercased whitespace tokenization with each punctuation character split
/// off as its own token. Bytes >= 0x80 are treated as word characters.
std::vector<std::string> tokenize(const std::string& text);

const std::set<std::string>& default_abbreviations();

/// Rule-based splitter: a sentence ends at . ! ? followed by whitespace and
/// an uppercase letter or quote. A final period whose word is in the
/// abbreviation set does not split.
std::vector<std::string> split_sentences(const std::string& text,
                                         const std::set<std::string>& abbreviations =
                                             default_abbreviations());

/// Reads line-delimited JSON records ({task, arg1, arg2, label, rules1?,
/// rules2?, same_sentence?, id?}). Every record must carry the expected task
/// id, nonempty arguments, and a label from label_set; violations raise
/// std::runtime_error naming the line. Per-label counts are reported through
/// label_counts when given.
std::vector<ArgumentPair> load_dataset(const std::string& path, const std::string& task,
                                       const std::vector<std::string>& label_set,
                                       std::map<std::string, size_t>* label_counts = nullptr);

void save_dataset(const std::string& path, const std::vector<ArgumentPair>& pairs);

/// One lowercase connective per line; blank lines and # comments skipped.
std::vector<ConnectivePattern> load_connectives(const std::string& path);

/// Scans adjacent sentence pairs for a second sentence opening with one of
/// the connectives (longest match first, case-insensitive, token boundary).
/// Emits arg1 = sentence 1, arg2 = sentence 2 with the connective and any
/// following comma removed, label = the connective. Pairs violating the rule
/// set are dropped. Ids are "<source_id>:<zero-padded sentence index>".
std::vector<ArgumentPair> extract_connective_pairs(
    const std::vector<std::string>& sentences, const std::vector<ConnectivePattern>& patterns,
    const ExtractionRuleSet& rules, const std::string& source_id,
    const std::string& task = "connective");

/// Seeded uniform sample without replacement; output ordered by source id,
/// draw order breaking ties. n > pairs.size() raises std::runtime_error
/// naming both counts.
std::vector<ArgumentPair> sample_corpus(const std::vector<ArgumentPair>& pairs, size_t n,
                                        uint64_t seed);

/// Loads `path` (a file, or every regular file under it when a directory)
/// as (name, contents) sorted by name.
std::vector<std::pair<std::string, std::string>> read_raw_documents(const std::string& path);

}  // namespace mtdp
