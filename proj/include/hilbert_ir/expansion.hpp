#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "hilbert_ir/ranking.hpp"

namespace hir {

struct ExpansionConfig {
    /// r: top documents inspected for candidates.
    std::size_t num_docs = 15;
    /// m: expansion terms kept.
    std::size_t num_terms = 40;
    /// Candidates must co-occur with the query in this many top documents
    /// (clamped to the number of top documents).
    std::size_t min_doc_frequency = 2;
    /// Weight of expansion terms in the second BM25 pass.
    double beta = 0.4;
    std::size_t result_count = 1000;
    std::size_t candidate_cap = 10000;
    std::set<std::string> stopwords = TokenizerConfig::english().stopwords;

    /// Throws ErrorCode::configuration.
    void validate() const;
};

struct ExpandedTerm {
    std::string term;
    double score = 0.0;

    bool operator==(const ExpandedTerm&) const = default;
};

struct ExpansionResult {
    std::vector<ExpandedTerm> expanded_terms;
    RankedList baseline;
    RankedList final_ranking;
};

/// Sum over the top documents containing both t and the query of
/// sim(f_{q,d}, f_{t,d}), for every eligible non-query term t.
std::map<std::string, double> candidate_scores(const Index& index,
                                               std::span<const DocId> top_docs,
                                               std::span<const std::string> query_terms,
                                               const ExpansionConfig& config = {});

/// Baseline, candidate scoring over the top r documents, then a second
/// BM25 pass with the m best positively scored candidates at weight beta.
ExpansionResult expand_query(const Index& index,
                             std::span<const std::string> query_terms,
                             const ExpansionConfig& config = {});

}  // namespace hir
