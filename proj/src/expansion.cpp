#include "hilbert_ir/expansion.hpp"

#include <algorithm>
#include <unordered_set>

#include "hilbert_ir/error.hpp"

namespace hir {

void ExpansionConfig::validate() const
{
    if (num_docs < 1 || num_terms < 1) {
        throw Error(ErrorCode::configuration, "expansion needs at least one document and one term");
    }
    if (!(beta > 0.0 && beta <= 1.0)) {
        throw Error(ErrorCode::configuration, "expansion weight beta must lie in (0, 1]");
    }
    if (min_doc_frequency < 1 || candidate_cap < 1) {
        throw Error(ErrorCode::configuration, "min document frequency and candidate cap must be positive");
    }
}

std::map<std::string, double> candidate_scores(const Index& index,
                                               std::span<const DocId> top_docs,
                                               std::span<const std::string> query_terms,
                                               const ExpansionConfig& config)
{
    config.validate();
    const auto query = distinct_terms(query_terms);
    const std::unordered_set<std::string> excluded(query.begin(), query.end());

    struct Tally {
        std::size_t docs = 0;
        double score = 0.0;
    };
    std::map<TermId, Tally> tallies;
    for (DocId doc : top_docs) {
        CoefficientVector fq;
        try {
            fq = query_distribution(index, doc, query);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::empty_distribution) {
                throw;
            }
            continue;
        }
        for (const auto& dt : index.document_terms(doc)) {
            const auto& term = index.term(dt.term_id);
            if (excluded.contains(term) || config.stopwords.contains(term)) {
                continue;
            }
            const auto& posting = index.postings_for(dt.term_id)[dt.posting_index];
            auto& tally = tallies[dt.term_id];
            ++tally.docs;
            tally.score += similarity(fq, posting.coeffs);
        }
    }

    const auto min_df = std::min(config.min_doc_frequency, top_docs.size());
    std::vector<std::pair<TermId, Tally>> eligible;
    for (const auto& entry : tallies) {
        if (entry.second.docs >= min_df) {
            eligible.push_back(entry);
        }
    }
    if (eligible.size() > config.candidate_cap) {
        std::stable_sort(eligible.begin(), eligible.end(),
                         [](const auto& a, const auto& b) { return a.second.docs > b.second.docs; });
        eligible.resize(config.candidate_cap);
    }
    std::map<std::string, double> out;
    for (const auto& [id, tally] : eligible) {
        out.emplace(index.term(id), tally.score);
    }
    return out;
}

ExpansionResult expand_query(const Index& index,
                             std::span<const std::string> query_terms,
                             const ExpansionConfig& config)
{
    config.validate();
    ExpansionResult result;
    result.baseline = baseline_rank(index, query_terms, std::max(config.result_count, config.num_docs));
    if (result.baseline.empty()) {
        return result;
    }
    std::vector<DocId> top;
    for (std::size_t i = 0; i < std::min(config.num_docs, result.baseline.size()); ++i) {
        top.push_back(result.baseline[i].doc_id);
    }

    for (const auto& [term, score] : candidate_scores(index, top, query_terms, config)) {
        if (score > 0.0) {
            result.expanded_terms.push_back({term, score});
        }
    }
    // candidate_scores is keyed by term, so a stable sort keeps ties lexicographic
    std::stable_sort(result.expanded_terms.begin(), result.expanded_terms.end(),
                     [](const ExpandedTerm& a, const ExpandedTerm& b) { return a.score > b.score; });
    if (result.expanded_terms.size() > config.num_terms) {
        result.expanded_terms.resize(config.num_terms);
    }

    std::vector<WeightedTerm> weighted;
    for (const auto& t : distinct_terms(query_terms)) {
        weighted.push_back({t, 1.0});
    }
    for (const auto& t : result.expanded_terms) {
        weighted.push_back({t.term, config.beta});
    }
    result.final_ranking = weighted_rank(index, weighted, config.result_count);
    if (result.baseline.size() > config.result_count) {
        result.baseline.resize(config.result_count);
    }
    return result;
}

}  // namespace hir
