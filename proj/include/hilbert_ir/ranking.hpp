#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hilbert_ir/distribution.hpp"
#include "hilbert_ir/index.hpp"

namespace hir {

struct RankedEntry {
    DocId doc_id = 0;
    double baseline_score = 0.0;
    double positional_score = 0.0;
    double combined_score = 0.0;

    bool operator==(const RankedEntry&) const = default;
};

/// Entries ordered by the active mode's score, descending, ties by doc_id.
using RankedList = std::vector<RankedEntry>;

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

struct WeightedTerm {
    std::string term;
    double weight = 1.0;
};

/// Robertson-Sparck Jones idf, floored at 0.
double bm25_idf(std::uint64_t document_count, std::uint64_t document_frequency);

/// Query terms with duplicates removed, first occurrence kept.
std::vector<std::string> distinct_terms(std::span<const std::string> terms);

/// BM25 over documents containing at least one query term. Throws
/// ErrorCode::usage for an empty query.
RankedList baseline_rank(
    const Index& index, std::span<const std::string> query_terms, std::size_t top_k, const Bm25Params& params = {});

/// BM25 where each term's contribution is multiplied by its weight.
RankedList weighted_rank(
    const Index& index, std::span<const WeightedTerm> terms, std::size_t top_k, const Bm25Params& params = {});

/// Coefficients of the summed indicators of the distinct query terms in
/// `doc`. Throws ErrorCode::empty_distribution when none occurs there.
CoefficientVector query_distribution(const Index& index, DocId doc, std::span<const std::string> query_terms);

/// A target distribution over the normalized document [0, 1].
struct ObjectiveSpec {
    enum class Kind { first_third, last_third, interval, custom };

    Kind kind = Kind::first_third;
    double lo = 0.0;
    double hi = 1.0 / 3.0;
    std::vector<double> custom;

    static ObjectiveSpec first_third() { return {Kind::first_third, 0.0, 1.0 / 3.0, {}}; }
    static ObjectiveSpec last_third() { return {Kind::last_third, 2.0 / 3.0, 1.0, {}}; }
    /// Indicator of [lo, hi]; requires 0 <= lo <= hi <= 1.
    static ObjectiveSpec interval(double lo, double hi);
    static ObjectiveSpec coefficients(std::vector<double> gamma);

    /// "first-third", "last-third" or "interval:LO,HI".
    static ObjectiveSpec parse(std::string_view text);
};

CoefficientVector objective_coefficients(const IndexMetadata& metadata, const ObjectiveSpec& objective);

enum class RankingMode { baseline, rerank, blend };

inline constexpr std::size_t default_rerank_depth = 20;

/// Reorders the first `depth` baseline entries by sim(f_{q,d}, f_o);
/// the remaining entries follow in baseline order.
RankedList objective_rerank(const Index& index,
                            std::span<const std::string> query_terms,
                            const RankedList& baseline,
                            const ObjectiveSpec& objective,
                            std::size_t depth = default_rerank_depth);

/// Scores every baseline entry by baseline + weight * positional.
RankedList blend_rank(const Index& index,
                      std::span<const std::string> query_terms,
                      const RankedList& baseline,
                      const ObjectiveSpec& objective,
                      double weight = 1.0);

}  // namespace hir
