#include "hilbert_ir/ranking.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <unordered_set>

#include "hilbert_ir/error.hpp"

namespace hir {

namespace {

template <typename Score>
void sort_by(RankedList& list, Score score)
{
    std::stable_sort(list.begin(), list.end(), [&](const RankedEntry& a, const RankedEntry& b) {
        const double sa = score(a);
        const double sb = score(b);
        if (sa != sb) {
            return sa > sb;
        }
        return a.doc_id < b.doc_id;
    });
}

double parse_double(std::string_view text)
{
    double value = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw Error(ErrorCode::usage, "not a number: '" + std::string(text) + "'");
    }
    return value;
}

}  // namespace

double bm25_idf(std::uint64_t document_count, std::uint64_t document_frequency)
{
    const auto n = static_cast<double>(document_count);
    const auto df = static_cast<double>(document_frequency);
    return std::max(0.0, std::log((n - df + 0.5) / (df + 0.5)));
}

std::vector<std::string> distinct_terms(std::span<const std::string> terms)
{
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const auto& t : terms) {
        if (seen.insert(t).second) {
            out.push_back(t);
        }
    }
    return out;
}

RankedList weighted_rank(
    const Index& index, std::span<const WeightedTerm> terms, std::size_t top_k, const Bm25Params& params)
{
    if (terms.empty()) {
        throw Error(ErrorCode::usage, "empty query");
    }
    const auto n_docs = index.documents().size();
    std::vector<double> scores(n_docs, 0.0);
    std::vector<char> matched(n_docs, 0);
    std::unordered_set<std::string> seen;
    for (const auto& wt : terms) {
        if (!seen.insert(wt.term).second) {
            continue;
        }
        const auto postings = index.postings_for(wt.term);
        const double idf = bm25_idf(n_docs, postings.size());
        for (const auto& p : postings) {
            const double tf = p.term_frequency;
            const double len = static_cast<double>(index.document(p.doc_id).length);
            const double norm = params.k1 * (1.0 - params.b + params.b * len / index.average_length());
            scores[p.doc_id] += wt.weight * idf * tf * (params.k1 + 1.0) / (tf + norm);
            matched[p.doc_id] = 1;
        }
    }
    RankedList list;
    for (DocId d = 0; d < n_docs; ++d) {
        if (matched[d]) {
            list.push_back({d, scores[d], 0.0, scores[d]});
        }
    }
    sort_by(list, [](const RankedEntry& e) { return e.baseline_score; });
    if (list.size() > top_k) {
        list.resize(top_k);
    }
    return list;
}

RankedList baseline_rank(
    const Index& index, std::span<const std::string> query_terms, std::size_t top_k, const Bm25Params& params)
{
    std::vector<WeightedTerm> terms;
    for (const auto& t : query_terms) {
        terms.push_back({t, 1.0});
    }
    return weighted_rank(index, terms, top_k, params);
}

CoefficientVector query_distribution(const Index& index, DocId doc, std::span<const std::string> query_terms)
{
    (void)index.document(doc);
    auto sum = CoefficientVector::zero(index.basis());
    bool found = false;
    for (const auto& term : distinct_terms(query_terms)) {
        if (const auto* p = index.posting(term, doc)) {
            sum += p->coeffs;
            found = true;
        }
    }
    if (!found) {
        throw Error(ErrorCode::empty_distribution, "no query term occurs in document " + std::to_string(doc));
    }
    return sum;
}

ObjectiveSpec ObjectiveSpec::interval(double lo, double hi)
{
    if (!(lo >= 0.0 && lo <= hi && hi <= 1.0)) {
        throw Error(ErrorCode::configuration, "objective interval must satisfy 0 <= lo <= hi <= 1");
    }
    return {Kind::interval, lo, hi, {}};
}

ObjectiveSpec ObjectiveSpec::coefficients(std::vector<double> gamma)
{
    return {Kind::custom, 0.0, 0.0, std::move(gamma)};
}

ObjectiveSpec ObjectiveSpec::parse(std::string_view text)
{
    if (text == "first-third" || text == "1|3") {
        return first_third();
    }
    if (text == "last-third" || text == "3|3") {
        return last_third();
    }
    constexpr std::string_view prefix = "interval:";
    if (text.starts_with(prefix)) {
        const auto body = text.substr(prefix.size());
        const auto comma = body.find(',');
        if (comma == std::string_view::npos) {
            throw Error(ErrorCode::usage, "interval objective needs LO,HI");
        }
        return interval(parse_double(body.substr(0, comma)), parse_double(body.substr(comma + 1)));
    }
    throw Error(ErrorCode::usage, "unknown objective '" + std::string(text) + "'");
}

CoefficientVector objective_coefficients(const IndexMetadata& metadata, const ObjectiveSpec& objective)
{
    const BasisSpec basis = metadata.basis();
    if (objective.kind == ObjectiveSpec::Kind::custom) {
        if (objective.custom.size() != basis.size()) {
            throw Error(
                ErrorCode::configuration,
                "custom objective has " + std::to_string(objective.custom.size()) + " coefficients, index basis needs "
                    + std::to_string(basis.size()));
        }
        return {basis, objective.custom};
    }
    const Interval iv{objective.lo, objective.hi};
    if (!(iv.lo >= 0.0 && iv.lo <= iv.hi && iv.hi <= 1.0)) {
        throw Error(ErrorCode::configuration, "objective interval must satisfy 0 <= lo <= hi <= 1");
    }
    return {basis, interval_coefficients(basis, std::span(&iv, 1))};
}

RankedList objective_rerank(const Index& index,
                            std::span<const std::string> query_terms,
                            const RankedList& baseline,
                            const ObjectiveSpec& objective,
                            std::size_t depth)
{
    const auto target = objective_coefficients(index.metadata(), objective);
    RankedList out = baseline;
    const auto block = std::min(depth, out.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        auto& e = out[i];
        e.positional_score = i < block ? similarity(query_distribution(index, e.doc_id, query_terms), target) : 0.0;
        e.combined_score = i < block ? e.positional_score : e.baseline_score;
    }
    std::stable_sort(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(block),
                     [](const RankedEntry& a, const RankedEntry& b) {
                         if (a.positional_score != b.positional_score) {
                             return a.positional_score > b.positional_score;
                         }
                         return a.doc_id < b.doc_id;
                     });
    return out;
}

RankedList blend_rank(const Index& index,
                      std::span<const std::string> query_terms,
                      const RankedList& baseline,
                      const ObjectiveSpec& objective,
                      double weight)
{
    const auto target = objective_coefficients(index.metadata(), objective);
    RankedList out = baseline;
    for (auto& e : out) {
        e.positional_score = similarity(query_distribution(index, e.doc_id, query_terms), target);
        e.combined_score = e.baseline_score + weight * e.positional_score;
    }
    sort_by(out, [](const RankedEntry& e) { return e.combined_score; });
    return out;
}

}  // namespace hir
