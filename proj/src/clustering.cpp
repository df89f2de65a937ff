#include "hilbert_ir/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hilbert_ir/error.hpp"

namespace hir {

namespace {

constexpr double radius_agreement = 1e-9;

double squared_distance(const CoefficientVector& a, const CoefficientVector& b)
{
    double sum = 0.0;
    for (std::size_t k = 0; k < a.coeffs.size(); ++k) {
        const double d = a.coeffs[k] - b.coeffs[k];
        sum += d * d;
    }
    return sum;
}

void require_nonempty(std::span<const CoefficientVector> points)
{
    if (points.empty()) {
        throw Error(ErrorCode::domain, "empty cluster");
    }
}

// Union-find over point indices.
std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i)
{
    while (parent[i] != i) {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    return i;
}

Cluster annotate(std::vector<std::string> terms, std::vector<CoefficientVector> members, const BasisSpec& spec, double cutoff)
{
    Cluster c;
    c.terms = std::move(terms);
    c.members = std::move(members);
    c.centroid = centroid(c.members);
    c.radius = centroid_radius(c.members);
    c.significance = cluster_significance(c, spec);
    c.significant = c.significance < cutoff;
    return c;
}

}  // namespace

TermSphere term_sphere(const BasisSpec& spec)
{
    spec.validate();
    if (spec.kind == BasisKind::laguerre) {
        throw Error(ErrorCode::unsupported_basis, "the term sphere needs a constant phi_0 (fourier or legendre)");
    }
    const double radius = std::sqrt(spec.domain_length) / 2.0;
    auto center = CoefficientVector::zero(spec);
    center.coeffs[0] = radius;
    return {center, radius};
}

std::vector<CoefficientVector> enumerate_sphere(const BasisSpec& spec, std::uint32_t doc_length)
{
    spec.validate();
    if (doc_length < 1) {
        throw Error(ErrorCode::domain, "document length must be at least 1");
    }
    if (doc_length > max_enumeration_length) {
        throw Error(ErrorCode::resource, "enumeration limited to documents of at most 16 tokens");
    }
    const std::uint32_t count = 1U << doc_length;
    std::vector<CoefficientVector> out;
    out.reserve(count);
    std::vector<std::uint32_t> positions;
    for (std::uint32_t mask = 0; mask < count; ++mask) {
        positions.clear();
        for (std::uint32_t i = 0; i < doc_length; ++i) {
            if (mask & (1U << i)) {
                positions.push_back(i + 1);
            }
        }
        out.push_back({spec, indicator_coefficients(spec, positions, doc_length)});
    }
    return out;
}

CoefficientVector centroid(std::span<const CoefficientVector> points)
{
    require_nonempty(points);
    auto c = CoefficientVector::zero(points.front().basis);
    for (const auto& p : points) {
        c += p;
    }
    for (auto& v : c.coeffs) {
        v /= static_cast<double>(points.size());
    }
    return c;
}

double centroid_radius(std::span<const CoefficientVector> points)
{
    const auto c = centroid(points);
    double sum = 0.0;
    for (const auto& p : points) {
        sum += squared_distance(p, c);
    }
    return std::sqrt(sum / static_cast<double>(points.size()));
}

double pairwise_radius(std::span<const CoefficientVector> points)
{
    require_nonempty(points);
    double sum = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            sum += 2.0 * squared_distance(points[i], points[j]);
        }
    }
    const auto q = static_cast<double>(points.size());
    return std::sqrt(sum / (2.0 * q * q));
}

double cluster_significance(const Cluster& cluster, const BasisSpec& spec)
{
    require_nonempty(cluster.members);
    const double by_centroid = centroid_radius(cluster.members);
    const double by_pairs = pairwise_radius(cluster.members);
    if (std::fabs(by_centroid - by_pairs) > radius_agreement * std::max(1.0, by_centroid)) {
        throw Error(ErrorCode::internal, "centroid and pairwise cluster radii disagree");
    }
    const double sphere_radius = std::sqrt(spec.domain_length) / 2.0;
    return std::pow(by_centroid / sphere_radius, static_cast<double>(spec.order) + 1.0);
}

std::vector<std::vector<std::size_t>> complete_linkage(std::span<const std::vector<double>> distances, double threshold)
{
    const std::size_t m = distances.size();
    std::vector<std::vector<double>> d(distances.begin(), distances.end());
    std::vector<char> active(m, 1);
    std::vector<std::size_t> parent(m);
    std::iota(parent.begin(), parent.end(), 0);

    // Nearest-neighbour chain; exact for complete linkage, which is reducible.
    std::vector<std::size_t> chain;
    std::size_t remaining = m;
    while (remaining > 1) {
        if (chain.empty()) {
            chain.push_back(static_cast<std::size_t>(std::find(active.begin(), active.end(), 1) - active.begin()));
        }
        const std::size_t a = chain.back();
        const std::size_t prev = chain.size() >= 2 ? chain[chain.size() - 2] : m;
        std::size_t best = prev;
        double best_d = prev < m ? d[a][prev] : std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < m; ++k) {
            if (k == a || !active[k]) {
                continue;
            }
            if (d[a][k] < best_d) {
                best = k;
                best_d = d[a][k];
            }
        }
        if (best != prev) {
            chain.push_back(best);
            continue;
        }
        chain.pop_back();
        chain.pop_back();
        const std::size_t keep = std::min(a, prev);
        const std::size_t drop = std::max(a, prev);
        if (best_d < threshold) {
            parent[find_root(parent, drop)] = find_root(parent, keep);
        }
        for (std::size_t k = 0; k < m; ++k) {
            if (active[k] && k != keep && k != drop) {
                d[keep][k] = d[k][keep] = std::max(d[keep][k], d[drop][k]);
            }
        }
        active[drop] = 0;
        --remaining;
    }

    std::vector<std::vector<std::size_t>> groups;
    std::vector<std::size_t> slot(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto root = find_root(parent, i);
        if (slot[root] == m) {
            slot[root] = groups.size();
            groups.emplace_back();
        }
        groups[slot[root]].push_back(i);
    }
    return groups;
}

std::vector<Cluster> cluster_terms(const Index& index, DocId doc, double linkage_threshold, double significance_cutoff)
{
    const auto terms = index.document_terms(doc);
    std::vector<std::string> names;
    std::vector<CoefficientVector> vectors;
    for (const auto& dt : terms) {
        names.push_back(index.term(dt.term_id));
        vectors.push_back(index.postings_for(dt.term_id)[dt.posting_index].coeffs);
    }
    std::vector<std::vector<double>> distances(vectors.size(), std::vector<double>(vectors.size(), 0.0));
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        for (std::size_t j = i + 1; j < vectors.size(); ++j) {
            distances[i][j] = distances[j][i] = norm_difference(vectors[i], vectors[j]);
        }
    }
    std::vector<Cluster> clusters;
    for (const auto& group : complete_linkage(distances, linkage_threshold)) {
        std::vector<std::string> member_terms;
        std::vector<CoefficientVector> members;
        for (auto i : group) {
            member_terms.push_back(names[i]);
            members.push_back(vectors[i]);
        }
        clusters.push_back(annotate(std::move(member_terms), std::move(members), index.basis(), significance_cutoff));
    }
    return clusters;
}

}  // namespace hir
