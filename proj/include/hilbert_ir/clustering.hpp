#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hilbert_ir/distribution.hpp"
#include "hilbert_ir/index.hpp"

namespace hir {

/// Ball containing every truncated term-distribution vector of a document
/// of length L: center (sqrt(L)/2, 0, ..., 0), radius sqrt(L)/2.
struct TermSphere {
    CoefficientVector center;
    double radius = 0.0;
};

inline constexpr double default_significance_cutoff = 0.01;
inline constexpr std::uint32_t max_enumeration_length = 16;

/// Throws ErrorCode::unsupported_basis for Laguerre, whose phi_0 is not
/// constant.
TermSphere term_sphere(const BasisSpec& spec);

/// Coefficient vectors of all 2^L subsets of {1..L}; subset bit i selects
/// position i + 1. Positions are scaled onto the basis domain as in
/// indicator_coefficients. Throws ErrorCode::resource for L > 16.
std::vector<CoefficientVector> enumerate_sphere(const BasisSpec& spec, std::uint32_t doc_length);

CoefficientVector centroid(std::span<const CoefficientVector> points);
/// [(1/q) sum_i |k_i - kbar|^2]^(1/2)
double centroid_radius(std::span<const CoefficientVector> points);
/// [(1/(2 q^2)) sum_{i,j} |k_i - k_j|^2]^(1/2)
double pairwise_radius(std::span<const CoefficientVector> points);

struct Cluster {
    std::vector<std::string> terms;
    std::vector<CoefficientVector> members;
    CoefficientVector centroid;
    double radius = 0.0;
    double significance = 0.0;
    bool significant = false;
};

/// xi = (R_K / R_0)^(n+1) = (2 R_K / sqrt(L))^(n+1). R_K is computed by the
/// centroid and the pairwise formula; a disagreement beyond 1e-9 throws
/// ErrorCode::internal. Throws ErrorCode::domain for an empty cluster.
double cluster_significance(const Cluster& cluster, const BasisSpec& spec);

/// Complete-linkage agglomeration over a symmetric distance matrix,
/// merging while the linkage distance is strictly below `threshold`.
/// Returns groups of point indices, each sorted, ordered by first index.
std::vector<std::vector<std::size_t>> complete_linkage(
    std::span<const std::vector<double>> distances, double threshold);

/// Clusters of the document's terms under norm_difference, annotated with
/// R_K and xi. Throws ErrorCode::lookup for an unknown document.
std::vector<Cluster> cluster_terms(const Index& index,
                                   DocId doc,
                                   double linkage_threshold,
                                   double significance_cutoff = default_significance_cutoff);

}  // namespace hir
