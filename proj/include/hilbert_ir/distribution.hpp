#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hilbert_ir/basis.hpp"

namespace hir {

/// Sorted distinct 1-based token positions of one term in a document of
/// `doc_length` tokens.
class PositionSet {
  public:
    PositionSet() = default;
    /// Sorts and validates; throws ErrorCode::domain on duplicates or
    /// positions outside [1, doc_length].
    PositionSet(std::vector<std::uint32_t> positions, std::uint32_t doc_length);

    [[nodiscard]] std::span<const std::uint32_t> positions() const noexcept { return m_positions; }
    [[nodiscard]] std::uint32_t doc_length() const noexcept { return m_doc_length; }
    [[nodiscard]] std::size_t size() const noexcept { return m_positions.size(); }
    [[nodiscard]] bool empty() const noexcept { return m_positions.empty(); }

    bool operator==(const PositionSet&) const = default;

  private:
    std::vector<std::uint32_t> m_positions;
    std::uint32_t m_doc_length = 1;
};

/// The {0,1}-valued function marking [p-1, p] for every p of a term.
struct TermDistribution {
    PositionSet positions;

    /// Squared L2 norm over the raw domain, |P_t|.
    [[nodiscard]] double squared_norm() const noexcept { return static_cast<double>(positions.size()); }
};

/// Truncated expansion coefficients gamma_0..gamma_n in `basis`.
struct CoefficientVector {
    BasisSpec basis;
    std::vector<double> coeffs;

    static CoefficientVector zero(const BasisSpec& basis);

    [[nodiscard]] std::size_t size() const noexcept { return coeffs.size(); }
    [[nodiscard]] double operator[](std::size_t k) const { return coeffs[k]; }

    /// Component-wise sum; throws ErrorCode::configuration on basis mismatch.
    CoefficientVector& operator+=(const CoefficientVector& other);
    CoefficientVector operator-() const;

    bool operator==(const CoefficientVector&) const = default;
};

CoefficientVector operator+(CoefficientVector a, const CoefficientVector& b);

/// 1 when x lies in some closed [p-1, p], else 0. x must be in [0, L].
double indicator_value(const TermDistribution& dist, double x);

/// Raw-domain expansion: spec.domain_length must equal the doc length.
CoefficientVector expand(const TermDistribution& dist, const BasisSpec& spec);

/// Expansion on the normalized domain [0, 1] (positions p -> p / L);
/// spec.domain_length must be 1. Squared norm of the function is |P_t| / L.
CoefficientVector expand_normalized(const TermDistribution& dist, const BasisSpec& spec);

/// sum_k gamma_k phi_k(x)
double reconstruct(const CoefficientVector& cv, double x);

double squared_norm(const CoefficientVector& cv);
double norm(const CoefficientVector& cv);

/// Overlap of the truncated distributions, sum_k gamma_k gamma'_k.
double similarity(const CoefficientVector& a, const CoefficientVector& b);

/// similarity / (|a| |b|), clamped to [-1, 1]. Throws
/// ErrorCode::undefined_cosine when either vector is zero.
double cosine_similarity(const CoefficientVector& a, const CoefficientVector& b);

/// |a - b| computed as sqrt(|a|^2 + |b|^2 - 2 sim(a, b)), floored at 0.
double norm_difference(const CoefficientVector& a, const CoefficientVector& b);

enum class SimilarityMeasure : std::uint8_t { dot, cosine, norm_difference };

double measure(SimilarityMeasure kind, const CoefficientVector& a, const CoefficientVector& b);

}  // namespace hir
