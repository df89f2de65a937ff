#include "hilbert_ir/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hilbert_ir/error.hpp"

namespace hir {

namespace {

void require_same_basis(const CoefficientVector& a, const CoefficientVector& b)
{
    if (a.basis != b.basis || a.coeffs.size() != b.coeffs.size()) {
        throw Error(ErrorCode::configuration, "coefficient vectors use different bases");
    }
}

}  // namespace

PositionSet::PositionSet(std::vector<std::uint32_t> positions, std::uint32_t doc_length)
    : m_positions(std::move(positions)), m_doc_length(doc_length)
{
    if (doc_length == 0) {
        throw Error(ErrorCode::domain, "document length must be at least 1");
    }
    std::sort(m_positions.begin(), m_positions.end());
    if (std::adjacent_find(m_positions.begin(), m_positions.end()) != m_positions.end()) {
        throw Error(ErrorCode::domain, "duplicate position in position set");
    }
    if (!m_positions.empty() && (m_positions.front() < 1 || m_positions.back() > doc_length)) {
        throw Error(ErrorCode::domain, "position outside [1, " + std::to_string(doc_length) + "]");
    }
}

CoefficientVector CoefficientVector::zero(const BasisSpec& basis)
{
    return {basis, std::vector<double>(basis.size(), 0.0)};
}

CoefficientVector& CoefficientVector::operator+=(const CoefficientVector& other)
{
    require_same_basis(*this, other);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        coeffs[k] += other.coeffs[k];
    }
    return *this;
}

CoefficientVector CoefficientVector::operator-() const
{
    CoefficientVector out = *this;
    for (auto& c : out.coeffs) {
        c = -c;
    }
    return out;
}

CoefficientVector operator+(CoefficientVector a, const CoefficientVector& b)
{
    a += b;
    return a;
}

double indicator_value(const TermDistribution& dist, double x)
{
    const auto length = static_cast<double>(dist.positions.doc_length());
    if (!(x >= 0.0 && x <= length)) {
        throw Error(ErrorCode::domain, "x outside [0, L]");
    }
    const auto ps = dist.positions.positions();
    // x is covered by p = ceil(x), and also by p = x + 1 when x is integral.
    const auto covers = [&](double p) {
        return p >= 1.0 && std::binary_search(ps.begin(), ps.end(), static_cast<std::uint32_t>(p));
    };
    const double upper = std::ceil(x);
    return (covers(upper) || (upper == x && covers(x + 1.0))) ? 1.0 : 0.0;
}

CoefficientVector expand(const TermDistribution& dist, const BasisSpec& spec)
{
    if (spec.domain_length != static_cast<double>(dist.positions.doc_length())) {
        throw Error(ErrorCode::configuration, "basis domain length differs from the document length");
    }
    return {spec, indicator_coefficients(spec, dist.positions.positions(), dist.positions.doc_length())};
}

CoefficientVector expand_normalized(const TermDistribution& dist, const BasisSpec& spec)
{
    if (spec.domain_length != 1.0) {
        throw Error(ErrorCode::configuration, "normalized expansion needs a unit-length basis domain");
    }
    return {spec, indicator_coefficients(spec, dist.positions.positions(), dist.positions.doc_length())};
}

double reconstruct(const CoefficientVector& cv, double x)
{
    std::vector<double> phi(cv.coeffs.size());
    eval_basis(cv.basis, x, phi);
    double sum = 0.0;
    for (std::size_t k = 0; k < phi.size(); ++k) {
        sum += cv.coeffs[k] * phi[k];
    }
    return sum;
}

double squared_norm(const CoefficientVector& cv)
{
    double sum = 0.0;
    for (double c : cv.coeffs) {
        sum += c * c;
    }
    return sum;
}

double norm(const CoefficientVector& cv) { return std::sqrt(squared_norm(cv)); }

double similarity(const CoefficientVector& a, const CoefficientVector& b)
{
    require_same_basis(a, b);
    double sum = 0.0;
    for (std::size_t k = 0; k < a.coeffs.size(); ++k) {
        sum += a.coeffs[k] * b.coeffs[k];
    }
    return sum;
}

double cosine_similarity(const CoefficientVector& a, const CoefficientVector& b)
{
    require_same_basis(a, b);
    const double na = norm(a);
    const double nb = norm(b);
    if (na == 0.0 || nb == 0.0) {
        throw Error(ErrorCode::undefined_cosine, "cosine of a zero coefficient vector");
    }
    return std::clamp(similarity(a, b) / (na * nb), -1.0, 1.0);
}

double norm_difference(const CoefficientVector& a, const CoefficientVector& b)
{
    const double squared = squared_norm(a) + squared_norm(b) - 2.0 * similarity(a, b);
    return std::sqrt(std::max(squared, 0.0));
}

double measure(SimilarityMeasure kind, const CoefficientVector& a, const CoefficientVector& b)
{
    switch (kind) {
    case SimilarityMeasure::dot: return similarity(a, b);
    case SimilarityMeasure::cosine: return cosine_similarity(a, b);
    case SimilarityMeasure::norm_difference: return norm_difference(a, b);
    }
    return similarity(a, b);
}

}  // namespace hir
