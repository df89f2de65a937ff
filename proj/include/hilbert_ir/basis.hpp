#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace hir {

enum class BasisKind : std::uint8_t { fourier = 0, legendre = 1, laguerre = 2 };

const char* to_string(BasisKind kind);
BasisKind parse_basis_kind(const std::string_view name);

inline constexpr unsigned default_order = 6;
/// Laguerre scale as a fraction of the document length.
inline constexpr double default_laguerre_fraction = 0.075;

/// Which orthonormal family, where it lives and where it is truncated.
///
/// Fourier and Legendre functions are orthonormal on [0, domain_length];
/// Laguerre functions on [0, inf) with scale `laguerre_scale`. Fourier
/// accepts only even orders so sines and cosines come in pairs.
struct BasisSpec {
    BasisKind kind = BasisKind::legendre;
    unsigned order = default_order;
    double domain_length = 1.0;
    double laguerre_scale = 0.0;

    static BasisSpec fourier(unsigned order, double length);
    static BasisSpec legendre(unsigned order, double length);
    /// `scale <= 0` selects the default 0.075 * length.
    static BasisSpec laguerre(unsigned order, double length, double scale = 0.0);

    /// Throws ErrorCode::configuration when the invariants do not hold.
    void validate() const;

    [[nodiscard]] std::size_t size() const noexcept { return order + 1; }
    [[nodiscard]] BasisSpec with_order(unsigned n) const;

    bool operator==(const BasisSpec&) const = default;
};

/// Closed interval [lo, hi] on the basis domain.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// phi_k(x). Throws ErrorCode::domain for k > order or x outside the domain.
double eval_basis_function(const BasisSpec& spec, unsigned k, double x);

/// phi_0(x) .. phi_{out.size()-1}(x); `out` may be longer than spec.size().
void eval_basis(const BasisSpec& spec, double x, std::span<double> out);

/// gamma_k = integral over the union of `intervals` of phi_k, k = 0..order.
/// Computed from closed-form antiderivatives; intervals may touch but must
/// not overlap.
std::vector<double> interval_coefficients(const BasisSpec& spec, std::span<const Interval> intervals);

/// Expansion of the indicator of positions {p} with token intervals
/// [p-1, p] scaled by domain_length / doc_length. With domain_length equal
/// to doc_length this is the raw-domain expansion; with domain_length 1 the
/// normalized one.
std::vector<double> indicator_coefficients(
    const BasisSpec& spec, std::span<const std::uint32_t> positions, std::uint32_t doc_length);

/// Legendre coefficients via the monomial coefficients of P*_k. Only
/// usable for small orders (<= 20) before cancellation dominates; kept as
/// an independent route for checking indicator_coefficients.
std::vector<double> legendre_coefficients_monomial(
    unsigned order, double length, std::span<const std::uint32_t> positions);

struct KernelValue {
    double y = 0.0;
    double x = 0.0;
    double value = 0.0;
};

/// Projection kernel p_n(y, x).
///
/// Legendre and Laguerre use the Christoffel-Darboux form and switch to the
/// direct sum over k = 0..n when |y - x| < 1e-6 * L. The Fourier kernel of
/// order n = 2k is the Dirichlet form
///   [cos(2 pi n u / L) - cos(2 pi (n+1) u / L)] / [L (1 - cos(2 pi u / L))]
/// with u = y - x, which sums frequencies 0..n, i.e. it projects onto the
/// order-2n coefficient vector. Its zeros nearest y are at y +- L/(2n+1).
KernelValue projection_kernel(const BasisSpec& spec, double y, double x);

/// Direct sum of phi_k(y) phi_k(x) over the same functions the kernel
/// covers (k = 0..n, or k = 0..2n for Fourier).
double projection_kernel_direct(const BasisSpec& spec, double y, double x);

struct KernelZeros {
    double left = 0.0;
    double right = 0.0;
};

/// Zeros of p_n(y, .) bracketing the central lobe at y, located by
/// scanning outward from y and bisecting to 1e-9 * L. A side without a sign
/// change is clamped to the domain boundary (or the scan limit for Laguerre).
KernelZeros kernel_zeros(const BasisSpec& spec, double y);

/// Width of the kernel's central lobe. 2L/(2n+1) for Fourier; the distance
/// between kernel_zeros otherwise.
double interaction_range(const BasisSpec& spec, double y);

}  // namespace hir
