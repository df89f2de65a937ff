#include "hilbert_ir/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hilbert_ir/error.hpp"

namespace hir {

namespace {

constexpr unsigned max_order = 10000;
constexpr double cd_switch = 1e-6;
constexpr double bisection_tolerance = 1e-9;

[[noreturn]] void domain_error(const std::string& what) { throw Error(ErrorCode::domain, what); }

void check_x(const BasisSpec& spec, double x)
{
    if (!std::isfinite(x) || x < 0.0) {
        domain_error("position " + std::to_string(x) + " outside the basis domain");
    }
    if (spec.kind != BasisKind::laguerre && x > spec.domain_length) {
        domain_error(
            "position " + std::to_string(x) + " beyond domain length "
            + std::to_string(spec.domain_length));
    }
}

// Legendre P_0..P_{out.size()-1} at u in [-1, 1].
void legendre_values(double u, std::span<double> out)
{
    if (out.empty()) {
        return;
    }
    out[0] = 1.0;
    if (out.size() > 1) {
        out[1] = u;
    }
    for (std::size_t k = 1; k + 1 < out.size(); ++k) {
        auto kd = static_cast<double>(k);
        out[k + 1] = ((2.0 * kd + 1.0) * u * out[k] - kd * out[k - 1]) / (kd + 1.0);
    }
}

void laguerre_values(double t, std::span<double> out)
{
    if (out.empty()) {
        return;
    }
    out[0] = 1.0;
    if (out.size() > 1) {
        out[1] = 1.0 - t;
    }
    for (std::size_t k = 1; k + 1 < out.size(); ++k) {
        auto kd = static_cast<double>(k);
        out[k + 1] = ((2.0 * kd + 1.0 - t) * out[k] - kd * out[k - 1]) / (kd + 1.0);
    }
}

std::vector<Interval> merged(std::span<const Interval> intervals)
{
    std::vector<Interval> sorted(intervals.begin(), intervals.end());
    std::sort(sorted.begin(), sorted.end(), [](const Interval& a, const Interval& b) {
        return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
    });
    std::vector<Interval> out;
    for (const auto& iv : sorted) {
        if (!out.empty() && iv.lo <= out.back().hi) {
            out.back().hi = std::max(out.back().hi, iv.hi);
        } else {
            out.push_back(iv);
        }
    }
    return out;
}

void fourier_integrals(const BasisSpec& spec, std::span<const Interval> intervals, std::span<double> gamma)
{
    const double length = spec.domain_length;
    const double amplitude = std::sqrt(2.0 / length);
    for (const auto& iv : intervals) {
        gamma[0] += (iv.hi - iv.lo) / std::sqrt(length);
        const double mid = 0.5 * (iv.lo + iv.hi);
        const double half = 0.5 * (iv.hi - iv.lo);
        for (unsigned j = 1; 2 * j <= spec.order; ++j) {
            const double omega = 2.0 * std::numbers::pi * j / length;
            // product-to-sum forms of cos(wa) - cos(wb) and sin(wb) - sin(wa)
            const double width = 2.0 * std::sin(omega * half) / omega;
            gamma[2 * j - 1] += amplitude * std::sin(omega * mid) * width;
            gamma[2 * j] += amplitude * std::cos(omega * mid) * width;
        }
    }
}

// Antiderivative of P*_k(t): t for k = 0, (P_{k+1} - P_{k-1}) / (2(2k+1)) with
// P evaluated at u = 2t - 1 otherwise.
void legendre_antiderivatives(double t, std::span<double> p, std::span<double> out)
{
    legendre_values(2.0 * t - 1.0, p);
    out[0] = t;
    for (std::size_t k = 1; k < out.size(); ++k) {
        out[k] = (p[k + 1] - p[k - 1]) / (2.0 * (2.0 * static_cast<double>(k) + 1.0));
    }
}

void legendre_integrals(const BasisSpec& spec, std::span<const Interval> intervals, std::span<double> gamma)
{
    const double length = spec.domain_length;
    const std::size_t n = spec.size();
    std::vector<double> p(n + 1);
    std::vector<double> upper(n);
    std::vector<double> lower(n);
    std::vector<double> sum(n, 0.0);
    for (const auto& iv : intervals) {
        legendre_antiderivatives(iv.hi / length, p, upper);
        legendre_antiderivatives(iv.lo / length, p, lower);
        for (std::size_t k = 0; k < n; ++k) {
            sum[k] += upper[k] - lower[k];
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        gamma[k] = std::sqrt((2.0 * static_cast<double>(k) + 1.0) * length) * sum[k];
    }
}

// integral of e^{-t/2} L_k(t) dt = e^{-t/2} G_k(t),
// G_k = -2 L_k + 4 A_k,  A_0 = 0,  A_k = L_{k-1} - A_{k-1}.
void laguerre_antiderivatives(double t, std::span<double> values, std::span<double> out)
{
    laguerre_values(t, values);
    const double weight = std::exp(-0.5 * t);
    double alternating = 0.0;
    for (std::size_t k = 0; k < out.size(); ++k) {
        if (k > 0) {
            alternating = values[k - 1] - alternating;
        }
        out[k] = weight * (-2.0 * values[k] + 4.0 * alternating);
    }
}

void laguerre_integrals(const BasisSpec& spec, std::span<const Interval> intervals, std::span<double> gamma)
{
    const double scale = spec.laguerre_scale;
    const std::size_t n = spec.size();
    std::vector<double> values(n);
    std::vector<double> upper(n);
    std::vector<double> lower(n);
    for (const auto& iv : intervals) {
        laguerre_antiderivatives(iv.hi / scale, values, upper);
        laguerre_antiderivatives(iv.lo / scale, values, lower);
        for (std::size_t k = 0; k < n; ++k) {
            gamma[k] += std::sqrt(scale) * (upper[k] - lower[k]);
        }
    }
}

double kernel_cd_scale(const BasisSpec& spec)
{
    const auto n = static_cast<double>(spec.order);
    if (spec.kind == BasisKind::legendre) {
        return 0.5 * spec.domain_length * (n + 1.0) / std::sqrt((2.0 * n + 1.0) * (2.0 * n + 3.0));
    }
    return -spec.laguerre_scale * (n + 1.0);
}

std::size_t kernel_terms(const BasisSpec& spec)
{
    return spec.kind == BasisKind::fourier ? 2 * spec.order + 1 : spec.order + 1;
}

double kernel_value(const BasisSpec& spec, double y, double x)
{
    const double length = spec.domain_length;
    const double u = y - x;
    if (spec.kind == BasisKind::fourier) {
        const double wrapped = std::fabs(std::remainder(u, length));
        if (wrapped < cd_switch * length) {
            return projection_kernel_direct(spec, y, x);
        }
        // Equal to the cosine-difference form; the sine ratio avoids the
        // O(u^2) cancellation in numerator and denominator.
        const double m = 2.0 * spec.order + 1.0;
        const double theta = std::numbers::pi * u / length;
        return std::sin(m * theta) / (length * std::sin(theta));
    }
    if (std::fabs(u) < cd_switch * length) {
        return projection_kernel_direct(spec, y, x);
    }
    const std::size_t n = spec.order;
    std::vector<double> at_y(n + 2);
    std::vector<double> at_x(n + 2);
    eval_basis(spec, y, at_y);
    eval_basis(spec, x, at_x);
    return kernel_cd_scale(spec) * (at_y[n + 1] * at_x[n] - at_y[n] * at_x[n + 1]) / u;
}

double scan_step(const BasisSpec& spec)
{
    switch (spec.kind) {
    case BasisKind::fourier:
        return spec.domain_length / (100.0 * (2.0 * spec.order + 1.0));
    case BasisKind::legendre:
        return spec.domain_length / (100.0 * (spec.order + 1.0));
    case BasisKind::laguerre:
        return spec.laguerre_scale / 50.0;
    }
    return spec.domain_length / 1000.0;
}

double scan_limit(const BasisSpec& spec, double y)
{
    if (spec.kind == BasisKind::laguerre) {
        return 2.0 * std::max({y, spec.domain_length, spec.laguerre_scale * (4.0 * spec.order + 6.0)});
    }
    return spec.domain_length;
}

// First x between y and `bound` (walking in direction sign(bound - y)) where
// the kernel stops being positive.
double first_zero(const BasisSpec& spec, double y, double bound)
{
    const double direction = bound > y ? 1.0 : -1.0;
    const double step = scan_step(spec);
    const double tolerance = bisection_tolerance * spec.domain_length;
    double inside = y;
    while (direction * (bound - inside) > 0.0) {
        double probe = inside + direction * step;
        if (direction * (probe - bound) > 0.0) {
            probe = bound;
        }
        if (kernel_value(spec, y, probe) <= 0.0) {
            double outside = probe;
            while (std::fabs(outside - inside) > tolerance) {
                const double mid = 0.5 * (inside + outside);
                if (kernel_value(spec, y, mid) > 0.0) {
                    inside = mid;
                } else {
                    outside = mid;
                }
            }
            return 0.5 * (inside + outside);
        }
        inside = probe;
    }
    return bound;
}

}  // namespace

const char* to_string(BasisKind kind)
{
    switch (kind) {
    case BasisKind::fourier: return "fourier";
    case BasisKind::legendre: return "legendre";
    case BasisKind::laguerre: return "laguerre";
    }
    return "unknown";
}

BasisKind parse_basis_kind(const std::string_view name)
{
    if (name == "fourier") {
        return BasisKind::fourier;
    }
    if (name == "legendre") {
        return BasisKind::legendre;
    }
    if (name == "laguerre") {
        return BasisKind::laguerre;
    }
    throw Error(ErrorCode::configuration, "unknown basis '" + std::string(name) + "'");
}

BasisSpec BasisSpec::fourier(unsigned order, double length)
{
    BasisSpec spec{BasisKind::fourier, order, length, 0.0};
    spec.validate();
    return spec;
}

BasisSpec BasisSpec::legendre(unsigned order, double length)
{
    BasisSpec spec{BasisKind::legendre, order, length, 0.0};
    spec.validate();
    return spec;
}

BasisSpec BasisSpec::laguerre(unsigned order, double length, double scale)
{
    BasisSpec spec{BasisKind::laguerre, order, length, scale > 0.0 ? scale : default_laguerre_fraction * length};
    spec.validate();
    return spec;
}

void BasisSpec::validate() const
{
    if (order > max_order) {
        throw Error(ErrorCode::configuration, "order " + std::to_string(order) + " exceeds " + std::to_string(max_order));
    }
    if (!(domain_length > 0.0) || !std::isfinite(domain_length)) {
        throw Error(ErrorCode::configuration, "domain length must be positive and finite");
    }
    if (kind == BasisKind::fourier && order % 2 != 0) {
        throw Error(
            ErrorCode::configuration,
            "fourier order must be even (n = 2k pairs k sines with k cosines), got " + std::to_string(order));
    }
    if (kind == BasisKind::laguerre && (!(laguerre_scale > 0.0) || !std::isfinite(laguerre_scale))) {
        throw Error(ErrorCode::configuration, "laguerre scale must be positive and finite");
    }
}

BasisSpec BasisSpec::with_order(unsigned n) const
{
    BasisSpec spec = *this;
    spec.order = n;
    spec.validate();
    return spec;
}

void eval_basis(const BasisSpec& spec, double x, std::span<double> out)
{
    check_x(spec, x);
    const double length = spec.domain_length;
    switch (spec.kind) {
    case BasisKind::fourier: {
        const double amplitude = std::sqrt(2.0 / length);
        for (std::size_t k = 0; k < out.size(); ++k) {
            if (k == 0) {
                out[k] = 1.0 / std::sqrt(length);
                continue;
            }
            const double angle = 2.0 * std::numbers::pi * static_cast<double>((k + 1) / 2) * x / length;
            out[k] = amplitude * (k % 2 == 1 ? std::sin(angle) : std::cos(angle));
        }
        break;
    }
    case BasisKind::legendre:
        legendre_values(2.0 * x / length - 1.0, out);
        for (std::size_t k = 0; k < out.size(); ++k) {
            out[k] *= std::sqrt((2.0 * static_cast<double>(k) + 1.0) / length);
        }
        break;
    case BasisKind::laguerre: {
        const double scale = spec.laguerre_scale;
        laguerre_values(x / scale, out);
        const double weight = std::exp(-0.5 * x / scale) / std::sqrt(scale);
        for (auto& v : out) {
            v *= weight;
        }
        break;
    }
    }
}

double eval_basis_function(const BasisSpec& spec, unsigned k, double x)
{
    spec.validate();
    if (k > spec.order) {
        domain_error("basis index " + std::to_string(k) + " exceeds order " + std::to_string(spec.order));
    }
    std::vector<double> values(k + 1);
    eval_basis(spec, x, values);
    return values[k];
}

std::vector<double> interval_coefficients(const BasisSpec& spec, std::span<const Interval> intervals)
{
    spec.validate();
    for (const auto& iv : intervals) {
        if (!(iv.lo <= iv.hi)) {
            domain_error("interval with lo > hi");
        }
        check_x(spec, iv.lo);
        check_x(spec, iv.hi);
    }
    const auto pieces = merged(intervals);
    std::vector<double> gamma(spec.size(), 0.0);
    switch (spec.kind) {
    case BasisKind::fourier: fourier_integrals(spec, pieces, gamma); break;
    case BasisKind::legendre: legendre_integrals(spec, pieces, gamma); break;
    case BasisKind::laguerre: laguerre_integrals(spec, pieces, gamma); break;
    }
    return gamma;
}

std::vector<double> indicator_coefficients(
    const BasisSpec& spec, std::span<const std::uint32_t> positions, std::uint32_t doc_length)
{
    if (doc_length == 0) {
        domain_error("document length must be at least 1");
    }
    std::vector<Interval> intervals;
    intervals.reserve(positions.size());
    std::uint32_t previous = 0;
    for (auto p : positions) {
        if (p < 1 || p > doc_length) {
            domain_error("position " + std::to_string(p) + " outside [1, " + std::to_string(doc_length) + "]");
        }
        if (p <= previous) {
            domain_error("positions must be strictly increasing");
        }
        previous = p;
        const double lo = (static_cast<double>(p - 1) * spec.domain_length) / doc_length;
        const double hi = (static_cast<double>(p) * spec.domain_length) / doc_length;
        if (!intervals.empty() && intervals.back().hi == lo) {
            intervals.back().hi = hi;
        } else {
            intervals.push_back({lo, hi});
        }
    }
    return interval_coefficients(spec, intervals);
}

std::vector<double> legendre_coefficients_monomial(
    unsigned order, double length, std::span<const std::uint32_t> positions)
{
    if (order > 20) {
        throw Error(ErrorCode::configuration, "monomial Legendre route is limited to order 20");
    }
    const auto spec = BasisSpec::legendre(order, length);
    std::vector<double> gamma(spec.size(), 0.0);
    for (unsigned k = 0; k <= order; ++k) {
        // a_j of P*_k(x) = sum_j (-1)^(k+j) C(k,j) C(k+j,j) x^j
        double binom_k_j = 1.0;
        double binom_kj_j = 1.0;
        for (unsigned j = 0; j <= k; ++j) {
            if (j > 0) {
                binom_k_j = binom_k_j * (k - j + 1) / j;
                binom_kj_j = binom_kj_j * (k + j) / j;
            }
            const double a_j = ((k + j) % 2 == 0 ? 1.0 : -1.0) * binom_k_j * binom_kj_j;
            const double alpha = std::sqrt((2.0 * k + 1.0) * length) * a_j / (j + 1.0);
            for (auto p : positions) {
                if (p < 1 || static_cast<double>(p) > length) {
                    domain_error("position outside the document");
                }
                gamma[k] += alpha
                    * (std::pow(p / length, j + 1.0) - std::pow((p - 1.0) / length, j + 1.0));
            }
        }
    }
    return gamma;
}

double projection_kernel_direct(const BasisSpec& spec, double y, double x)
{
    spec.validate();
    const std::size_t terms = kernel_terms(spec);
    std::vector<double> at_y(terms);
    std::vector<double> at_x(terms);
    eval_basis(spec, y, at_y);
    eval_basis(spec, x, at_x);
    double sum = 0.0;
    for (std::size_t k = 0; k < terms; ++k) {
        sum += at_y[k] * at_x[k];
    }
    return sum;
}

KernelValue projection_kernel(const BasisSpec& spec, double y, double x)
{
    spec.validate();
    check_x(spec, y);
    check_x(spec, x);
    return {y, x, kernel_value(spec, y, x)};
}

KernelZeros kernel_zeros(const BasisSpec& spec, double y)
{
    spec.validate();
    check_x(spec, y);
    return {first_zero(spec, y, 0.0), first_zero(spec, y, scan_limit(spec, y))};
}

double interaction_range(const BasisSpec& spec, double y)
{
    spec.validate();
    check_x(spec, y);
    if (spec.kind == BasisKind::fourier) {
        return 2.0 * spec.domain_length / (2.0 * spec.order + 1.0);
    }
    const auto zeros = kernel_zeros(spec, y);
    return zeros.right - zeros.left;
}

}  // namespace hir
