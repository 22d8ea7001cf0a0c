#include <algorithm>
#include <cmath>
#include <string>

#include <ssflow/errors.hpp>
#include <ssflow/params.hpp>

namespace ssflow
{

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
        case ErrorCode::InvalidParameter:
            return "invalid-parameter";
        case ErrorCode::Domain:
            return "domain";
        case ErrorCode::Degenerate:
            return "degenerate";
        case ErrorCode::DimensionTwo:
            return "dimension-two";
        case ErrorCode::Critical:
            return "critical";
        case ErrorCode::UnphysicalDimension:
            return "unphysical-dimension";
        case ErrorCode::Orientation:
            return "orientation";
        case ErrorCode::SingularEvaluation:
            return "singular-evaluation";
        case ErrorCode::OutsideSupport:
            return "outside-support";
        case ErrorCode::Unrecoverable:
            return "unrecoverable";
        case ErrorCode::Integration:
            return "integration";
        case ErrorCode::Comparison:
            return "comparison";
        case ErrorCode::Io:
            return "io";
    }
    return "unknown";
}

namespace
{

constexpr double linear_exclusion = 1e-12;

void check_common(double exponent, double n, double beta, const char *name)
{
    if (!std::isfinite(exponent) || !std::isfinite(n) || !std::isfinite(beta)) {
        throw Error(ErrorCode::InvalidParameter, std::string("non-finite parameter for ") + name);
    }
    if (!(n > 0)) {
        throw Error(ErrorCode::InvalidParameter, "dimension n must be positive", n);
    }
}

} // namespace

int psi_coefficient(SimilarityType type) noexcept
{
    switch (type) {
        case SimilarityType::TypeI:
            return 1;
        case SimilarityType::TypeII:
            return -1;
        case SimilarityType::TypeIII:
            return 0;
    }
    return 0;
}

bool near(double x, double target, double tol) noexcept
{
    return std::abs(x - target) <= tol * std::max(1.0, std::abs(target));
}

PMEParams::PMEParams(double m, double n, double beta, SimilarityType type)
    : m_m(m), m_n(n), m_beta(beta), m_type(type)
{
    check_common(m, n, beta, "PME");
    if (std::abs(m - 1) < linear_exclusion) {
        throw Error(ErrorCode::InvalidParameter, "m = 1 is the linear heat equation", m);
    }
}

PLEParams::PLEParams(double p, double n, double beta, SimilarityType type)
    : m_p(p), m_n(n), m_beta(beta), m_type(type)
{
    check_common(p, n, beta, "PLE");
    if (std::abs(p - 2) < linear_exclusion) {
        throw Error(ErrorCode::InvalidParameter, "p = 2 is the linear heat equation", p);
    }
}

// (m-1) alpha + 2 beta = +1 (I), -1 (II);  alpha (1-m) = 2 beta (III).
double alpha_from(const PMEParams &params) noexcept
{
    const double m = params.m();
    const double beta = params.beta();
    switch (params.type()) {
        case SimilarityType::TypeI:
            return (1 - 2 * beta) / (m - 1);
        case SimilarityType::TypeII:
            return (-1 - 2 * beta) / (m - 1);
        case SimilarityType::TypeIII:
            return 2 * beta / (1 - m);
    }
    return 0;
}

// (p-2) alpha + p beta = +1 (I), -1 (II);  alpha (2-p) = p beta (III).
double alpha_from(const PLEParams &params) noexcept
{
    const double p = params.p();
    const double beta = params.beta();
    switch (params.type()) {
        case SimilarityType::TypeI:
            return (1 - p * beta) / (p - 2);
        case SimilarityType::TypeII:
            return (-1 - p * beta) / (p - 2);
        case SimilarityType::TypeIII:
            return p * beta / (2 - p);
    }
    return 0;
}

double alpha_from(const EquationParams &params) noexcept
{
    return std::visit([](const auto &p) { return alpha_from(p); }, params);
}

CriticalExponents critical_exponents(double n)
{
    if (!(n > 0) || !std::isfinite(n)) {
        throw Error(ErrorCode::Domain, "critical exponents need n > 0", n);
    }
    return {(n - 2) / n, (n - 2) / (n + 2), 2 * n / (n + 1), 2 * n / (n + 2)};
}

// 2n(m - m_c)/(m-1), expanded so that b = 0 is hit exactly at m = m_c.
double reduction_b(const PMEParams &params) noexcept
{
    const double m = params.m();
    const double n = params.n();
    return 2 * (n * (m - 1) + 2) / (m - 1);
}

// p(n+1)(p - p_c)/((p-2)(p-1)), expanded likewise.
double reduction_b(const PLEParams &params)
{
    const double p = params.p();
    const double n = params.n();
    if (std::abs(p - 1) < linear_exclusion) {
        throw Error(ErrorCode::Degenerate, "p = 1 makes the reduction parameter b infinite", p);
    }
    return p * ((n + 1) * p - 2 * n) / ((p - 2) * (p - 1));
}

UnifiedCoefficients unified_coefficients(const PMEParams &params, double critical_tol)
{
    const double m = params.m();
    const double n = params.n();
    const auto crit = critical_exponents(n);

    UnifiedCoefficients out;
    out.c1 = m / (m - 1);
    out.psi_coeff = psi_coefficient(params.type());

    if (near(m, crit.m_c, critical_tol)) {
        if (near(n, 2, critical_tol)) {
            throw Error(ErrorCode::Degenerate, "critical PME at n = 2 has no substitute scale", n);
        }
        out.critical = true;
        out.sqrt_abs_b = n - 2;
        // Evaluated at m_c itself: the closed form collapses to -1.
        out.c3 = ((n + 2) * crit.m_c - (n - 2)) / ((crit.m_c - 1) * out.sqrt_abs_b);
        out.const_term = 0;
    } else {
        const double b = reduction_b(params);
        out.sqrt_abs_b = std::sqrt(std::abs(b));
        out.c3 = ((n + 2) * m - (n - 2)) / ((m - 1) * out.sqrt_abs_b);
        out.const_term = b > 0 ? 1 : -1;
    }
    out.c2 = params.beta() * out.sqrt_abs_b;
    return out;
}

UnifiedCoefficients unified_coefficients(const PLEParams &params, double critical_tol)
{
    const double p = params.p();
    const double n = params.n();
    const auto crit = critical_exponents(n);

    if (std::abs(p - 1) < linear_exclusion) {
        throw Error(ErrorCode::Degenerate, "p = 1 makes the reduction parameter b infinite", p);
    }

    UnifiedCoefficients out;
    out.c1 = (p - 1) / (p - 2);
    out.psi_coeff = psi_coefficient(params.type());

    if (near(p, crit.p_c, critical_tol)) {
        out.critical = true;
        out.sqrt_abs_b = n;
        out.c3 = ((n + 2) * crit.p_c - 2 * n) / ((crit.p_c - 2) * out.sqrt_abs_b);
        out.const_term = 0;
    } else {
        const double b = reduction_b(params);
        out.sqrt_abs_b = std::sqrt(std::abs(b));
        out.c3 = ((n + 2) * p - 2 * n) / ((p - 2) * out.sqrt_abs_b);
        out.const_term = b > 0 ? 1 : -1;
    }
    out.c2 = params.beta() * out.sqrt_abs_b;
    return out;
}

UnifiedCoefficients unified_coefficients(const EquationParams &params, double critical_tol)
{
    return std::visit([critical_tol](const auto &p) { return unified_coefficients(p, critical_tol); }, params);
}

const char *to_string(Regime regime) noexcept
{
    switch (regime) {
        case Regime::Generic:
            return "generic";
        case Regime::CriticalBZero:
            return "critical-b-zero";
        case Regime::Yamabe:
            return "yamabe";
        case Regime::NearLinear:
            return "near-linear";
        case Regime::DimensionTwo:
            return "dimension-two";
    }
    return "unknown";
}

Regime classify_regime(const PMEParams &params, double tol) noexcept
{
    const auto crit = critical_exponents(params.n());
    if (near(params.m(), 1, tol)) {
        return Regime::NearLinear;
    }
    if (near(params.n(), 2, tol)) {
        return Regime::DimensionTwo;
    }
    if (near(params.m(), crit.m_c, tol)) {
        return Regime::CriticalBZero;
    }
    if (near(params.m(), crit.m_s, tol)) {
        return Regime::Yamabe;
    }
    return Regime::Generic;
}

Regime classify_regime(const PLEParams &params, double tol) noexcept
{
    const auto crit = critical_exponents(params.n());
    if (near(params.p(), 2, tol)) {
        return Regime::NearLinear;
    }
    if (near(params.n(), 2, tol)) {
        return Regime::DimensionTwo;
    }
    if (near(params.p(), crit.p_c, tol)) {
        return Regime::CriticalBZero;
    }
    if (near(params.p(), crit.p_s, tol)) {
        return Regime::Yamabe;
    }
    return Regime::Generic;
}

} // namespace ssflow
