#include <algorithm>
#include <cmath>

#include <ssflow/equivalence.hpp>
#include <ssflow/errors.hpp>

namespace ssflow
{

double mapped_dimension(double m, double n, Branch branch) noexcept
{
    if (branch == Branch::Branch1) {
        return (n - 2) * (m + 1) / (2 * m);
    }
    return (n - 2) * (m + 1) / (n - 2 - n * m);
}

double source_dimension(double p, double n_prime, Branch branch) noexcept
{
    if (branch == Branch::Branch1) {
        return 2 + 2 * (p - 1) * n_prime / p;
    }
    return 2 * (n_prime - p) / (n_prime * (2 - p) - p);
}

double beta_ratio(double m, double n, Branch branch) noexcept
{
    if (branch == Branch::Branch1) {
        return 2 * m / (m + 1);
    }
    return (n * (m - 1) + 2) / (m + 1);
}

PLEParams pme_to_ple(const PMEParams &params, Branch branch, double tol)
{
    const double m = params.m();
    const double n = params.n();

    if (near(n, 2, tol)) {
        throw Error(ErrorCode::DimensionTwo, "n=2 unsupported", n);
    }
    if (branch == Branch::Branch1 && near(m, 0, tol)) {
        throw Error(ErrorCode::Degenerate, "m = 0 has no first-branch image", m);
    }
    if (near(m, critical_exponents(n).m_c, tol)) {
        throw Error(ErrorCode::Degenerate, "m = m_c(n) has no double dimension map", m);
    }

    const double n_prime = mapped_dimension(m, n, branch);
    if (!(n_prime > 0) || !std::isfinite(n_prime)) {
        throw Error(ErrorCode::UnphysicalDimension, "mapped dimension n' is not positive", n_prime);
    }
    return PLEParams(m + 1, n_prime, params.beta() * beta_ratio(m, n, branch), params.type());
}

PMEParams ple_to_pme(const PLEParams &params, Branch branch, double tol)
{
    const double p = params.p();
    const double n_prime = params.n();

    if (near(p, 1, tol)) {
        throw Error(ErrorCode::Degenerate, "p = 1 has no PME preimage", p);
    }
    if (near(p, critical_exponents(n_prime).p_c, tol)) {
        throw Error(ErrorCode::Critical, "p = p_c(n') has no double dimension map", p);
    }

    const double n = source_dimension(p, n_prime, branch);
    if (!std::isfinite(n)) {
        throw Error(ErrorCode::Degenerate, "dimension inverse has a vanishing denominator", n);
    }
    if (!(n > 0)) {
        throw Error(ErrorCode::UnphysicalDimension, "recovered dimension n is not positive", n);
    }
    const double m = p - 1;
    return PMEParams(m, n, params.beta() / beta_ratio(m, n, branch), params.type());
}

PMEParams self_map(const PMEParams &params, Branch first, Branch second)
{
    return ple_to_pme(pme_to_ple(params, first), second);
}

PLEParams self_map(const PLEParams &params, Branch first, Branch second)
{
    return pme_to_ple(ple_to_pme(params, first), second);
}

double ple_sum_identity(double p, double n_prime_1, double n_prime_2) noexcept
{
    return 1 / n_prime_1 + 1 / n_prime_2 - (2 - p) / p;
}

double pme_sum_identity(double m, double n_1, double n_2) noexcept
{
    return 1 / (n_1 - 2) + 1 / (n_2 - 2) - (1 - m) / (2 * m);
}

double scaled_deviation(double a, double b) noexcept
{
    if (a == b) {
        return 0;
    }
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

EquivalenceReport verify_equivalence(const PMEParams &pme, const PLEParams &ple, double tol)
{
    const auto cp = unified_coefficients(pme);
    const auto cl = unified_coefficients(ple);
    if (cp.critical || cl.critical) {
        throw Error(ErrorCode::Critical, "equivalence identities divide by b; critical parameters refused");
    }

    EquivalenceReport report;
    report.tol = tol;

    // Phi -> -Phi with r1 -> -r1 flips c2 and c3 and leaves the rest; the second root of the
    // dimension condition lands there, so both orientations are measured.
    const auto deviation = [&](double sign) {
        return std::max({scaled_deviation(cp.c1, cl.c1), scaled_deviation(cp.c2, sign * cl.c2),
                         scaled_deviation(cp.c3, sign * cl.c3)});
    };
    report.c_max_dev_literal = deviation(1);
    const double reversed = deviation(-1);
    report.orientation = reversed < report.c_max_dev_literal ? -1 : 1;
    report.c_max_dev = std::min(report.c_max_dev_literal, reversed);
    const bool same_terms = cp.const_term == cl.const_term && cp.psi_coeff == cl.psi_coeff;
    report.c_match = report.c_max_dev <= tol && same_terms;
    report.c_match_literal = report.c_max_dev_literal <= tol && same_terms;

    const double n = pme.n();
    const double n_prime = ple.n();
    const double lhs = pme.beta() * pme.beta() * (n - 2) * (n - 2);
    const double rhs = ple.beta() * n_prime * ple.beta() * n_prime;
    report.beta_identity_dev = scaled_deviation(lhs, rhs);
    report.beta_identity = report.beta_identity_dev <= tol;

    const double b = reduction_b(pme);
    const double b_prime = reduction_b(ple);
    report.b_ratio_dev = scaled_deviation(b_prime / b, n_prime * n_prime / ((n - 2) * (n - 2)));
    report.b_ratio = report.b_ratio_dev <= tol;
    report.sign_match = (b > 0) == (b_prime > 0);

    const double m = pme.m();
    report.sum_identity_value = 1 / mapped_dimension(m, n, Branch::Branch1)
                                + 1 / mapped_dimension(m, n, Branch::Branch2) - (1 - m) / (m + 1);
    return report;
}

} // namespace ssflow
