#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include <ssflow/csv.hpp>
#include <ssflow/equivalence.hpp>
#include <ssflow/errors.hpp>
#include <ssflow/solutions.hpp>
#include <ssflow/verification.hpp>

namespace ssflow
{

VerificationGrid default_grid()
{
    return {{-1.0 / 3.0, 1.0 / 5.0, 1.0 / 4.0, 1.0 / 2.0, 2.0, 3.0}, {1.0, 3.0, 4.0, 5.0}};
}

bool VerificationSummary::all_pass() const noexcept
{
    return std::all_of(checks.begin(), checks.end(), [](const Check &c) { return c.pass; });
}

double verification_tol_from_env()
{
    if (const char *env = std::getenv("SSFLOW_TOL")) {
        try {
            const double v = parse_double(env);
            if (v > 0) {
                return v;
            }
        } catch (const Error &) {
        }
    }
    return default_verification_tol;
}

double line_start_psi(double slope, double span)
{
    if (slope <= 0) {
        return 1.0;
    }
    const double q = 10.0 / 11.0 * std::exp(-slope * span);
    return std::min(1.0, q / (1 - q));
}

double max_line_distance(const Trajectory &traj, double a1, double a2)
{
    double worst = 0;
    const double norm = std::sqrt(1 + a1 * a1);
    for (const auto &s : traj.states) {
        worst = std::max(worst, std::abs(s[1] - a1 * s[0] - a2) / norm);
    }
    return worst;
}

namespace
{

std::string cell_name(double m, double n, double beta)
{
    std::ostringstream os;
    os << "m=" << format_double(m) << " n=" << format_double(n) << " beta=" << format_double(beta);
    return os.str();
}

std::vector<double> betas_for(double m, double n)
{
    std::vector<double> out{0.0};
    const auto lines = line_betas_pme(m, n);
    for (const auto &b : {lines.beta1, lines.beta2}) {
        if (b) {
            out.push_back(*b);
        }
    }
    out.push_back(1.0);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

struct Checks {
    Check coefficients{"coefficient-identification"};
    Check beta_identity{"beta-identity"};
    Check b_ratio{"b-ratio"};
    Check sign_match{"sign-match"};
    Check round_trip{"round-trip"};
    Check ple_sum{"ple-sum-identity"};
    Check pme_sum{"pme-sum-identity"};
    Check line_condition{"straight-line-condition"};
    Check line_invariance{"line-invariance", line_distance_tol};
    Check critical{"critical-c3", 1e-12};
    Check yamabe{"yamabe-curve", yamabe_curve_tol};
    Check residuals{"closed-form-residuals", residual_tol};
};

std::string describe(const EquationParams &params)
{
    if (const auto *pme = std::get_if<PMEParams>(&params)) {
        return "pme " + cell_name(pme->m(), pme->n(), pme->beta());
    }
    const auto &ple = std::get<PLEParams>(params);
    return "ple p=" + format_double(ple.p()) + " n=" + format_double(ple.n()) + " beta=" + format_double(ple.beta());
}

// Lines only exist for sgn(b) = +1; other cells are reported as skipped.
void check_line(Check &condition, Check &invariance, const EquationParams &params, std::vector<std::string> &skipped)
{
    const auto c = unified_coefficients(params);
    if (c.critical || c.const_term != 1 || c.psi_coeff != 1) {
        skipped.push_back(describe(params) + ": no straight line (critical or b < 0)");
        return;
    }
    condition.record(std::abs(straight_line_condition(c)));
    const auto line = straight_line(c, 1e-9);
    if (!line) {
        invariance.record(std::numeric_limits<double>::infinity());
        return;
    }
    const double span = 5;
    const double psi0 = line_start_psi(line->first, span);
    const PhaseState start{psi0, line->first * psi0 + line->second};
    const auto traj = integrate_unified(c, start, 0, span);
    if (traj.status != IntegrationStatus::Completed) {
        invariance.record(std::numeric_limits<double>::infinity());
        return;
    }
    invariance.record(max_line_distance(traj, line->first, line->second));
}

} // namespace

VerificationSummary run_verification(const VerificationGrid &grid, double tol)
{
    Checks k;
    for (Check *c : {&k.coefficients, &k.beta_identity, &k.b_ratio, &k.sign_match, &k.round_trip, &k.ple_sum,
                     &k.pme_sum, &k.line_condition}) {
        c->tol = tol;
    }
    VerificationSummary summary;

    for (double m : grid.m_values) {
        for (double n : grid.n_values) {
            // Dimension sums depend on (m, n) only.
            const auto crit = critical_exponents(n);
            if (!near(m, 0, default_critical_tol) && !near(m, crit.m_c, default_critical_tol)
                && !near(n, 2, default_critical_tol)) {
                const double n1 = mapped_dimension(m, n, Branch::Branch1);
                const double n2 = mapped_dimension(m, n, Branch::Branch2);
                k.ple_sum.record(std::abs(ple_sum_identity(m + 1, n1, n2)));
                const double partner = source_dimension(m + 1, n1, Branch::Branch2);
                k.pme_sum.record(std::abs(pme_sum_identity(m, n, partner)));
            }

            for (double beta : betas_for(m, n)) {
                const PMEParams pme(m, n, beta, SimilarityType::TypeI);
                if (unified_coefficients(pme).critical) {
                    summary.skipped.push_back(cell_name(m, n, beta) + ": critical exponent");
                    continue;
                }
                for (Branch branch : {Branch::Branch1, Branch::Branch2}) {
                    const char *bname = branch == Branch::Branch1 ? " branch=1" : " branch=2";
                    try {
                        const PLEParams ple = pme_to_ple(pme, branch);
                        const auto report = verify_equivalence(pme, ple, tol);
                        k.coefficients.record(report.c_match ? report.c_max_dev : std::max(report.c_max_dev, 1.0));
                        if (report.orientation < 0) {
                            ++summary.reversed_cells;
                        }
                        k.beta_identity.record(report.beta_identity_dev);
                        k.b_ratio.record(report.b_ratio_dev);
                        k.sign_match.record(report.sign_match ? 0.0 : 1.0);

                        const PMEParams back = ple_to_pme(ple, branch);
                        k.round_trip.record(std::max({scaled_deviation(back.m(), m), scaled_deviation(back.n(), n),
                                                      scaled_deviation(back.beta(), beta)}));
                    } catch (const Error &e) {
                        summary.skipped.push_back(cell_name(m, n, beta) + bname + ": " + e.what());
                    }
                }
            }

            // Straight lines at the PME exponents and at the PLE exponents with p = m + 1.
            const auto pme_lines = line_betas_pme(m, n);
            const auto ple_lines = line_betas_ple(m + 1, n);
            for (const auto &b : {pme_lines.beta1, pme_lines.beta2}) {
                if (b) {
                    check_line(k.line_condition, k.line_invariance, PMEParams(m, n, *b), summary.skipped);
                }
            }
            if (!near(m + 1, 1, default_critical_tol)) {
                for (const auto &b : {ple_lines.beta1, ple_lines.beta2}) {
                    if (b) {
                        check_line(k.line_condition, k.line_invariance, PLEParams(m + 1, n, *b), summary.skipped);
                    }
                }
            }
        }
    }

    for (double n : grid.n_values) {
        // Below n = 2 the critical PLE exponent is at most 1 and the PME scale changes sign.
        if (!(n > 2) || near(n, 2, default_critical_tol)) {
            continue;
        }
        const auto crit = critical_exponents(n);
        k.critical.record(std::abs(unified_coefficients(PMEParams(crit.m_c, n, 1.0)).c3 + 1));
        k.critical.record(std::abs(unified_coefficients(PLEParams(crit.p_c, n, 1.0)).c3 + 1));

        {
            for (const auto &profile : {loewner_nirenberg_pme(n, 1.0), yamabe_ple(n, 1.0)}) {
                for (double eta : interior_points(profile, 20)) {
                    const auto v = profile.evaluate(eta);
                    const ProfileSample sample{eta, v->f, v->fprime};
                    const PhaseState s = std::visit([&](const auto &p) { return profile_to_state(sample, p); },
                                                    profile.params());
                    k.yamabe.record(std::abs(s.psi - yamabe_curve(n, s.phi)));
                }
                k.residuals.record(max_abs_residual(profile));
            }
        }
    }

    // The dipoles are checked at n = 1. For n > 2 their terms grow like a negative power of eta
    // near the origin and the absolute residual measures cancellation, not the formula.
    for (const auto &profile : {barenblatt_pme(2, 1, 1), barenblatt_pme(3, 3, 1), barenblatt_ple(3, 1, 1),
                                barenblatt_ple(2.5, 3, 1), dipole_pme(2, 1, 1), dipole_pme(3, 1, 1),
                                dipole_derivative_ple(3, 1, 1), dipole_derivative_ple(2.5, 1, 1)}) {
        k.residuals.record(max_abs_residual(profile));
    }

    summary.checks = {k.coefficients, k.beta_identity, k.b_ratio,        k.sign_match,
                      k.round_trip,   k.ple_sum,       k.pme_sum,        k.line_condition,
                      k.line_invariance, k.critical,   k.yamabe,         k.residuals};
    return summary;
}

std::optional<NamedTrajectory> named_trajectory(std::string_view name)
{
    if (name == "barenblatt-line") {
        const PMEParams params(2, 1, 1.0 / 3.0, SimilarityType::TypeI);
        const auto c = unified_coefficients(params);
        const double slope = c.c2 / (c.c1 - 1);
        const double psi0 = line_start_psi(slope, 5);
        return NamedTrajectory{std::string(name), params, {psi0, slope * (psi0 + 1)}, 5};
    }
    if (name == "yamabe-orbit") {
        const double n = 3;
        const PMEParams params(critical_exponents(n).m_s, n, 0, SimilarityType::TypeII);
        return NamedTrajectory{std::string(name), params, {yamabe_curve(n, 0), 0}, 2};
    }
    return std::nullopt;
}

std::vector<std::string> named_trajectory_names()
{
    return {"barenblatt-line", "yamabe-orbit"};
}

Trajectory integrate_named(const NamedTrajectory &named)
{
    auto traj = integrate_unified(unified_coefficients(named.params), named.start, 0, named.r1_end);
    traj.origin = named.params;
    return traj;
}

} // namespace ssflow
