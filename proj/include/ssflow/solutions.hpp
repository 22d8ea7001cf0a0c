#ifndef SSFLOW_SOLUTIONS_HPP
#define SSFLOW_SOLUTIONS_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <ssflow/params.hpp>

namespace ssflow
{

enum class ProfileKind {
    BarenblattPME,
    BarenblattPLE,
    DipolePME,
    DipoleDerivativePLE,
    LoewnerNirenbergPME,
    YamabePLE,
    PowerLaw,
};

const char *to_string(ProfileKind kind) noexcept;

struct ProfileValue {
    double f = 0;
    double fprime = 0;
    double fsecond = 0;
};

// g(eta) = A eta^a (K + B eta^c)^e, defined where K + B eta^c > 0. Every explicit profile in the
// library is of this shape (or has a derivative of this shape).
struct PowerForm {
    double A = 1;
    double a = 0;
    double K = 1;
    double B = 0;
    double c = 1;
    double e = 0;

    // g, g', g''; nullopt where the base K + B eta^c is not positive.
    std::optional<ProfileValue> evaluate(double eta) const;
    // First positive eta where the base vanishes, if any.
    std::optional<double> support_end() const;
};

// An explicit self-similar profile together with the parameters it solves.
//
// evaluate() returns nullopt outside the positivity set so that points on or beyond a free
// boundary are never silently treated as solutions. For DipoleDerivativePLE the closed form is
// f'; f is recovered by adaptive quadrature with f = 0 at the right support endpoint (or at
// eta = 1 when the support is unbounded).
class ClosedFormProfile
{
public:
    ClosedFormProfile(ProfileKind kind, EquationParams params, std::map<std::string, double> constants,
                      PowerForm form);

    ProfileKind kind() const noexcept
    {
        return m_kind;
    }
    const EquationParams &params() const noexcept
    {
        return m_params;
    }
    const std::map<std::string, double> &constants() const noexcept
    {
        return m_constants;
    }
    const PowerForm &form() const noexcept
    {
        return m_form;
    }
    bool derivative_only() const noexcept
    {
        return m_kind == ProfileKind::DipoleDerivativePLE;
    }
    std::optional<double> support_end() const
    {
        return m_form.support_end();
    }

    std::optional<ProfileValue> evaluate(double eta) const;

    // Convenience accessors; Error(OutsideSupport) outside the positivity set.
    double f(double eta) const;
    double fprime(double eta) const;
    double fsecond(double eta) const;

private:
    ProfileKind m_kind;
    EquationParams m_params;
    std::map<std::string, double> m_constants;
    PowerForm m_form;
};

// f = (C - (m-1) beta eta^2 / 2)_+^{1/(m-1)} with beta = 1/(n(m-1)+2), alpha = n beta, Type I.
ClosedFormProfile barenblatt_pme(double m, double n, double C);

// f = (C - (p-2)/p beta^{1/(p-1)} eta^{p/(p-1)})_+^{(p-1)/(p-2)} with beta = 1/(n(p-2)+p),
// alpha = n beta, Type I. Obtained from |f'|^{p-2} f' = -beta eta f.
ClosedFormProfile barenblatt_ple(double p, double n, double C);

// f = eta^{-(n-2)/m} (K - eta^{(mn-n+2)/m} / b)_+^{1/(m-1)}, beta = 1/(2m), Type I.
ClosedFormProfile dipole_pme(double m, double n, double K);

// f' = eta^{-(n-1)/(p-1)} (c - eta^{(p-2)b/p} / ((p-1)b))_+^{1/(p-2)}, beta = 1/p, alpha = 0, Type I.
ClosedFormProfile dipole_derivative_ple(double p, double n, double c);

// f = (k1 + eta^2/(4 n k1))^{-(n+2)/2} at m = m_s(n), beta = 0, Type II. Requires n > 2.
ClosedFormProfile loewner_nirenberg_pme(double n, double k1);

// f = C (1 + k2 eta^{2n/(n-2)})^{-n/2}, C = 4n/(n+2) (4 n^3 k2/(n^2-4))^{(n-2)/4}
// at p = p_s(n), beta = 0, Type II. Requires n > 2.
ClosedFormProfile yamabe_ple(double n, double k2);

// f = coefficient * eta^exponent, attached to arbitrary parameters.
ClosedFormProfile power_law(const EquationParams &params, double coefficient, double exponent);

// Left-hand side of the radial profile ODEs, expanded:
//   PME: f^{m-1} f'' + (m-1) f^{m-2} f'^2 + (n-1)/eta f^{m-1} f' + alpha f + beta eta f'
//   PLE: (p-1)|f'|^{p-2} f'' + (n-1)/eta |f'|^{p-2} f' + alpha f + beta eta f'
// Errors: eta <= 0 (Domain); PME f <= 0 or outside support (OutsideSupport); PLE f' = 0
// (SingularEvaluation).
double pme_residual(const ProfileValue &value, double eta, const PMEParams &params);
double ple_residual(const ProfileValue &value, double eta, const PLEParams &params);
double pme_residual(const ClosedFormProfile &profile, const PMEParams &params, double eta);
double ple_residual(const ClosedFormProfile &profile, const PLEParams &params, double eta);
// Dispatches on the profile's own parameters.
double residual(const ClosedFormProfile &profile, double eta);

// u(x, t) from the similarity ansatz of the parameters' type; zero outside the support.
// Errors: Type I with t <= 0, Type II without T or with t >= T (Domain / InvalidParameter).
double selfsimilar_value(const EquationParams &params, const ClosedFormProfile &profile, double x_radius, double t,
                         std::optional<double> T = std::nullopt);

// `count` log-spaced points strictly inside the positivity set: [1e-3, 1 - 1e-3] times the support
// end for compactly supported profiles, [1e-2, 1e2] otherwise.
std::vector<double> interior_points(const ClosedFormProfile &profile, std::size_t count = 50);
double max_abs_residual(const ClosedFormProfile &profile, std::size_t count = 50);

// Adaptive Gauss-Kronrod quadrature on [a, b]; b may be +infinity.
double integrate_adaptive(const std::function<double(double)> &f, double a, double b, double tol = 1e-9);

// Total mass |S^{n-1}| * int_0^inf u(r, t) r^{n-1} dr.
double radial_mass(const ClosedFormProfile &profile, double t, std::optional<double> T = std::nullopt);

} // namespace ssflow

#endif
