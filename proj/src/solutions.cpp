#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <ssflow/errors.hpp>
#include <ssflow/solutions.hpp>

namespace ssflow
{

const char *to_string(ProfileKind kind) noexcept
{
    switch (kind) {
        case ProfileKind::BarenblattPME:
            return "barenblatt-pme";
        case ProfileKind::BarenblattPLE:
            return "barenblatt-ple";
        case ProfileKind::DipolePME:
            return "dipole-pme";
        case ProfileKind::DipoleDerivativePLE:
            return "dipole-derivative-ple";
        case ProfileKind::LoewnerNirenbergPME:
            return "loewner-nirenberg-pme";
        case ProfileKind::YamabePLE:
            return "yamabe-ple";
        case ProfileKind::PowerLaw:
            return "power-law";
    }
    return "unknown";
}

namespace
{

// eta^k with the eta = 0 limits spelled out.
double power(double eta, double k)
{
    if (eta == 0) {
        return k > 0 ? 0.0 : (k == 0 ? 1.0 : std::numeric_limits<double>::infinity());
    }
    return std::pow(eta, k);
}

void require_positive(double value, const char *what)
{
    if (!(value > 0) || !std::isfinite(value)) {
        throw Error(ErrorCode::InvalidParameter, std::string(what) + " must be positive", value);
    }
}

void require_above_two(double n)
{
    if (!(n > 2)) {
        throw Error(ErrorCode::Domain, "profile needs n > 2", n);
    }
}

} // namespace

std::optional<ProfileValue> PowerForm::evaluate(double eta) const
{
    if (!(eta >= 0)) {
        return std::nullopt;
    }
    const double ec = power(eta, c);
    const double u = K + B * ec;
    if (!(u > 0)) {
        return std::nullopt;
    }

    const double g = A * power(eta, a) * std::pow(u, e);
    // Log-derivative L = g'/g and its derivative.
    const double du = B * c * power(eta, c - 1);
    const double d2u = B * c * (c - 1) * power(eta, c - 2);
    const double la = a == 0 ? 0.0 : a / eta;
    const double la_prime = a == 0 ? 0.0 : -a / (eta * eta);
    const double L = la + e * du / u;
    const double L_prime = la_prime + e * (d2u / u - du * du / (u * u));
    return ProfileValue{g, g * L, g * (L * L + L_prime)};
}

std::optional<double> PowerForm::support_end() const
{
    if (B == 0 || c == 0) {
        return std::nullopt;
    }
    const double ratio = -K / B;
    if (!(ratio > 0)) {
        return std::nullopt;
    }
    return std::pow(ratio, 1 / c);
}

ClosedFormProfile::ClosedFormProfile(ProfileKind kind, EquationParams params, std::map<std::string, double> constants,
                                     PowerForm form)
    : m_kind(kind), m_params(std::move(params)), m_constants(std::move(constants)), m_form(form)
{
}

std::optional<ProfileValue> ClosedFormProfile::evaluate(double eta) const
{
    const auto g = m_form.evaluate(eta);
    if (!g || !derivative_only()) {
        return g;
    }

    // The form is f'; shift by one derivative and integrate for f.
    const auto end = m_form.support_end();
    const double base = end ? *end : 1.0;
    auto fprime = [this](double x) {
        const auto v = m_form.evaluate(x);
        return v ? v->f : 0.0;
    };
    const double f = eta <= base ? -integrate_adaptive(fprime, eta, base) : integrate_adaptive(fprime, base, eta);
    return ProfileValue{f, g->f, g->fprime};
}

namespace
{

ProfileValue checked(const ClosedFormProfile &profile, double eta)
{
    const auto v = profile.evaluate(eta);
    if (!v) {
        throw Error(ErrorCode::OutsideSupport, "profile evaluated outside its positivity set", eta);
    }
    return *v;
}

} // namespace

double ClosedFormProfile::f(double eta) const
{
    return checked(*this, eta).f;
}

double ClosedFormProfile::fprime(double eta) const
{
    return checked(*this, eta).fprime;
}

double ClosedFormProfile::fsecond(double eta) const
{
    return checked(*this, eta).fsecond;
}

ClosedFormProfile barenblatt_pme(double m, double n, double C)
{
    require_positive(C, "Barenblatt constant C");
    const double denom = n * (m - 1) + 2;
    if (denom == 0) {
        throw Error(ErrorCode::Degenerate, "n(m-1) + 2 = 0 leaves beta undefined");
    }
    const double beta = 1 / denom;
    PMEParams params(m, n, beta, SimilarityType::TypeI);
    const double k = (m - 1) * beta / 2;
    return {ProfileKind::BarenblattPME, params, {{"C", C}}, PowerForm{1, 0, C, -k, 2, 1 / (m - 1)}};
}

ClosedFormProfile barenblatt_ple(double p, double n, double C)
{
    require_positive(C, "Barenblatt constant C");
    const double denom = n * (p - 2) + p;
    if (denom == 0) {
        throw Error(ErrorCode::Degenerate, "n(p-2) + p = 0 leaves beta undefined");
    }
    const double beta = 1 / denom;
    if (!(beta > 0)) {
        throw Error(ErrorCode::Domain, "PLE Barenblatt profile needs beta > 0", beta);
    }
    PLEParams params(p, n, beta, SimilarityType::TypeI);
    const double k = (p - 2) / p * std::pow(beta, 1 / (p - 1));
    return {ProfileKind::BarenblattPLE, params, {{"C", C}},
            PowerForm{1, 0, C, -k, p / (p - 1), (p - 1) / (p - 2)}};
}

ClosedFormProfile dipole_pme(double m, double n, double K)
{
    require_positive(K, "dipole constant K");
    if (m == 0) {
        throw Error(ErrorCode::Degenerate, "dipole profile needs m != 0");
    }
    PMEParams params(m, n, 1 / (2 * m), SimilarityType::TypeI);
    if (unified_coefficients(params).critical) {
        throw Error(ErrorCode::Critical, "dipole profile needs b != 0", m);
    }
    const double b = reduction_b(params);
    return {ProfileKind::DipolePME, params, {{"K", K}},
            PowerForm{1, -(n - 2) / m, K, -1 / b, (m * n - n + 2) / m, 1 / (m - 1)}};
}

ClosedFormProfile dipole_derivative_ple(double p, double n, double c)
{
    require_positive(c, "constant c");
    PLEParams params(p, n, 1 / p, SimilarityType::TypeI);
    if (unified_coefficients(params).critical) {
        throw Error(ErrorCode::Critical, "derivative profile needs b != 0", p);
    }
    const double b = reduction_b(params);
    return {ProfileKind::DipoleDerivativePLE, params, {{"c", c}},
            PowerForm{1, -(n - 1) / (p - 1), c, -1 / ((p - 1) * b), (p - 2) * b / p, 1 / (p - 2)}};
}

ClosedFormProfile loewner_nirenberg_pme(double n, double k1)
{
    require_above_two(n);
    require_positive(k1, "k1");
    PMEParams params(critical_exponents(n).m_s, n, 0, SimilarityType::TypeII);
    return {ProfileKind::LoewnerNirenbergPME, params, {{"k1", k1}},
            PowerForm{1, 0, k1, 1 / (4 * n * k1), 2, -(n + 2) / 2}};
}

ClosedFormProfile yamabe_ple(double n, double k2)
{
    require_above_two(n);
    require_positive(k2, "k2");
    PLEParams params(critical_exponents(n).p_s, n, 0, SimilarityType::TypeII);
    const double C = 4 * n / (n + 2) * std::pow(4 * n * n * n * k2 / (n * n - 4), (n - 2) / 4);
    return {ProfileKind::YamabePLE, params, {{"k2", k2}, {"C", C}},
            PowerForm{C, 0, 1, k2, 2 * n / (n - 2), -n / 2}};
}

ClosedFormProfile power_law(const EquationParams &params, double coefficient, double exponent)
{
    return {ProfileKind::PowerLaw, params, {{"coefficient", coefficient}, {"exponent", exponent}},
            PowerForm{coefficient, exponent, 1, 0, 1, 0}};
}

double pme_residual(const ProfileValue &v, double eta, const PMEParams &params)
{
    if (!(eta > 0)) {
        throw Error(ErrorCode::Domain, "residual needs eta > 0", eta);
    }
    if (!(v.f > 0)) {
        throw Error(ErrorCode::OutsideSupport, "PME residual needs f > 0", v.f);
    }
    const double m = params.m();
    const double n = params.n();
    const double fm1 = std::pow(v.f, m - 1);
    return fm1 * v.fsecond + (m - 1) * fm1 / v.f * v.fprime * v.fprime + (n - 1) / eta * fm1 * v.fprime
           + alpha_from(params) * v.f + params.beta() * eta * v.fprime;
}

double ple_residual(const ProfileValue &v, double eta, const PLEParams &params)
{
    if (!(eta > 0)) {
        throw Error(ErrorCode::Domain, "residual needs eta > 0", eta);
    }
    if (v.fprime == 0) {
        throw Error(ErrorCode::SingularEvaluation, "PLE residual is singular where f' = 0", eta);
    }
    const double p = params.p();
    const double n = params.n();
    const double w = std::pow(std::abs(v.fprime), p - 2);
    return (p - 1) * w * v.fsecond + (n - 1) / eta * w * v.fprime + alpha_from(params) * v.f
           + params.beta() * eta * v.fprime;
}

double pme_residual(const ClosedFormProfile &profile, const PMEParams &params, double eta)
{
    if (!(eta > 0)) {
        throw Error(ErrorCode::Domain, "residual needs eta > 0", eta);
    }
    return pme_residual(checked(profile, eta), eta, params);
}

double ple_residual(const ClosedFormProfile &profile, const PLEParams &params, double eta)
{
    if (!(eta > 0)) {
        throw Error(ErrorCode::Domain, "residual needs eta > 0", eta);
    }
    return ple_residual(checked(profile, eta), eta, params);
}

double residual(const ClosedFormProfile &profile, double eta)
{
    return std::visit(
        [&](const auto &params) -> double {
            using P = std::decay_t<decltype(params)>;
            if constexpr (std::is_same_v<P, PMEParams>) {
                return pme_residual(profile, params, eta);
            } else {
                return ple_residual(profile, params, eta);
            }
        },
        profile.params());
}

double selfsimilar_value(const EquationParams &params, const ClosedFormProfile &profile, double x_radius, double t,
                         std::optional<double> T)
{
    const double alpha = alpha_from(params);
    const double beta = std::visit([](const auto &p) { return p.beta(); }, params);
    const auto type = std::visit([](const auto &p) { return p.type(); }, params);

    double amplitude = 0;
    double eta = 0;
    switch (type) {
        case SimilarityType::TypeI:
            if (!(t > 0)) {
                throw Error(ErrorCode::Domain, "Type I similarity needs t > 0", t);
            }
            amplitude = std::pow(t, -alpha);
            eta = std::abs(x_radius) * std::pow(t, -beta);
            break;
        case SimilarityType::TypeII:
            if (!T) {
                throw Error(ErrorCode::InvalidParameter, "Type II similarity needs the extinction time T");
            }
            if (!(t < *T)) {
                throw Error(ErrorCode::Domain, "Type II similarity needs t < T", t);
            }
            amplitude = std::pow(*T - t, alpha);
            eta = std::abs(x_radius) * std::pow(*T - t, beta);
            break;
        case SimilarityType::TypeIII:
            amplitude = std::exp(alpha * t);
            eta = std::abs(x_radius) * std::exp(beta * t);
            break;
    }
    const auto v = profile.evaluate(eta);
    return v ? amplitude * v->f : 0.0;
}

std::vector<double> interior_points(const ClosedFormProfile &profile, std::size_t count)
{
    double lo = 1e-2;
    double hi = 1e2;
    if (const auto end = profile.support_end()) {
        lo = 1e-3 * *end;
        hi = (1 - 1e-3) * *end;
    }
    std::vector<double> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double t = count == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(count - 1);
        out.push_back(lo * std::pow(hi / lo, t));
    }
    return out;
}

double max_abs_residual(const ClosedFormProfile &profile, std::size_t count)
{
    double worst = 0;
    for (double eta : interior_points(profile, count)) {
        worst = std::max(worst, std::abs(residual(profile, eta)));
    }
    return worst;
}

double integrate_adaptive(const std::function<double(double)> &f, double a, double b, double tol)
{
    // Depth 12 is ample for the smooth integrands here; deeper recursion only chases roundoff
    // when the integrand is computed with cancellation (e.g. next to a free boundary).
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 12, tol);
}

double radial_mass(const ClosedFormProfile &profile, double t, std::optional<double> T)
{
    const auto &params = profile.params();
    const double n = std::visit([](const auto &p) { return p.n(); }, params);
    const double sphere = 2 * std::pow(std::numbers::pi, n / 2) / std::tgamma(n / 2);

    // Outer radius of the support at time t, if the profile is compactly supported.
    double r_max = std::numeric_limits<double>::infinity();
    if (const auto end = profile.support_end()) {
        const double beta = std::visit([](const auto &p) { return p.beta(); }, params);
        const auto type = std::visit([](const auto &p) { return p.type(); }, params);
        switch (type) {
            case SimilarityType::TypeI:
                r_max = *end * std::pow(t, beta);
                break;
            case SimilarityType::TypeII:
                r_max = *end * std::pow(T.value_or(t) - t, -beta);
                break;
            case SimilarityType::TypeIII:
                r_max = *end * std::exp(-beta * t);
                break;
        }
    }
    auto integrand = [&](double r) { return selfsimilar_value(params, profile, r, t, T) * std::pow(r, n - 1); };
    return sphere * integrate_adaptive(integrand, 0, r_max);
}

} // namespace ssflow
