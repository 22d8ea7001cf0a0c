#include <algorithm>
#include <cmath>

#include <ssflow/equivalence.hpp>
#include <ssflow/errors.hpp>
#include <ssflow/phase_plane.hpp>

namespace ssflow
{

namespace
{

// |x|^e with |0|^0 = 1 and |0|^{e<0} rejected.
double pow_abs(double x, double e)
{
    if (x == 0) {
        if (e == 0) {
            return 1;
        }
        if (e < 0) {
            throw Error(ErrorCode::SingularEvaluation, "|0| raised to a negative power", e);
        }
        return 0;
    }
    return std::pow(std::abs(x), e);
}

double sign(double x)
{
    return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0);
}

double gamma_of(double p)
{
    return p / (2 - p);
}

void check_eta(double eta)
{
    if (!(eta > 0)) {
        throw Error(ErrorCode::Domain, "similarity coordinate eta must be positive", eta);
    }
}

} // namespace

NativeStatePLE NativeStatePLE::from_xz(double x, double z, double p)
{
    return {x, z, sign(x) * pow_abs(x, (p - 1) / (p - 2)) * z};
}

NativeStatePLE NativeStatePLE::from_xy(double x, double y, double p)
{
    if (x == 0) {
        throw Error(ErrorCode::SingularEvaluation, "Z cannot be recovered on X = 0");
    }
    return {x, y / (sign(x) * pow_abs(x, (p - 1) / (p - 2))), y};
}

Vec2 pme_native_rhs(const NativeStatePME &state, const PMEParams &params)
{
    const double m = params.m();
    const double n = params.n();
    const double alpha = alpha_from(params);
    const double x = state.x;
    const double y = state.y;
    return {(2 - n) * x - m * x * x - (alpha + params.beta() * x) * y, (2 + (1 - m) * x) * y};
}

Vec2 ple_native_rhs_xz(double x, double z, const PLEParams &params)
{
    const double p = params.p();
    const double n = params.n();
    const double gamma = gamma_of(p);
    const double alpha = alpha_from(params);
    const double k = (2 - p) / (p - 1);

    const double dx = k * (-(n - gamma) * x + alpha * z * pow_abs(x, (3 - 2 * p) / (2 - p))
                           - params.beta() * std::abs(x) * x);
    const double dz = gamma * z - pow_abs(x, (p - 1) / (2 - p)) * x;
    return {dx, dz};
}

Vec2 ple_native_rhs_xy(double x, double y, const PLEParams &params)
{
    const double p = params.p();
    const double n = params.n();
    const double alpha = alpha_from(params);
    const double beta = params.beta();
    const double ax = std::abs(x);
    return {(2 - p) / (p - 1) * x * (gamma_of(p) - n + alpha * y - beta * ax),
            -alpha * y * y + n * y + beta * y * ax - ax};
}

Vec2 unified_rhs(const PhaseState &state, const UnifiedCoefficients &c) noexcept
{
    const double psi = state.psi;
    const double phi = state.phi;
    return {psi * phi, c.c1 * phi * phi - c.c2 * psi * phi - c.c3 * phi + c.psi_coeff * psi + c.const_term};
}

double trajectory_slope(const PhaseState &state, const UnifiedCoefficients &coeffs) noexcept
{
    const Vec2 d = unified_rhs(state, coeffs);
    return d[1] / d[0];
}

PhaseState pme_to_unified(const NativeStatePME &state, const PMEParams &params)
{
    const auto c = unified_coefficients(params);
    return {state.y / c.abs_b(), (2 + (1 - params.m()) * state.x) / c.sqrt_abs_b};
}

NativeStatePME unified_to_pme(const PhaseState &state, const PMEParams &params)
{
    const auto c = unified_coefficients(params);
    return {(state.phi * c.sqrt_abs_b - 2) / (1 - params.m()), c.abs_b() * state.psi};
}

PhaseState ple_to_unified(const NativeStatePLE &state, const PLEParams &params)
{
    if (!(state.x > 0)) {
        throw Error(ErrorCode::Orientation, "PLE phase-plane change requires X > 0", state.x);
    }
    const double p = params.p();
    const auto c = unified_coefficients(params);
    const double a = 1 / (c.abs_b() * (p - 1));
    const double kappa = -(p - 2) / ((p - 1) * c.sqrt_abs_b);
    return {a * state.x,
            kappa * (gamma_of(p) - params.n() + alpha_from(params) * state.y - params.beta() * state.x)};
}

NativeStatePLE unified_to_ple(const PhaseState &state, const PLEParams &params)
{
    const double p = params.p();
    const double alpha = alpha_from(params);
    if (alpha == 0) {
        throw Error(ErrorCode::Unrecoverable, "Y cannot be recovered from Phi when alpha = 0");
    }
    const auto c = unified_coefficients(params);
    const double a = 1 / (c.abs_b() * (p - 1));
    const double x = state.psi / a;
    if (!(x > 0)) {
        throw Error(ErrorCode::Orientation, "unified state maps to X <= 0", x);
    }
    const double y
        = (-state.phi * (p - 1) * c.sqrt_abs_b / (p - 2) - gamma_of(p) + params.n() + params.beta() * x) / alpha;
    return NativeStatePLE::from_xy(x, y, p);
}

PhaseState profile_to_state(const ProfileSample &s, const PMEParams &params)
{
    check_eta(s.eta);
    if (!(s.f > 0)) {
        throw Error(ErrorCode::OutsideSupport, "PME phase variables need f > 0", s.f);
    }
    const NativeStatePME native{s.eta * s.fprime / s.f, s.eta * s.eta * std::pow(s.f, 1 - params.m())};
    return pme_to_unified(native, params);
}

PhaseState profile_to_state(const ProfileSample &s, const PLEParams &params)
{
    check_eta(s.eta);
    if (s.fprime == 0) {
        throw Error(ErrorCode::SingularEvaluation, "PLE phase variables need f' != 0");
    }
    const double p = params.p();
    const double x = -s.eta * s.eta * std::pow(std::abs(s.fprime), 1 - p) * s.fprime;
    const double y = -s.eta * std::pow(std::abs(s.fprime), -p) * s.fprime * s.f;
    return ple_to_unified({x, 0.0, y}, params);
}

std::optional<ProfileSample> reconstruct_sample(const PhaseState &state, double eta, const PMEParams &params)
{
    check_eta(eta);
    const auto native = unified_to_pme(state, params);
    const double radicand = native.y / (eta * eta);
    if (!(radicand > 0) || !std::isfinite(radicand)) {
        return std::nullopt;
    }
    const double f = std::pow(radicand, 1 / (1 - params.m()));
    return ProfileSample{eta, f, native.x * f / eta};
}

std::optional<ProfileSample> reconstruct_sample(const PhaseState &state, double eta, const PLEParams &params)
{
    check_eta(eta);
    const double p = params.p();
    const double alpha = alpha_from(params);
    if (alpha == 0) {
        throw Error(ErrorCode::Unrecoverable, "PLE profile cannot be recovered when alpha = 0");
    }
    const auto c = unified_coefficients(params);
    const double x = state.psi * c.abs_b() * (p - 1);
    if (!(x > 0) || !std::isfinite(x)) {
        return std::nullopt;
    }
    const double y
        = (-state.phi * (p - 1) * c.sqrt_abs_b / (p - 2) - gamma_of(p) + params.n() + params.beta() * x) / alpha;
    const double fprime = -std::pow(x / (eta * eta), 1 / (2 - p));
    // Y = eta |f'|^{1-p} f
    const double f = y * std::pow(-fprime, p - 1) / eta;
    return ProfileSample{eta, f, fprime};
}

namespace
{

template <typename Params>
ReconstructedProfile reconstruct_impl(const Trajectory &traj, const Params &params, const ProfileSample &anchor)
{
    ReconstructedProfile out;
    if (traj.empty()) {
        return out;
    }

    const PhaseState first = PhaseState::from(traj.states.front());
    const PhaseState expected = profile_to_state(anchor, params);
    constexpr double anchor_tol = 1e-8;
    if (scaled_deviation(first.psi, expected.psi) > anchor_tol
        || scaled_deviation(first.phi, expected.phi) > anchor_tol) {
        throw Error(ErrorCode::InvalidParameter, "anchor sample does not map to the first trajectory state");
    }

    const double s = unified_coefficients(params).sqrt_abs_b;
    const double r0 = traj.r.front();
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double eta = anchor.eta * std::exp((traj.r[i] - r0) / s);
        auto sample = reconstruct_sample(PhaseState::from(traj.states[i]), eta, params);
        if (!sample || !std::isfinite(sample->f) || !std::isfinite(sample->fprime)) {
            out.truncated = true;
            out.diagnostic = "state " + std::to_string(i) + " is not realisable by a profile; stopped";
            break;
        }
        out.samples.push_back(*sample);
    }
    if (out.samples.size() > 1 && out.samples.front().eta > out.samples.back().eta) {
        std::reverse(out.samples.begin(), out.samples.end());
    }
    return out;
}

} // namespace

ReconstructedProfile reconstruct_profile(const Trajectory &traj, const PMEParams &params, const ProfileSample &anchor)
{
    return reconstruct_impl(traj, params, anchor);
}

ReconstructedProfile reconstruct_profile(const Trajectory &traj, const PLEParams &params, const ProfileSample &anchor)
{
    return reconstruct_impl(traj, params, anchor);
}

Trajectory integrate_unified(const UnifiedCoefficients &coeffs, const PhaseState &start, double r1_start,
                             double r1_end, const IntegrationSettings &settings)
{
    auto traj = integrate([coeffs](const Vec2 &v) { return unified_rhs(PhaseState::from(v), coeffs); }, start.vec(),
                          r1_start, r1_end, settings);
    traj.coefficients = coeffs;
    return traj;
}

Trajectory integrate_pme_native(const PMEParams &params, const NativeStatePME &start, double r_start, double r_end,
                                const IntegrationSettings &settings)
{
    auto traj = integrate([params](const Vec2 &v) { return pme_native_rhs({v[0], v[1]}, params); },
                          {start.x, start.y}, r_start, r_end, settings);
    traj.origin = params;
    return traj;
}

Trajectory integrate_ple_native_xy(const PLEParams &params, double x0, double y0, double r_start, double r_end,
                                   const IntegrationSettings &settings)
{
    auto traj = integrate([params](const Vec2 &v) { return ple_native_rhs_xy(v[0], v[1], params); }, {x0, y0},
                          r_start, r_end, settings);
    traj.origin = params;
    return traj;
}

Trajectory integrate_ple_native_xz(const PLEParams &params, double x0, double z0, double r_start, double r_end,
                                   const IntegrationSettings &settings)
{
    auto traj = integrate([params](const Vec2 &v) { return ple_native_rhs_xz(v[0], v[1], params); }, {x0, z0},
                          r_start, r_end, settings);
    traj.origin = params;
    return traj;
}

Trajectory map_to_unified(const Trajectory &native, const PMEParams &params)
{
    const auto c = unified_coefficients(params);
    const double s = c.sqrt_abs_b;
    const double m = params.m();

    Trajectory out;
    out.status = native.status;
    out.message = native.message;
    out.origin = params;
    out.coefficients = c;
    const bool with_slopes = native.slopes.size() == native.size();
    for (std::size_t i = 0; i < native.size(); ++i) {
        const Vec2 &v = native.states[i];
        out.r.push_back(s * native.r[i]);
        out.states.push_back(pme_to_unified({v[0], v[1]}, params).vec());
        if (with_slopes) {
            const Vec2 &d = native.slopes[i];
            out.slopes.push_back({d[1] / (s * s * s), (1 - m) * d[0] / (s * s)});
        }
    }
    return out;
}

Trajectory map_to_unified(const Trajectory &native, const PLEParams &params)
{
    const auto c = unified_coefficients(params);
    const double s = c.sqrt_abs_b;
    const double p = params.p();
    const double a = 1 / (c.abs_b() * (p - 1));
    const double kappa = -(p - 2) / ((p - 1) * s);
    const double alpha = alpha_from(params);

    Trajectory out;
    out.status = native.status;
    out.message = native.message;
    out.origin = params;
    out.coefficients = c;
    const bool with_slopes = native.slopes.size() == native.size();
    for (std::size_t i = 0; i < native.size(); ++i) {
        const Vec2 &v = native.states[i];
        out.r.push_back(s * native.r[i]);
        out.states.push_back(ple_to_unified({v[0], 0.0, v[1]}, params).vec());
        if (with_slopes) {
            const Vec2 &d = native.slopes[i];
            out.slopes.push_back({a * d[0] / s, kappa * (alpha * d[1] - params.beta() * d[0]) / s});
        }
    }
    return out;
}

Trajectory xz_to_xy(const Trajectory &native, const PLEParams &params)
{
    const double p = params.p();
    const double e = (p - 1) / (p - 2);

    Trajectory out = native;
    for (std::size_t i = 0; i < native.size(); ++i) {
        const double x = native.states[i][0];
        const double z = native.states[i][1];
        if (!(x > 0)) {
            throw Error(ErrorCode::Orientation, "(X, Z) trajectory leaves X > 0", x);
        }
        const double xe = std::pow(x, e);
        out.states[i] = {x, xe * z};
        if (native.slopes.size() == native.size()) {
            const Vec2 &d = native.slopes[i];
            out.slopes[i] = {d[0], e * xe / x * z * d[0] + xe * d[1]};
        }
    }
    return out;
}

double straight_line_condition(const UnifiedCoefficients &c) noexcept
{
    return c.c1 * c.c2 * c.c2 - (c.c1 - 1) * c.c3 * c.c2 + (c.c1 - 1) * (c.c1 - 1);
}

std::optional<std::pair<double, double>> straight_line(const UnifiedCoefficients &c, double tol)
{
    if (c.critical || c.const_term != 1 || c.psi_coeff != 1) {
        throw Error(ErrorCode::InvalidParameter, "straight-line orbits are defined for Type I with sgn(b) = +1");
    }
    if (c.c1 == 1) {
        throw Error(ErrorCode::Degenerate, "c1 = 1 has no straight-line slope");
    }
    if (std::abs(straight_line_condition(c)) > tol) {
        return std::nullopt;
    }
    const double slope = c.c2 / (c.c1 - 1);
    return std::pair{slope, slope};
}

LineBetas line_betas_pme(double m, double n) noexcept
{
    LineBetas out;
    if (const double d = n * (m - 1) + 2; d != 0) {
        out.beta1 = 1 / d;
    }
    if (m != 0) {
        out.beta2 = 1 / (2 * m);
    }
    return out;
}

LineBetas line_betas_ple(double p, double n) noexcept
{
    LineBetas out;
    if (const double d = n * (p - 2) + p; d != 0) {
        out.beta1 = 1 / d;
    }
    if (p != 0) {
        out.beta2 = 1 / p;
    }
    return out;
}

double yamabe_curve(double n, double phi)
{
    if (!(n > 2)) {
        throw Error(ErrorCode::Domain, "the Yamabe orbit needs n > 2", n);
    }
    return n / (n - 2) - n * phi * phi / 4;
}

} // namespace ssflow
