#ifndef SSFLOW_PHASE_PLANE_HPP
#define SSFLOW_PHASE_PLANE_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <ssflow/integrator.hpp>
#include <ssflow/params.hpp>

namespace ssflow
{

// A point of the unified plane.
struct PhaseState {
    double psi = 0;
    double phi = 0;

    Vec2 vec() const noexcept
    {
        return {psi, phi};
    }
    static PhaseState from(const Vec2 &v) noexcept
    {
        return {v[0], v[1]};
    }
};

// PME variables X = eta f'/f, Y = eta^2 f^{1-m}.
struct NativeStatePME {
    double x = 0;
    double y = 0;
};

// PLE variables X = -eta^2 |f'|^{1-p} f', Z = eta^gamma f with gamma = p/(2-p), and the
// derived Y = |X|^{1/(p-2)} X Z = -eta |f'|^{-p} f' f.
struct NativeStatePLE {
    double x = 0;
    double z = 0;
    double y = 0;

    static NativeStatePLE from_xz(double x, double z, double p);
    // Z is recovered only for x != 0 (Error(SingularEvaluation) otherwise).
    static NativeStatePLE from_xy(double x, double y, double p);
};

// A profile value at a similarity coordinate eta > 0.
struct ProfileSample {
    double eta = 0;
    double f = 0;
    double fprime = 0;
};

// d/dr with r = log(eta):
//   X' = (2-n)X - mX^2 - (alpha + beta X)Y,  Y' = (2 + (1-m)X)Y
Vec2 pme_native_rhs(const NativeStatePME &state, const PMEParams &params);

// The non-quadratic PLE system in (X, Z). |0|^0 is taken as 1; |0| raised to a negative power
// throws Error(SingularEvaluation).
Vec2 ple_native_rhs_xz(double x, double z, const PLEParams &params);

// The PLE system in (X, Y); quadratic where X has a sign.
//   X' = (2-p)/(p-1) X (gamma - n + alpha Y - beta|X|),  Y' = -alpha Y^2 + nY + beta Y|X| - |X|
Vec2 ple_native_rhs_xy(double x, double y, const PLEParams &params);

// (Psi', Phi') of the unified system.
Vec2 unified_rhs(const PhaseState &state, const UnifiedCoefficients &coeffs) noexcept;

// dPhi/dPsi along orbits of the unified system.
double trajectory_slope(const PhaseState &state, const UnifiedCoefficients &coeffs) noexcept;

// Phi = (2 + (1-m)X)/s, Psi = Y/s^2 where s = sqrt|b| (or the critical substitute).
PhaseState pme_to_unified(const NativeStatePME &state, const PMEParams &params);
NativeStatePME unified_to_pme(const PhaseState &state, const PMEParams &params);

// Psi = aX with a = 1/(s^2 (p-1)), Phi = -(p-2)/((p-1)s) (gamma - n + alpha Y - beta X).
// Requires X > 0 (Error(Orientation)). The inverse needs alpha != 0 (Error(Unrecoverable)).
PhaseState ple_to_unified(const NativeStatePLE &state, const PLEParams &params);
NativeStatePLE unified_to_ple(const PhaseState &state, const PLEParams &params);

// Errors: eta <= 0 (Domain); PME f <= 0 (OutsideSupport); PLE f' == 0 (SingularEvaluation).
PhaseState profile_to_state(const ProfileSample &sample, const PMEParams &params);
PhaseState profile_to_state(const ProfileSample &sample, const PLEParams &params);

// Inverse of profile_to_state at a known eta. Returns nullopt where the state does not come
// from a positive PME profile (Y <= 0) or from a decreasing PLE profile (X <= 0).
std::optional<ProfileSample> reconstruct_sample(const PhaseState &state, double eta, const PMEParams &params);
std::optional<ProfileSample> reconstruct_sample(const PhaseState &state, double eta, const PLEParams &params);

struct ReconstructedProfile {
    std::vector<ProfileSample> samples; // increasing eta
    bool truncated = false;
    std::string diagnostic;
};

// eta_i = anchor.eta * exp((r1_i - r1_0)/s). The anchor must map to the first trajectory state
// within 1e-8 (Error(InvalidParameter) otherwise). Reconstruction stops at the first state that is
// not realisable and reports it as a truncation.
ReconstructedProfile reconstruct_profile(const Trajectory &traj, const PMEParams &params,
                                         const ProfileSample &anchor);
ReconstructedProfile reconstruct_profile(const Trajectory &traj, const PLEParams &params,
                                         const ProfileSample &anchor);

// Trajectory integration in each plane. Unified trajectories carry r1; native ones r = log(eta).
Trajectory integrate_unified(const UnifiedCoefficients &coeffs, const PhaseState &start, double r1_start,
                             double r1_end, const IntegrationSettings &settings = {});
Trajectory integrate_pme_native(const PMEParams &params, const NativeStatePME &start, double r_start,
                                double r_end, const IntegrationSettings &settings = {});
Trajectory integrate_ple_native_xy(const PLEParams &params, double x0, double y0, double r_start, double r_end,
                                   const IntegrationSettings &settings = {});
Trajectory integrate_ple_native_xz(const PLEParams &params, double x0, double z0, double r_start, double r_end,
                                   const IntegrationSettings &settings = {});

// Push native trajectories into the unified plane: r1 = s r, states through the variable change,
// slopes by the chain rule (both changes are affine in the native variables).
Trajectory map_to_unified(const Trajectory &native, const PMEParams &params);
// `native` must be in (X, Y) form.
Trajectory map_to_unified(const Trajectory &native, const PLEParams &params);
// (X, Z) trajectory rewritten in (X, Y) form; requires X > 0 throughout.
Trajectory xz_to_xy(const Trajectory &native, const PLEParams &params);

// Straight-line orbits Phi = a1 Psi + a2 exist iff
//   c1 c2^2 - (c1-1) c3 c2 + (c1-1)^2 = 0
// and then a1 = a2 = c2/(c1-1).
double straight_line_condition(const UnifiedCoefficients &coeffs) noexcept;

// Requires a non-critical Type I system with sgn(b) = +1 (Error(InvalidParameter) otherwise).
std::optional<std::pair<double, double>> straight_line(const UnifiedCoefficients &coeffs, double tol = 1e-9);

// The two exponents beta giving straight-line orbits. A root with a vanishing denominator is
// absent.
struct LineBetas {
    std::optional<double> beta1; // Barenblatt
    std::optional<double> beta2; // dipole (PME) / alpha = 0 family (PLE)
};
LineBetas line_betas_pme(double m, double n) noexcept;
LineBetas line_betas_ple(double p, double n) noexcept;

// The explicit orbit Psi = n/(n-2) - n Phi^2/4 of the Type II, beta = 0 system at m = m_s
// (equivalently p = p_s). Error(Domain) for n <= 2.
double yamabe_curve(double n, double phi);

} // namespace ssflow

#endif
