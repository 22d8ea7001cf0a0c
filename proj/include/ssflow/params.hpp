#ifndef SSFLOW_PARAMS_HPP
#define SSFLOW_PARAMS_HPP

#include <variant>

namespace ssflow
{

// Type I:   u = t^{-alpha} f(x t^{-beta})
// Type II:  u = (T-t)^{alpha} f(x (T-t)^{beta})
// Type III: u = e^{alpha t} f(x e^{beta t})
enum class SimilarityType { TypeI, TypeII, TypeIII };

// Coefficient of Psi in the second equation of the unified system: +1, -1 or 0.
int psi_coefficient(SimilarityType type) noexcept;

inline constexpr double default_critical_tol = 1e-9;

// Porous medium equation u_t = Lap(u^m / m) in (real) dimension n.
class PMEParams
{
public:
    // Throws Error(InvalidParameter) when |m-1| < 1e-12, n <= 0 or any input is not finite.
    PMEParams(double m, double n, double beta, SimilarityType type = SimilarityType::TypeI);

    double m() const noexcept
    {
        return m_m;
    }
    double n() const noexcept
    {
        return m_n;
    }
    double beta() const noexcept
    {
        return m_beta;
    }
    SimilarityType type() const noexcept
    {
        return m_type;
    }

    bool operator==(const PMEParams &) const = default;

private:
    double m_m;
    double m_n;
    double m_beta;
    SimilarityType m_type;
};

// p-Laplacian equation u_t = div(|grad u|^{p-2} grad u) in (real) dimension n.
class PLEParams
{
public:
    // Throws Error(InvalidParameter) when |p-2| < 1e-12, n <= 0 or any input is not finite.
    PLEParams(double p, double n, double beta, SimilarityType type = SimilarityType::TypeI);

    double p() const noexcept
    {
        return m_p;
    }
    double n() const noexcept
    {
        return m_n;
    }
    double beta() const noexcept
    {
        return m_beta;
    }
    SimilarityType type() const noexcept
    {
        return m_type;
    }

    bool operator==(const PLEParams &) const = default;

private:
    double m_p;
    double m_n;
    double m_beta;
    SimilarityType m_type;
};

using EquationParams = std::variant<PMEParams, PLEParams>;

// Time exponent alpha, fixed by beta through the scaling relation of the similarity type.
double alpha_from(const PMEParams &params) noexcept;
double alpha_from(const PLEParams &params) noexcept;
double alpha_from(const EquationParams &params) noexcept;

struct CriticalExponents {
    double m_c; // (n-2)/n, where b vanishes for the PME
    double m_s; // (n-2)/(n+2), Sobolev/Yamabe exponent
    double p_c; // 2n/(n+1)
    double p_s; // 2n/(n+2)
};

// Throws Error(Domain) for n <= 0.
CriticalExponents critical_exponents(double n);

// The parameter b of the phase-plane reduction. Zero at the critical exponent.
double reduction_b(const PMEParams &params) noexcept;
double reduction_b(const PLEParams &params);

// Constants of the unified quadratic system
//   Psi' = Psi Phi
//   Phi' = c1 Phi^2 - c2 Psi Phi - c3 Phi + psi_coeff Psi + const_term
// with ' = d/dr1, r1 = sqrt_abs_b * log(eta).
//
// In the critical case b = 0 the scale sqrt_abs_b is replaced by (n-2) for the PME and n for the
// PLE; c3 is then exactly -1 and const_term is 0. For the PME with n < 2 this substituted scale is
// negative, which reverses the orientation of r1.
struct UnifiedCoefficients {
    double c1 = 0;
    double c2 = 0;
    double c3 = 0;
    double sqrt_abs_b = 0;
    int const_term = 0;
    int psi_coeff = 0;
    bool critical = false;

    // |b|, or the square of the substituted scale in the critical case.
    double abs_b() const noexcept
    {
        return sqrt_abs_b * sqrt_abs_b;
    }
};

UnifiedCoefficients unified_coefficients(const PMEParams &params, double critical_tol = default_critical_tol);
UnifiedCoefficients unified_coefficients(const PLEParams &params, double critical_tol = default_critical_tol);
UnifiedCoefficients unified_coefficients(const EquationParams &params,
                                         double critical_tol = default_critical_tol);

enum class Regime { Generic, CriticalBZero, Yamabe, NearLinear, DimensionTwo };

const char *to_string(Regime regime) noexcept;

// Precedence: NearLinear, DimensionTwo, CriticalBZero, Yamabe, Generic.
Regime classify_regime(const PMEParams &params, double tol = default_critical_tol) noexcept;
Regime classify_regime(const PLEParams &params, double tol = default_critical_tol) noexcept;

// True when |x - target| <= tol * max(1, |target|).
bool near(double x, double target, double tol) noexcept;

} // namespace ssflow

#endif
