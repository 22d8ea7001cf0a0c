#ifndef SSFLOW_INTEGRATOR_HPP
#define SSFLOW_INTEGRATOR_HPP

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <ssflow/params.hpp>

namespace ssflow
{

using Vec2 = std::array<double, 2>;

// Right-hand side of an autonomous planar system.
using System2 = std::function<Vec2(const Vec2 &)>;

enum class IntegrationStatus {
    Completed, // reached the end of the span
    Event,     // stopped on a threshold crossing
    MaxSteps,  // truncated: step budget exhausted
    Diverged,  // |state| exceeded the divergence bound
    Failed,    // non-finite rhs or step size underflow; trajectory is partial
};

const char *to_string(IntegrationStatus status) noexcept;

// A sampled orbit. For unified-plane trajectories r is r1 = sqrt|b| log(eta) and a state is
// (Psi, Phi); native trajectories carry r = log(eta) and the native pair.
struct Trajectory {
    std::vector<double> r;
    std::vector<Vec2> states;
    // d(state)/dr at each sample; empty when unavailable (linear interpolation is then used).
    std::vector<Vec2> slopes;
    IntegrationStatus status = IntegrationStatus::Completed;
    std::string message;
    std::optional<EquationParams> origin;
    std::optional<UnifiedCoefficients> coefficients;

    std::size_t size() const noexcept
    {
        return r.size();
    }
    bool empty() const noexcept
    {
        return r.empty();
    }
};

enum class Crossing { Rising, Falling, Either };

// Stop when states[component] crosses `bound` in the given direction.
struct StopEvent {
    std::size_t component = 0;
    double bound = 0;
    Crossing direction = Crossing::Either;
};

struct IntegrationSettings {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 0.05;
    std::size_t max_steps = 200000;
    std::vector<StopEvent> stop_events;
    double divergence_bound = 1e12;
};

// Adaptive Dormand-Prince 5(4) integration over [r_start, r_end] (either direction). Samples are
// the accepted steps; the final sample is the span end, the located event point, or the last
// finite state. Throws Error(InvalidParameter) for bad settings, a degenerate span or a
// non-finite rhs at y0.
Trajectory integrate(const System2 &rhs, const Vec2 &y0, double r_start, double r_end,
                     const IntegrationSettings &settings = {});

// State at r by cubic Hermite interpolation (linear when slopes are missing).
// Throws Error(Comparison) when r is outside the sampled range.
Vec2 interpolate(const Trajectory &traj, double r);

// Max Euclidean deviation over the union of both sample grids restricted to the overlap of the
// r ranges. Throws Error(Comparison) for disjoint ranges.
double compare_trajectories(const Trajectory &a, const Trajectory &b);

inline bool trajectories_agree(const Trajectory &a, const Trajectory &b, double tol)
{
    return compare_trajectories(a, b) <= tol;
}

} // namespace ssflow

#endif
