#include <algorithm>
#include <cmath>
#include <exception>
#include <iterator>

#include <boost/numeric/odeint.hpp>

#include <ssflow/errors.hpp>
#include <ssflow/integrator.hpp>

namespace ssflow
{

namespace odeint = boost::numeric::odeint;

const char *to_string(IntegrationStatus status) noexcept
{
    switch (status) {
        case IntegrationStatus::Completed:
            return "completed";
        case IntegrationStatus::Event:
            return "event";
        case IntegrationStatus::MaxSteps:
            return "max-steps";
        case IntegrationStatus::Diverged:
            return "diverged";
        case IntegrationStatus::Failed:
            return "failed";
    }
    return "unknown";
}

namespace
{

constexpr double event_resolution = 1e-12;

bool finite(const Vec2 &y)
{
    return std::isfinite(y[0]) && std::isfinite(y[1]);
}

double norm(const Vec2 &y)
{
    return std::hypot(y[0], y[1]);
}

bool crosses(double g_prev, double g_next, Crossing direction)
{
    if (g_prev == 0) {
        return false;
    }
    const bool rising = g_prev < 0 && g_next >= 0;
    const bool falling = g_prev > 0 && g_next <= 0;
    switch (direction) {
        case Crossing::Rising:
            return rising;
        case Crossing::Falling:
            return falling;
        case Crossing::Either:
            return rising || falling;
    }
    return false;
}

} // namespace

Trajectory integrate(const System2 &rhs, const Vec2 &y0, double r_start, double r_end,
                     const IntegrationSettings &settings)
{
    if (!(settings.rel_tol > 0) || !(settings.abs_tol > 0) || settings.max_steps == 0 || settings.max_step < 0) {
        throw Error(ErrorCode::InvalidParameter, "integration tolerances and step budget must be positive");
    }
    if (!std::isfinite(r_start) || !std::isfinite(r_end) || r_start == r_end) {
        throw Error(ErrorCode::InvalidParameter, "integration span is degenerate");
    }
    const Vec2 f0 = rhs(y0);
    if (!finite(y0) || !finite(f0)) {
        throw Error(ErrorCode::InvalidParameter, "rhs is not finite at the initial state");
    }

    // Integrate forward in s = dir (r - r_start) so the stepper only ever sees positive steps.
    const double dir = r_end > r_start ? 1.0 : -1.0;
    const double s_end = std::abs(r_end - r_start);
    auto to_r = [&](double s) { return r_start + dir * s; };

    auto system = [&](const Vec2 &y, Vec2 &dyds, double) {
        const Vec2 f = rhs(y);
        dyds = {dir * f[0], dir * f[1]};
    };

    using Stepper = odeint::runge_kutta_dopri5<Vec2>;
    auto dense = odeint::make_dense_output(settings.abs_tol, settings.rel_tol, settings.max_step, Stepper());
    double dt0 = std::min(1e-3, s_end);
    if (settings.max_step > 0) {
        dt0 = std::min(dt0, settings.max_step);
    }
    dense.initialize(y0, 0.0, dt0);

    Trajectory traj;
    auto push = [&](double s, const Vec2 &y) {
        traj.r.push_back(to_r(s));
        traj.states.push_back(y);
        traj.slopes.push_back(rhs(y));
    };
    push(0.0, y0);

    double s_prev = 0.0;
    Vec2 y_prev = y0;
    std::size_t steps = 0;
    traj.status = IntegrationStatus::MaxSteps;
    traj.message = "step budget exhausted";

    while (steps < settings.max_steps) {
        try {
            dense.do_step(system);
        } catch (const std::exception &e) {
            traj.status = IntegrationStatus::Failed;
            traj.message = e.what();
            break;
        }
        ++steps;

        const double s_next = dense.current_time();
        const bool reached_end = s_next >= s_end;
        const double s_hi = reached_end ? s_end : s_next;
        Vec2 y_hi = dense.current_state();
        if (reached_end) {
            dense.calc_state(s_hi, y_hi);
        }
        if (!finite(y_hi)) {
            traj.status = IntegrationStatus::Failed;
            traj.message = "non-finite state";
            break;
        }

        // Earliest event inside (s_prev, s_hi].
        std::optional<double> s_event;
        for (const auto &ev : settings.stop_events) {
            const double g_prev = y_prev[ev.component] - ev.bound;
            const double g_hi = y_hi[ev.component] - ev.bound;
            if (!crosses(g_prev, g_hi, ev.direction)) {
                continue;
            }
            double lo = s_prev;
            double hi = s_hi;
            Vec2 y_mid;
            while (hi - lo > event_resolution) {
                const double mid = 0.5 * (lo + hi);
                dense.calc_state(mid, y_mid);
                if (crosses(g_prev, y_mid[ev.component] - ev.bound, ev.direction)) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            if (!s_event || hi < *s_event) {
                s_event = hi;
            }
        }
        if (s_event) {
            Vec2 y_ev;
            dense.calc_state(*s_event, y_ev);
            push(*s_event, y_ev);
            traj.status = IntegrationStatus::Event;
            traj.message = "stop event";
            break;
        }

        push(s_hi, y_hi);
        if (norm(y_hi) > settings.divergence_bound) {
            traj.status = IntegrationStatus::Diverged;
            traj.message = "state exceeded divergence bound";
            break;
        }
        if (reached_end) {
            traj.status = IntegrationStatus::Completed;
            traj.message.clear();
            break;
        }
        s_prev = s_hi;
        y_prev = y_hi;
    }
    return traj;
}

namespace
{

// Index i with r in [r[i], r[i+1]] for a strictly monotone grid.
std::size_t locate(const std::vector<double> &r, double x)
{
    const bool increasing = r.back() > r.front();
    auto it = increasing ? std::upper_bound(r.begin(), r.end(), x)
                         : std::upper_bound(r.begin(), r.end(), x, std::greater<>());
    auto idx = static_cast<std::size_t>(std::distance(r.begin(), it));
    if (idx == 0) {
        return 0;
    }
    return std::min(idx - 1, r.size() - 2);
}

std::pair<double, double> range_of(const Trajectory &t)
{
    return std::minmax(t.r.front(), t.r.back());
}

} // namespace

Vec2 interpolate(const Trajectory &traj, double r)
{
    if (traj.empty()) {
        throw Error(ErrorCode::Comparison, "cannot interpolate an empty trajectory");
    }
    const auto [lo, hi] = range_of(traj);
    if (r < lo || r > hi) {
        throw Error(ErrorCode::Comparison, "interpolation point outside trajectory range", r);
    }
    if (traj.size() == 1) {
        return traj.states.front();
    }

    const std::size_t i = locate(traj.r, r);
    const double r0 = traj.r[i];
    const double h = traj.r[i + 1] - r0;
    const double t = (r - r0) / h;
    const Vec2 &y0 = traj.states[i];
    const Vec2 &y1 = traj.states[i + 1];

    Vec2 out;
    if (traj.slopes.size() == traj.size()) {
        const Vec2 &m0 = traj.slopes[i];
        const Vec2 &m1 = traj.slopes[i + 1];
        const double t2 = t * t;
        const double t3 = t2 * t;
        const double h00 = 2 * t3 - 3 * t2 + 1;
        const double h10 = t3 - 2 * t2 + t;
        const double h01 = -2 * t3 + 3 * t2;
        const double h11 = t3 - t2;
        for (std::size_t k = 0; k < 2; ++k) {
            out[k] = h00 * y0[k] + h10 * h * m0[k] + h01 * y1[k] + h11 * h * m1[k];
        }
    } else {
        for (std::size_t k = 0; k < 2; ++k) {
            out[k] = (1 - t) * y0[k] + t * y1[k];
        }
    }
    return out;
}

double compare_trajectories(const Trajectory &a, const Trajectory &b)
{
    if (a.empty() || b.empty()) {
        throw Error(ErrorCode::Comparison, "cannot compare empty trajectories");
    }
    const auto [a_lo, a_hi] = range_of(a);
    const auto [b_lo, b_hi] = range_of(b);
    const double lo = std::max(a_lo, b_lo);
    const double hi = std::min(a_hi, b_hi);
    if (lo > hi) {
        throw Error(ErrorCode::Comparison, "trajectory ranges are disjoint");
    }

    double worst = 0;
    auto visit = [&](const std::vector<double> &grid) {
        for (double r : grid) {
            if (r < lo || r > hi) {
                continue;
            }
            const Vec2 ya = interpolate(a, r);
            const Vec2 yb = interpolate(b, r);
            worst = std::max(worst, std::hypot(ya[0] - yb[0], ya[1] - yb[1]));
        }
    };
    visit(a.r);
    visit(b.r);
    return worst;
}

} // namespace ssflow
