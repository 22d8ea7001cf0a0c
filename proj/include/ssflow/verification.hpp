#ifndef SSFLOW_VERIFICATION_HPP
#define SSFLOW_VERIFICATION_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <ssflow/integrator.hpp>
#include <ssflow/params.hpp>
#include <ssflow/phase_plane.hpp>

namespace ssflow
{

struct Check {
    std::string name;
    double tol = 0;
    bool pass = true;
    double max_dev = 0;
    std::size_t evaluated = 0;

    void record(double deviation)
    {
        ++evaluated;
        if (!(deviation <= tol)) {
            pass = false;
        }
        if (!(deviation <= max_dev)) {
            max_dev = deviation;
        }
    }
};

struct VerificationGrid {
    std::vector<double> m_values;
    std::vector<double> n_values;
};

// m in {-1/3, 1/5, 1/4, 1/2, 2, 3}, n in {1, 3, 4, 5}; beta in {0, beta1, beta2, 1} per cell.
VerificationGrid default_grid();

struct VerificationSummary {
    std::vector<Check> checks;
    std::vector<std::string> skipped;
    // Mapped cells whose coefficients agree only after Phi -> -Phi, r1 -> -r1.
    std::size_t reversed_cells = 0;

    bool all_pass() const noexcept;
};

inline constexpr double default_verification_tol = 1e-10;
inline constexpr double line_distance_tol = 1e-8;
inline constexpr double residual_tol = 1e-8;
inline constexpr double yamabe_curve_tol = 1e-6;

// default_verification_tol unless SSFLOW_TOL holds a positive number.
double verification_tol_from_env();

// Runs every identity and invariant over the grid. Cells that the maps reject are listed in
// `skipped` with the reason.
VerificationSummary run_verification(const VerificationGrid &grid, double tol);

// Psi0 on the line Phi = slope (Psi + 1) such that the orbit stays below Psi = 10 for r1 in
// [0, span]. Along the line Psi/(Psi+1) grows like exp(slope r1).
double line_start_psi(double slope, double span);

// Max perpendicular distance of the trajectory states from Phi = a1 Psi + a2.
double max_line_distance(const Trajectory &traj, double a1, double a2);

// Fixed trajectories used for golden files and examples.
struct NamedTrajectory {
    std::string name;
    EquationParams params;
    PhaseState start;
    double r1_end = 0;
};

std::optional<NamedTrajectory> named_trajectory(std::string_view name);
std::vector<std::string> named_trajectory_names();
Trajectory integrate_named(const NamedTrajectory &named);

} // namespace ssflow

#endif
