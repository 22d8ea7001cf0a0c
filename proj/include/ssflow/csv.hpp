#ifndef SSFLOW_CSV_HPP
#define SSFLOW_CSV_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <ssflow/integrator.hpp>
#include <ssflow/phase_plane.hpp>

namespace ssflow
{

// 17 significant digits, '.' decimal separator regardless of locale.
std::string format_double(double value);
// Error(Io) unless the whole field parses.
double parse_double(std::string_view text);

// Header `r1,psi,phi`, LF line endings.
void write_trajectory_csv(std::ostream &os, const Trajectory &traj);
// Header `eta,f,fprime`.
void write_profile_csv(std::ostream &os, const std::vector<ProfileSample> &samples);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

// Numeric CSV with one header row. Error(Io) on ragged rows or unparsable fields.
CsvTable read_csv(std::istream &is);

} // namespace ssflow

#endif
