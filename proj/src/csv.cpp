#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include <ssflow/csv.hpp>
#include <ssflow/errors.hpp>

namespace ssflow
{

std::string format_double(double value)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text)
{
    double value = 0;
    const auto *end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, value);
    if (res.ec != std::errc() || res.ptr != end) {
        throw Error(ErrorCode::Io, "cannot parse number '" + std::string(text) + "'");
    }
    return value;
}

void write_trajectory_csv(std::ostream &os, const Trajectory &traj)
{
    os << "r1,psi,phi\n";
    for (std::size_t i = 0; i < traj.size(); ++i) {
        os << format_double(traj.r[i]) << ',' << format_double(traj.states[i][0]) << ','
           << format_double(traj.states[i][1]) << '\n';
    }
}

void write_profile_csv(std::ostream &os, const std::vector<ProfileSample> &samples)
{
    os << "eta,f,fprime\n";
    for (const auto &s : samples) {
        os << format_double(s.eta) << ',' << format_double(s.f) << ',' << format_double(s.fprime) << '\n';
    }
}

namespace
{

std::vector<std::string> split(const std::string &line)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
        out.push_back(field);
    }
    return out;
}

} // namespace

CsvTable read_csv(std::istream &is)
{
    CsvTable table;
    std::string line;
    if (!std::getline(is, line)) {
        throw Error(ErrorCode::Io, "empty CSV input");
    }
    table.header = split(line);
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        const auto fields = split(line);
        if (fields.size() != table.header.size()) {
            throw Error(ErrorCode::Io, "ragged CSV row: " + line);
        }
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto &f : fields) {
            row.push_back(parse_double(f));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace ssflow
