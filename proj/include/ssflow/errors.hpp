#ifndef SSFLOW_ERRORS_HPP
#define SSFLOW_ERRORS_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ssflow
{

enum class ErrorCode {
    InvalidParameter,
    Domain,
    Degenerate,
    DimensionTwo,
    Critical,
    UnphysicalDimension,
    Orientation,
    SingularEvaluation,
    OutsideSupport,
    Unrecoverable,
    Integration,
    Comparison,
    Io,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure in the library is reported through this type. `value()` carries the offending
// number when there is one (e.g. the computed dimension for UnphysicalDimension).
class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string &what, std::optional<double> value = std::nullopt)
        : std::runtime_error(what), m_code(code), m_value(value)
    {
    }

    ErrorCode code() const noexcept
    {
        return m_code;
    }
    std::optional<double> value() const noexcept
    {
        return m_value;
    }

private:
    ErrorCode m_code;
    std::optional<double> m_value;
};

} // namespace ssflow

#endif
