#pragma once

#include <stdexcept>
#include <string>

namespace nadc {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Invalid numeric argument or model parameter.
class ParameterError : public Error
{
public:
    using Error::Error;
};

// Malformed text input. Carries the 1-based line number when known.
class FormatError : public Error
{
public:
    FormatError(const std::string &msg, std::size_t line = 0)
            : Error(line ? "line " + std::to_string(line) + ": " + msg : msg),
              line_(line)
    {
    }
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class RangeError : public Error
{
public:
    using Error::Error;
};

// AdcConfig inconsistent with itself or with the stimulus.
class ConfigurationError : public Error
{
public:
    using Error::Error;
};

class CalibrationError : public Error
{
public:
    using Error::Error;
};

class UnsupportedError : public Error
{
public:
    using Error::Error;
};

} // namespace nadc
