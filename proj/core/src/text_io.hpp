#pragma once

// Small helpers shared by the delimited-text readers and writers.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <initializer_list>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nadc/errors.hpp"

namespace nadc::detail {

inline std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
    {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

// Shortest text that parses back to the same double.
inline std::string format_double(double x)
{
    char buf[40];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ec == std::errc() ? end : buf);
}

inline double parse_double(std::string_view field, std::size_t line,
        std::string_view column)
{
    field = trim(field);
    if (!field.empty() && field.front() == '+')
    {
        field.remove_prefix(1);
    }
    double value = 0.0;
    const auto [ptr, ec] =
            std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size())
    {
        throw FormatError("cannot parse " + std::string(column) + " value '" +
                        std::string(field) + "'",
                line);
    }
    if (!std::isfinite(value))
    {
        throw FormatError(std::string(column) + " is not finite", line);
    }
    return value;
}

inline std::vector<std::string_view> split(std::string_view line, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true)
    {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos)
        {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

// Reads a comma separated table with an exact header. Blank lines are
// skipped. The callback receives the fields and the 1-based line number.
inline void read_csv(std::istream &in,
        std::initializer_list<std::string_view> header,
        const std::function<void(std::span<const std::string_view>,
                std::size_t)> &row)
{
    std::string text;
    std::size_t line = 0;
    bool have_header = false;
    while (std::getline(in, text))
    {
        ++line;
        const auto trimmed = trim(text);
        if (trimmed.empty())
        {
            continue;
        }
        const auto fields = split(trimmed, ',');
        if (!have_header)
        {
            if (fields.size() != header.size() ||
                    !std::equal(fields.begin(), fields.end(), header.begin()))
            {
                std::string expected;
                for (auto h : header)
                {
                    expected += (expected.empty() ? "" : ",") + std::string(h);
                }
                throw FormatError("expected header '" + expected + "'", line);
            }
            have_header = true;
            continue;
        }
        if (fields.size() != header.size())
        {
            throw FormatError("expected " + std::to_string(header.size()) +
                            " fields, got " + std::to_string(fields.size()),
                    line);
        }
        row(fields, line);
    }
    if (!have_header)
    {
        throw FormatError("missing header");
    }
}

} // namespace nadc::detail
