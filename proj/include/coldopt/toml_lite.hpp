#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace coldopt {

/// Error while reading a TOML document; carries the 1-based source line.
class TomlError : public std::runtime_error {
public:
    TomlError(const std::string& msg, int line)
        : std::runtime_error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}

    int line() const { return line_; }

private:
    int line_;
};

/// Parsed scalar or array value. Numbers keep their raw token so integer
/// consumers (seeds) can reparse without a double round-trip.
struct TomlValue {
    enum class Kind { Number, String, Array };
    Kind kind = Kind::Number;
    double number = 0.0;
    std::string raw;
    std::string str;
    std::vector<double> array;
    int line = 0;
};

struct TomlTable {
    std::map<std::string, TomlValue> values;
    int line = 0;
};

struct TomlDocument {
    TomlTable root;
    std::map<std::string, TomlTable> sections;
};

/// Parses the TOML subset used by scenario files: single-level [section]
/// headers, bare keys, numbers, double-quoted strings, one-line numeric
/// arrays, and # comments. Duplicate keys or sections are errors.
TomlDocument parse_toml(std::string_view text);

} // namespace coldopt
