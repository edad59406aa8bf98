#include "coldopt/toml_lite.hpp"

#include <cctype>
#include <charconv>

namespace coldopt {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool valid_key(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
    return true;
}

// Strips a trailing comment, honoring quoted strings.
std::string_view strip_comment(std::string_view line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (c == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
        if (c == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

double parse_number_token(std::string_view token, int line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        throw TomlError("invalid number '" + std::string(token) + "'", line);
    return v;
}

TomlValue parse_value(std::string_view token, int line) {
    TomlValue v;
    v.line = line;
    v.raw = std::string(token);
    if (token.empty()) throw TomlError("missing value", line);

    if (token.front() == '"') {
        if (token.size() < 2 || token.back() != '"')
            throw TomlError("unterminated string", line);
        v.kind = TomlValue::Kind::String;
        std::string_view body = token.substr(1, token.size() - 2);
        std::string out;
        for (std::size_t i = 0; i < body.size(); ++i) {
            if (body[i] == '\\' && i + 1 < body.size() &&
                (body[i + 1] == '"' || body[i + 1] == '\\')) {
                out.push_back(body[++i]);
            } else if (body[i] == '"') {
                throw TomlError("unescaped quote inside string", line);
            } else {
                out.push_back(body[i]);
            }
        }
        v.str = std::move(out);
        return v;
    }

    if (token.front() == '[') {
        if (token.back() != ']') throw TomlError("unterminated array", line);
        v.kind = TomlValue::Kind::Array;
        std::string_view body = trim(token.substr(1, token.size() - 2));
        while (!body.empty()) {
            const std::size_t comma = body.find(',');
            std::string_view item =
                trim(comma == std::string_view::npos ? body : body.substr(0, comma));
            if (item.empty()) throw TomlError("empty array element", line);
            v.array.push_back(parse_number_token(item, line));
            if (comma == std::string_view::npos) break;
            body = trim(body.substr(comma + 1));
            if (body.empty()) throw TomlError("trailing comma in array", line);
        }
        return v;
    }

    v.kind = TomlValue::Kind::Number;
    v.number = parse_number_token(token, line);
    return v;
}

} // namespace

TomlDocument parse_toml(std::string_view text) {
    TomlDocument doc;
    TomlTable* current = &doc.root;
    std::string current_name;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos
                                                                              : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        line = trim(strip_comment(line));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw TomlError("unterminated section header", line_no);
            const std::string name{trim(line.substr(1, line.size() - 2))};
            if (!valid_key(name)) throw TomlError("invalid section name '" + name + "'", line_no);
            if (doc.sections.count(name))
                throw TomlError("duplicate section [" + name + "]", line_no);
            current = &doc.sections[name];
            current->line = line_no;
            current_name = name;
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw TomlError("expected 'key = value'", line_no);
        const std::string key{trim(line.substr(0, eq))};
        if (!valid_key(key)) throw TomlError("invalid key '" + key + "'", line_no);
        if (current->values.count(key)) {
            const std::string where =
                current_name.empty() ? key : "[" + current_name + "] " + key;
            throw TomlError("duplicate key '" + where + "'", line_no);
        }
        current->values[key] = parse_value(trim(line.substr(eq + 1)), line_no);
    }
    return doc;
}

} // namespace coldopt
