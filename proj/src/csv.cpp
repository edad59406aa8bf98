#include "coldopt/csv.hpp"

#include "coldopt/errors.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace coldopt {
namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

double parse_number(std::string_view token, const std::string& path, std::size_t line_no) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        throw ValidationError(path + ":" + std::to_string(line_no) + ": bad number '" +
                              std::string(token) + "'");
    return v;
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void atomic_write_file(const std::string& path, std::string_view content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp + "' for writing");
        out.write(content.data(), std::streamsize(content.size()));
        if (!out) throw IoError("write failed on '" + tmp + "'");
    }
    std::filesystem::rename(tmp, path);
}

std::string dataset_csv_text(const QualityDataset& dataset) {
    std::string out = "T,HU,packaging,environment,quality\n";
    for (const auto& r : dataset.rows) {
        out += format_double(r.temperature) + ',';
        out += format_double(r.humidity) + ',';
        out += std::to_string(r.packaging) + ',';
        out += std::to_string(r.environment) + ',';
        out += format_double(r.quality) + '\n';
    }
    return out;
}

void write_dataset_csv(const QualityDataset& dataset, const std::string& path) {
    atomic_write_file(path, dataset_csv_text(dataset));
}

QualityDataset read_dataset_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");

    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw ValidationError(path + ": empty file");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "T,HU,packaging,environment,quality")
        throw ValidationError(path + ":1: expected header T,HU,packaging,environment,quality");

    QualityDataset d;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != 5)
            throw ValidationError(path + ":" + std::to_string(line_no) +
                                  ": expected 5 columns, got " + std::to_string(cells.size()));
        QualityRow r;
        r.temperature = parse_number(cells[0], path, line_no);
        r.humidity = parse_number(cells[1], path, line_no);
        const double pkg = parse_number(cells[2], path, line_no);
        const double env = parse_number(cells[3], path, line_no);
        r.quality = parse_number(cells[4], path, line_no);
        r.packaging = int(pkg);
        r.environment = int(env);
        if (double(r.packaging) != pkg || double(r.environment) != env ||
            r.packaging < 1 || r.packaging > 3 || r.environment < 1 || r.environment > 3)
            throw ValidationError(path + ":" + std::to_string(line_no) +
                                  ": packaging/environment must be integer levels 1..3");
        d.rows.push_back(r);
    }
    return d;
}

} // namespace coldopt
