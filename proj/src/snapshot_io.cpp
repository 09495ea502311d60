#include "cdmd/snapshot_io.hpp"

#include "cdmd/errors.hpp"

#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

namespace cdmd::io {

namespace {

constexpr char kMagic[8] = {'C', 'D', 'M', 'D', 'S', 'N', 'P', '1'};

Format detect(const std::string& path, Format format) {
    if (format != Format::Auto) return format;
    const auto dot = path.rfind('.');
    if (dot != std::string::npos && path.substr(dot) == ".csv") return Format::Csv;
    return Format::Binary;
}

double parse_double(const std::string& token, long long line) {
    double v = 0.0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    // leading whitespace is tolerated, trailing junk is not
    while (begin != end && (*begin == ' ' || *begin == '\t')) ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    while (ptr != end && (*ptr == ' ' || *ptr == '\t' || *ptr == '\r')) ++ptr;
    if (ec != std::errc() || ptr != end)
        throw ParseError("csv: bad numeric field '" + token + "' on line " +
                             std::to_string(line),
                         line);
    return v;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw NumericalError("format_double: conversion failed");
    return std::string(buf, ptr);
}

void save_sequence(const std::string& path, const Mat& states, double dt, Format format) {
    if (states.size() == 0) throw NumericalError("save_sequence: empty matrix");
    switch (detect(path, format)) {
        case Format::Csv: {
            std::ofstream out(path, std::ios::trunc);
            if (!out) throw std::runtime_error("save_sequence: cannot open " + path);
            out << "# dt=" << format_double(dt) << "\n";
            for (Index i = 0; i < states.rows(); ++i) {
                for (Index j = 0; j < states.cols(); ++j) {
                    if (j) out << ',';
                    out << format_double(states(i, j));
                }
                out << '\n';
            }
            if (!out) throw std::runtime_error("save_sequence: write failed for " + path);
            return;
        }
        case Format::Binary: {
            std::ofstream out(path, std::ios::trunc | std::ios::binary);
            if (!out) throw std::runtime_error("save_sequence: cannot open " + path);
            out.write(kMagic, sizeof(kMagic));
            const std::uint64_t rows = static_cast<std::uint64_t>(states.rows());
            const std::uint64_t cols = static_cast<std::uint64_t>(states.cols());
            out.write(reinterpret_cast<const char*>(&rows), sizeof(rows));
            out.write(reinterpret_cast<const char*>(&cols), sizeof(cols));
            out.write(reinterpret_cast<const char*>(&dt), sizeof(dt));
            out.write(reinterpret_cast<const char*>(states.data()),
                      static_cast<std::streamsize>(sizeof(double) * states.size()));
            if (!out) throw std::runtime_error("save_sequence: write failed for " + path);
            return;
        }
        case Format::Auto:
            break;
    }
    throw std::logic_error("save_sequence: unresolved format");
}

namespace {

Sequence load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_sequence: cannot open " + path);

    std::string line;
    long long lineno = 0;

    if (!std::getline(in, line)) throw ParseError("csv: empty file", 1);
    ++lineno;
    if (line.rfind("# dt=", 0) != 0)
        throw ParseError("csv: missing '# dt=' header on line 1", 1);
    const double dt = parse_double(line.substr(5), lineno);

    std::vector<std::vector<double>> rows;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string token;
        while (std::getline(ss, token, ',')) row.push_back(parse_double(token, lineno));
        if (rows.empty()) {
            width = row.size();
        } else if (row.size() != width) {
            throw ParseError("csv: row on line " + std::to_string(lineno) + " has " +
                                 std::to_string(row.size()) + " fields, expected " +
                                 std::to_string(width),
                             lineno);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("csv: no data rows", lineno);

    Mat states(static_cast<Index>(rows.size()), static_cast<Index>(width));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < width; ++j)
            states(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    if (!states.allFinite())
        throw NumericalError("load_sequence: non-finite entries in " + path);
    return Sequence{std::move(states), dt};
}

Sequence load_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_sequence: cannot open " + path);
    in.seekg(0, std::ios::end);
    const std::uint64_t file_size = static_cast<std::uint64_t>(in.tellg());
    in.seekg(0, std::ios::beg);

    constexpr std::uint64_t header_size = sizeof(kMagic) + 2 * sizeof(std::uint64_t) +
                                          sizeof(double);
    if (file_size < header_size)
        throw ParseError("binary: file shorter than header", static_cast<long long>(file_size));

    char magic[sizeof(kMagic)];
    in.read(magic, sizeof(magic));
    if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw ParseError("binary: bad magic", 0);

    std::uint64_t rows = 0, cols = 0;
    double dt = 0.0;
    in.read(reinterpret_cast<char*>(&rows), sizeof(rows));
    in.read(reinterpret_cast<char*>(&cols), sizeof(cols));
    in.read(reinterpret_cast<char*>(&dt), sizeof(dt));

    if (rows == 0 || cols == 0)
        throw ParseError("binary: zero dimension in header", sizeof(kMagic));
    const std::uint64_t expected = header_size + rows * cols * sizeof(double);
    if (expected != file_size)
        throw ParseError("binary: payload is " + std::to_string(file_size - header_size) +
                             " bytes, header implies " +
                             std::to_string(rows * cols * sizeof(double)),
                         static_cast<long long>(header_size));

    Mat states(static_cast<Index>(rows), static_cast<Index>(cols));
    in.read(reinterpret_cast<char*>(states.data()),
            static_cast<std::streamsize>(rows * cols * sizeof(double)));
    if (!in) throw ParseError("binary: truncated payload read", static_cast<long long>(header_size));
    if (!states.allFinite())
        throw NumericalError("load_sequence: non-finite entries in " + path);
    return Sequence{std::move(states), dt};
}

}  // namespace

Sequence load_sequence(const std::string& path, Format format) {
    switch (detect(path, format)) {
        case Format::Csv:
            return load_csv(path);
        case Format::Binary:
            return load_binary(path);
        case Format::Auto:
            break;
    }
    throw std::logic_error("load_sequence: unresolved format");
}

SnapshotData load_snapshots(const std::string& path, Format format) {
    Sequence seq = load_sequence(path, format);
    if (seq.states.cols() < 2)
        throw NumericalError("load_snapshots: need at least two snapshots in " + path);
    if (!(seq.dt > 0.0))
        throw NumericalError("load_snapshots: non-positive dt in " + path);
    const Index n = seq.states.cols() - 1;
    SnapshotData data;
    data.X = seq.states.leftCols(n);
    data.Y = seq.states.rightCols(n);
    data.dt = seq.dt;
    return data;
}

}  // namespace cdmd::io
