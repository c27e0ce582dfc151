#include "sphcover/io.hpp"

#include "sphcover/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

namespace sphcover {

namespace {

std::vector<std::string_view> split_fields(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    auto is_sep = [](char c) { return c == ',' || c == ' ' || c == '\t' || c == '\r'; };
    while (pos < line.size()) {
        while (pos < line.size() && is_sep(line[pos])) {
            ++pos;
        }
        std::size_t end = pos;
        while (end < line.size() && !is_sep(line[end])) {
            ++end;
        }
        if (end > pos) {
            out.push_back(line.substr(pos, end - pos));
        }
        pos = end;
    }
    return out;
}

bool is_skippable(std::string_view line)
{
    const auto first = line.find_first_not_of(" \t\r");
    return first == std::string_view::npos || line[first] == '#';
}

double to_double(std::string_view field, std::size_t line_no)
{
    double value = 0.0;
    const auto* first = field.data();
    if (!field.empty() && field.front() == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(value)) {
        throw ParseError(line_no, "not a number: '" + std::string(field) + "'");
    }
    return value;
}

long to_integer(std::string_view field, std::size_t line_no)
{
    long value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw ParseError(line_no, "not an integer: '" + std::string(field) + "'");
    }
    return value;
}

} // namespace

ConstellationFile read_constellation_file(std::istream& in)
{
    ConstellationFile file;
    std::string line;
    std::size_t line_no = 0;
    std::size_t columns = 0;
    bool has_header = false;

    while (std::getline(in, line)) {
        ++line_no;
        if (is_skippable(line)) {
            continue;
        }
        const auto fields = split_fields(line);
        if (fields.front() == "dim") {
            if (has_header || !file.axes.empty()) {
                throw ParseError(line_no, "'dim' header must come before any data");
            }
            if (fields.size() != 2) {
                throw ParseError(line_no, "expected 'dim <d>'");
            }
            const long d = to_integer(fields[1], line_no);
            if (d < 2) {
                throw ParseError(line_no, "dimension must be at least 2");
            }
            file.dim = static_cast<int>(d);
            has_header = true;
            continue;
        }

        if (columns == 0) {
            columns = fields.size();
            if (!has_header) {
                file.dim = static_cast<int>(columns);
            }
            if (columns < static_cast<std::size_t>(file.dim) ||
                columns > static_cast<std::size_t>(file.dim) + 1) {
                throw ParseError(line_no, "expected " + std::to_string(file.dim) + " or " +
                                              std::to_string(file.dim + 1) + " columns");
            }
            if (file.dim < 2) {
                throw ParseError(line_no, "dimension must be at least 2");
            }
        } else if (fields.size() != columns) {
            throw ParseError(line_no, "expected " + std::to_string(columns) + " columns, found " +
                                          std::to_string(fields.size()));
        }

        Vec axis(file.dim);
        for (int k = 0; k < file.dim; ++k) {
            axis[k] = to_double(fields[static_cast<std::size_t>(k)], line_no);
        }
        const double norm = axis.norm();
        if (std::abs(norm - 1.0) > 1e-3) {
            throw ParseError(line_no, "axis is not a unit vector (norm " + std::to_string(norm) +
                                          ")");
        }
        file.axes.push_back(axis / norm);

        if (columns == static_cast<std::size_t>(file.dim) + 1) {
            const double theta = to_double(fields.back(), line_no);
            if (!(theta > -1.0 && theta < 1.0)) {
                throw ParseError(line_no, "threshold must lie strictly inside (-1, 1)");
            }
            file.thresholds.emplace_back(theta);
        } else {
            file.thresholds.emplace_back(std::nullopt);
        }
    }
    if (file.axes.empty()) {
        throw ParseError(line_no, "no caps in constellation file");
    }
    return file;
}

Constellation to_constellation(const ConstellationFile& file, std::optional<double> theta)
{
    std::vector<Cap> caps;
    caps.reserve(file.axes.size());
    for (std::size_t i = 0; i < file.axes.size(); ++i) {
        const auto t = file.thresholds[i] ? file.thresholds[i] : theta;
        if (!t) {
            throw InvalidArgument("cap " + std::to_string(i + 1) +
                                  " has no threshold; pass one with --theta");
        }
        caps.emplace_back(file.axes[i], *t);
    }
    return Constellation(file.dim, std::move(caps));
}

void write_constellation(std::ostream& out, int dim, const std::vector<Vec>& axes,
                         std::optional<double> theta)
{
    char buf[32];
    out << "dim " << dim << '\n';
    for (const auto& a : axes) {
        for (Eigen::Index k = 0; k < a.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", a[k]);
            out << (k ? " " : "") << buf;
        }
        if (theta) {
            std::snprintf(buf, sizeof buf, "%.17g", *theta);
            out << ' ' << buf;
        }
        out << '\n';
    }
}

double parse_theta(std::string_view text)
{
    if (text == "sqrt3/2") {
        return std::sqrt(3.0) / 2.0;
    }
    const double v = to_double(text, 0);
    if (!(v > -1.0 && v < 1.0)) {
        throw InvalidArgument("theta must lie strictly inside (-1, 1)");
    }
    return v;
}

QpInstance read_qp(std::istream& in)
{
    std::string line;
    std::size_t line_no = 0;
    QpInstance q;
    long n = -1;
    long d = 0;
    long row = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_skippable(line)) {
            continue;
        }
        const auto fields = split_fields(line);
        if (n < 0) {
            if (fields.size() != 4 || fields[0] != "qp") {
                throw ParseError(line_no, "expected header 'qp <n> <d> <c>'");
            }
            n = to_integer(fields[1], line_no);
            d = to_integer(fields[2], line_no);
            q.c = to_double(fields[3], line_no);
            if (n < 1 || d < 1) {
                throw ParseError(line_no, "row and column counts must be positive");
            }
            q.A.resize(n, d);
            q.b.resize(n);
            continue;
        }
        if (row >= n) {
            throw ParseError(line_no, "more rows than declared");
        }
        if (fields.size() != static_cast<std::size_t>(d) + 1) {
            throw ParseError(line_no, "expected " + std::to_string(d + 1) + " values");
        }
        for (long k = 0; k < d; ++k) {
            q.A(row, k) = to_double(fields[static_cast<std::size_t>(k)], line_no);
        }
        q.b[row] = to_double(fields.back(), line_no);
        ++row;
    }
    if (n < 0) {
        throw ParseError(line_no, "missing 'qp' header");
    }
    if (row != n) {
        throw ParseError(line_no, "expected " + std::to_string(n) + " rows, found " +
                                      std::to_string(row));
    }
    try {
        q.validate();
    } catch (const Error& e) {
        throw ParseError(0, e.what());
    }
    return q;
}

Graph read_graph(std::istream& in)
{
    std::string line;
    std::size_t line_no = 0;
    std::optional<Graph> g;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_skippable(line)) {
            continue;
        }
        const auto fields = split_fields(line);
        if (!g) {
            if (fields.size() != 2 || fields[0] != "graph") {
                throw ParseError(line_no, "expected header 'graph <n>'");
            }
            const long n = to_integer(fields[1], line_no);
            if (n < 1) {
                throw ParseError(line_no, "graph needs at least one vertex");
            }
            g.emplace(static_cast<int>(n));
            continue;
        }
        if (fields.size() != 2) {
            throw ParseError(line_no, "expected an edge 'u v'");
        }
        const long u = to_integer(fields[0], line_no);
        const long v = to_integer(fields[1], line_no);
        if (u < 1 || v < 1 || u > g->size() || v > g->size() || u == v) {
            throw ParseError(line_no, "edge endpoints must be distinct vertices in 1.." +
                                          std::to_string(g->size()));
        }
        g->add_edge(static_cast<int>(u - 1), static_cast<int>(v - 1));
    }
    if (!g) {
        throw ParseError(line_no, "missing 'graph' header");
    }
    return *g;
}

} // namespace sphcover
