#include "openlab/field_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "openlab/errors.hpp"

namespace openlab {

static_assert(std::endian::native == std::endian::little, "binary field format assumes little endian");

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(line);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    return out;
}

double parse_double(const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw DomainError("bad number '" + s + "'");
    }
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size()) throw DomainError("bad number '" + s + "'");
    return v;
}

}  // namespace

std::string format_complex(cplx v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", v.real(), v.imag());
    return buf;
}

cplx parse_complex(const std::string& raw) {
    std::string s = raw;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
    if (s.empty()) throw DomainError("empty complex entry");
    if (s.back() != 'i') return {parse_double(s), 0.0};
    // split at the last sign that is not an exponent sign
    for (std::size_t k = s.size() - 1; k > 0; --k) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E')
            return {parse_double(s.substr(0, k)), parse_double(s.substr(k, s.size() - k - 1))};
    }
    return {0.0, parse_double(s.substr(0, s.size() - 1))};
}

void write_field_csv(const std::string& path, const Field2D& f, const std::vector<std::string>& comments) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write " + path);
    for (const auto& c : comments) out << "# " << c << "\n";
    const Grid2D& g = f.grid;
    out << "x\\x_d";
    for (std::size_t j = 0; j < g.nxd; ++j) out << ',' << fmt(g.xd(j));
    out << '\n';
    for (std::size_t i = 0; i < g.nx; ++i) {
        out << fmt(g.x(i));
        for (std::size_t j = 0; j < g.nxd; ++j) out << ',' << format_complex(f.at(i, j));
        out << '\n';
    }
}

Field2D read_field_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open " + path);
    std::string line;
    std::vector<double> xd, xs;
    std::vector<std::vector<cplx>> rows;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto cells = split(line, ',');
        if (!header) {
            for (std::size_t c = 1; c < cells.size(); ++c) xd.push_back(parse_double(cells[c]));
            header = true;
            continue;
        }
        if (cells.size() != xd.size() + 1) throw DomainError("ragged row in " + path);
        xs.push_back(parse_double(cells[0]));
        std::vector<cplx> row;
        row.reserve(xd.size());
        for (std::size_t c = 1; c < cells.size(); ++c) row.push_back(parse_complex(cells[c]));
        rows.push_back(std::move(row));
    }
    if (xs.size() < 2 || xd.size() < 2) throw DomainError("field file " + path + " has no data");
    Grid2D g{xs.front(), xs.back(), xd.front(), xd.back(), xs.size(), xd.size()};
    g.check();
    Field2D f(g);
    for (std::size_t i = 0; i < g.nx; ++i)
        for (std::size_t j = 0; j < g.nxd; ++j) f.at(i, j) = rows[i][j];
    return f;
}

void write_field_binary(const std::string& path, const Field2D& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot write " + path);
    const Grid2D& g = f.grid;
    const std::uint32_t version = 1;
    const std::uint64_t nx = g.nx, nxd = g.nxd;
    const double box[4] = {g.x_min, g.x_max, g.xd_min, g.xd_max};
    out.write("OLF2", 4);
    out.write(reinterpret_cast<const char*>(&version), sizeof version);
    out.write(reinterpret_cast<const char*>(&nx), sizeof nx);
    out.write(reinterpret_cast<const char*>(&nxd), sizeof nxd);
    out.write(reinterpret_cast<const char*>(box), sizeof box);
    out.write(reinterpret_cast<const char*>(f.values.data()), std::streamsize(f.values.size() * sizeof(cplx)));
}

Field2D read_field_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open " + path);
    char magic[4];
    std::uint32_t version = 0;
    std::uint64_t nx = 0, nxd = 0;
    double box[4];
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), sizeof version);
    in.read(reinterpret_cast<char*>(&nx), sizeof nx);
    in.read(reinterpret_cast<char*>(&nxd), sizeof nxd);
    in.read(reinterpret_cast<char*>(box), sizeof box);
    if (!in || std::memcmp(magic, "OLF2", 4) != 0 || version != 1)
        throw DomainError(path + " is not an OLF2 field file");
    Grid2D g{box[0], box[1], box[2], box[3], std::size_t(nx), std::size_t(nxd)};
    g.check();
    Field2D f(g);
    in.read(reinterpret_cast<char*>(f.values.data()), std::streamsize(f.values.size() * sizeof(cplx)));
    if (!in) throw DomainError(path + " is truncated");
    return f;
}

void write_field(const std::string& path, const Field2D& f, const std::vector<std::string>& comments) {
    if (path.ends_with(".bin"))
        write_field_binary(path, f);
    else
        write_field_csv(path, f, comments);
}

Field2D read_field(const std::string& path) {
    return path.ends_with(".bin") ? read_field_binary(path) : read_field_csv(path);
}

FieldComparison compare_fields(const Field2D& a, const Field2D& b) {
    if (!a.grid.same_as(b.grid, 1e-9)) throw GridError("fields live on different grids");
    FieldComparison c;
    c.scale = align_scalar(a.values, b.values);
    double num = 0.0, den = 0.0, mx = 0.0, ma = 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k) {
        double d = std::abs(a.values[k] - c.scale * b.values[k]);
        num += d * d;
        den += std::norm(a.values[k]);
        mx = std::max(mx, d);
        ma = std::max(ma, std::abs(a.values[k]));
    }
    c.l2 = den > 0 ? std::sqrt(num / den) : std::sqrt(num);
    c.max = ma > 0 ? mx / ma : mx;
    return c;
}

std::vector<std::string> provenance_comments(const std::string& hash) {
    return {std::string("openlab ") + OPENLAB_VERSION, "params_hash " + hash};
}

void write_table_csv(const std::string& path, const CsvTable& t, const std::vector<std::string>& comments) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write " + path);
    for (const auto& c : comments) out << "# " << c << "\n";
    for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
    out << '\n';
    for (const auto& r : t.rows) {
        for (std::size_t c = 0; c < r.size(); ++c) out << (c ? "," : "") << fmt(r[c]);
        out << '\n';
    }
}

}  // namespace openlab
