// field_io.hpp: CSV and binary snapshot formats, field comparison

#pragma once

#include <string>
#include <vector>

#include "openlab/liouville.hpp"

namespace openlab {

// CSV layout: '#' comment lines, then a header row "x\x_d,<x_d values>", then one row
// per x node "x,<re+imi>,...".
void write_field_csv(const std::string& path, const Field2D& f, const std::vector<std::string>& comments = {});
Field2D read_field_csv(const std::string& path);

// Binary layout, little endian:
//   char[4] "OLF2", u32 version (1), u64 nx, u64 nxd,
//   f64 x_min, f64 x_max, f64 xd_min, f64 xd_max,
//   nx*nxd pairs (f64 re, f64 im) in row-major order (x outer, x_d inner)
void write_field_binary(const std::string& path, const Field2D& f);
Field2D read_field_binary(const std::string& path);

// Binary when the path ends in .bin, CSV otherwise
void write_field(const std::string& path, const Field2D& f, const std::vector<std::string>& comments = {});
Field2D read_field(const std::string& path);

std::string format_complex(cplx v);
cplx parse_complex(const std::string& s);

struct FieldComparison {
    double l2{0.0};    // ||a - c b|| / ||a||
    double max{0.0};   // max |a - c b| / max |a|
    cplx scale{1.0, 0.0};
};

// Differences after the least-squares complex scalar c that aligns b to a
FieldComparison compare_fields(const Field2D& a, const Field2D& b);

// Header comment lines carried by every CSV the tools write
std::vector<std::string> provenance_comments(const std::string& params_hash);

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};
void write_table_csv(const std::string& path, const CsvTable& t, const std::vector<std::string>& comments);

}  // namespace openlab
