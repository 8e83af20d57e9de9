#pragma once

#include "decoh/core.hpp"
#include "decoh/density.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace decoh::harness {

// Binary field dump, all integers and doubles little-endian:
//   "DECOHFLD"  u32 version  u32 0x01020304 (endianness tag)  u32 rank  u32 meta_bytes
//   meta_bytes of JSON text (label, time, parameters)
//   rank x { u64 n  f64 min  f64 spacing }
//   prod(n) x { f64 re  f64 im }     (row-major, last axis fastest)
constexpr std::uint32_t kDumpVersion = 1;

struct FieldDump {
    std::vector<Grid1D> axes;
    std::vector<cplx> values;
    nlohmann::json meta;
};

void write_field(const std::string& path, const ComplexField2D& f, const nlohmann::json& meta = nlohmann::json::object());
void write_field(const std::string& path, const ComplexField1D& f, const nlohmann::json& meta = nlohmann::json::object());
void write_field(const std::string& path, const DensityMatrixGrid& rho, const nlohmann::json& meta = nlohmann::json::object());
FieldDump read_field(const std::string& path);

// Shortest round-trip decimal form, so identical doubles always print identically.
std::string format_double(double v);

// Columns of equal length with a header row.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);
// One row per (i, j): x_i, x_j, Re, Im.
void write_density_csv(const std::string& path, const DensityMatrixGrid& rho);

void write_json(const std::string& path, const nlohmann::json& j);
void write_text(const std::string& path, const std::string& text);
// Creates the directory (and parents); IoError on failure.
void ensure_directory(const std::string& dir);

}  // namespace decoh::harness
