#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "magq/berezin.hpp"
#include "magq/strictq.hpp"
#include "magq/weyl.hpp"

namespace magq {

// Locale-free fixed scientific notation with 17 significant digits.
std::string format_number(double x);

// MAGW dump: 32-byte header then row-major little-endian complex128.
//   bytes 0-3 "MAGW", 4-7 uint32 format version (1), 8-15 uint64 rows, 16-23 uint64 cols, 24-31 double hbar.
struct MagwHeader {
  std::uint32_t version = 1;
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  double hbar = 0.0;
};

void write_magw(const std::string& path, const CMat& m, double hbar);
// Dumps the weighted matrix K h^N, i.e. the operator in orthonormal grid coordinates.
void write_magw(const std::string& path, const OperatorMatrix& op);
CMat read_magw(const std::string& path, MagwHeader* header = nullptr);

void write_matrix_csv(std::ostream& os, const CMat& m);
// Columns y_1..y_N, eta_1..eta_N, H.
void write_husimi_csv(std::ostream& os, const PhaseGrid& g, const HusimiResult& h);
// Columns axiom, field_preset, gauge, fiducial, hbar, norm, defect, verdict, runtime_ms.
void write_sweep_csv(std::ostream& os, const SweepReport& r, bool header = true);

}  // namespace magq
