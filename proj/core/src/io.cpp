#include "magq/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>

namespace magq {

#ifndef MAGQ_VERSION_STRING
#define MAGQ_VERSION_STRING "unknown"
#endif

const char* version_string() { return MAGQ_VERSION_STRING; }

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

namespace {

static_assert(std::endian::native == std::endian::little, "MAGW writer assumes a little-endian host");

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

}  // namespace

void write_magw(const std::string& path, const CMat& m, double hbar) {
  std::ofstream os(path, std::ios::binary);
  require(static_cast<bool>(os), "write_magw: cannot open " + path);
  os.write("MAGW", 4);
  put<std::uint32_t>(os, 1);
  put<std::uint64_t>(os, static_cast<std::uint64_t>(m.rows()));
  put<std::uint64_t>(os, static_cast<std::uint64_t>(m.cols()));
  put<double>(os, hbar);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      put<double>(os, m(i, j).real());
      put<double>(os, m(i, j).imag());
    }
  require(static_cast<bool>(os), "write_magw: write failed for " + path);
}

void write_magw(const std::string& path, const OperatorMatrix& op) { write_magw(path, op.weighted(), op.hbar()); }

CMat read_magw(const std::string& path, MagwHeader* header) {
  std::ifstream is(path, std::ios::binary);
  require(static_cast<bool>(is), "read_magw: cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  require(is && std::memcmp(magic, "MAGW", 4) == 0, "read_magw: bad magic in " + path);
  MagwHeader h;
  h.version = get<std::uint32_t>(is);
  h.rows = get<std::uint64_t>(is);
  h.cols = get<std::uint64_t>(is);
  h.hbar = get<double>(is);
  require(is && h.version == 1, "read_magw: unsupported header in " + path);
  CMat m(static_cast<Eigen::Index>(h.rows), static_cast<Eigen::Index>(h.cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double re = get<double>(is);
      const double im = get<double>(is);
      m(i, j) = cplx(re, im);
    }
  require(static_cast<bool>(is), "read_magw: truncated data in " + path);
  if (header) *header = h;
  return m;
}

void write_matrix_csv(std::ostream& os, const CMat& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << format_number(m(i, j).real()) << ',' << format_number(m(i, j).imag());
    }
    os << '\n';
  }
}

void write_husimi_csv(std::ostream& os, const PhaseGrid& g, const HusimiResult& h) {
  const int n = g.dim();
  for (int d = 0; d < n; ++d) os << "y_" << d + 1 << ',';
  for (int d = 0; d < n; ++d) os << "eta_" << d + 1 << ',';
  os << "H\n";
  const int P = g.momentum_size();
  for (std::size_t c = 0; c < g.centers().size(); ++c)
    for (int k = 0; k < P; ++k) {
      const Pt& y = g.centers()[c];
      const Pt& eta = g.momenta()[static_cast<std::size_t>(k)];
      for (int d = 0; d < n; ++d) os << format_number(y(d)) << ',';
      for (int d = 0; d < n; ++d) os << format_number(eta(d)) << ',';
      os << format_number(h.values(static_cast<Eigen::Index>(c) * P + k)) << '\n';
    }
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace

void write_sweep_csv(std::ostream& os, const SweepReport& r, bool header) {
  if (header) os << "axiom,field_preset,gauge,fiducial,hbar,norm,defect,verdict,runtime_ms\n";
  for (const auto& rec : r.records)
    os << csv_field(r.axiom) << ',' << csv_field(r.field_preset) << ',' << csv_field(r.gauge) << ','
       << csv_field(r.fiducial) << ',' << format_number(rec.hbar)
       << ',' << format_number(rec.norm) << ',' << format_number(rec.defect) << ','
       << (r.verdict ? "pass" : "fail") << ',' << format_number(rec.runtime_ms) << '\n';
}

}  // namespace magq
