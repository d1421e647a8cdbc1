#pragma once

#include <functional>
#include <string>
#include <vector>

#include "magq/berezin.hpp"
#include "magq/weyl.hpp"

namespace magq {

// (F <>_0 G)(x, y) = int dz F(x, z) G(x, y - z), no prefactor.
KernelFunction classical_product(const KernelFunction& F, const KernelFunction& G, const PhaseGrid& grid);
// Sample-level version on the position x dual grid; kernels are taken as zero outside the dual window.
CMat classical_product_samples(const CMat& F, const CMat& G, const PhaseGrid& grid);

// sum_j [(Y_j F) <>_0 (-i d_j G) - (-i d_j F) <>_0 (Y_j G)] - sum_jk B_jk (Y_j F) <>_0 (Y_k G)
KernelFunction kernel_bracket(const MagneticField& B, const KernelFunction& F, const KernelFunction& G,
                              const PhaseGrid& grid, std::vector<std::string>* warnings = nullptr);

// Pentagon phases of the Dirac-axiom proof; which = 1 or 2.
cplx phase_w(const MagneticField& B, int which, const Pt& x, const Pt& y, const Pt& z, const Pt& a, const Pt& b,
             double hbar, const SimplexRule& rule);
cplx phase_w(const MagneticField& B, int which, const Pt& x, const Pt& y, const Pt& z, const Pt& a, const Pt& b,
             double hbar);

struct PhaseLemmaReport {
  std::vector<double> hbar_list;
  std::vector<cplx> values;  // (1/(i hbar)) (w_1 - w_2)
  cplx limit;                // Richardson extrapolation in powers of sqrt(hbar)
  double target = 0.0;       // -sum z_j (y_k - z_k) B_jk(x)
  double error = 0.0;
  bool pass = false;
};

// Richardson table for values at hbar_i = hbar_0 / 2^i with error expansion in sqrt(hbar).
cplx richardson_sqrt(const std::vector<cplx>& values);

PhaseLemmaReport phase_lemma_check(const MagneticField& B, const Pt& x, const Pt& y, const Pt& z, const Pt& a,
                                   const Pt& b, const std::vector<double>& hbar_list, double tol = 1e-3);

// Phase grid used at each hbar of a sweep.
using GridPolicy = std::function<PhaseGrid(double hbar)>;
// Fixed box, M grows like 1/hbar (rounded up to even, at least m_min).
GridPolicy scaled_grid_policy(int dim, double L, double m_times_hbar, int m_min, double fiducial_width = 1.0);
// Box L = l_times_sqrt_hbar * sqrt(hbar) around the origin, fixed M.
GridPolicy sqrt_box_policy(int dim, double l_times_sqrt_hbar, int M, double fiducial_width = 1.0);

struct SweepRecord {
  double hbar = 0.0;
  double norm = 0.0;
  double defect = 0.0;
  double runtime_ms = 0.0;
  std::string grid;
  std::vector<std::string> warnings;
};

struct SweepReport {
  std::string axiom;
  std::string field_preset;
  std::string gauge;
  std::string fiducial;
  std::vector<SweepRecord> records;
  bool verdict = false;
  std::string rule;
  double reference = 0.0;  // ||f||_inf for Rieffel
};

struct SweepContext {
  VectorPotential A;
  MagneticField B;
  FiducialVector v;
  std::string field_preset = "custom";
  std::string gauge = "custom";
  int threads = 1;
};

std::string grid_summary(const PhaseGrid& g);

// Verdict rules.
bool verdict_strictly_decreasing(const std::vector<SweepRecord>& r, double final_ratio);
bool verdict_rieffel(const std::vector<SweepRecord>& r, double sup, double band = 0.05);

SweepReport rieffel_sweep(const SweepContext& ctx, const Symbol& f, const std::vector<double>& hbar_list,
                          const GridPolicy& grids);
SweepReport vonneumann_sweep(const SweepContext& ctx, const Symbol& f, const Symbol& g,
                             const std::vector<double>& hbar_list, const GridPolicy& grids);
SweepReport dirac_sweep(const SweepContext& ctx, const Symbol& f, const Symbol& g,
                        const std::vector<double>& hbar_list, const GridPolicy& grids);
// ||B(f) - Op(f)||; pass iff strictly decreasing and final <= initial / 3.
SweepReport semiclassical_sweep(const SweepContext& ctx, const Symbol& f, const std::vector<double>& hbar_list,
                                const GridPolicy& grids);
// ||B(F F) - Rep(Sigma F)|| / ||B(F F)||; pass iff every record is below tol.
SweepReport sigma_sweep(const SweepContext& ctx, const KernelFunction& F, const std::vector<double>& hbar_list,
                        const GridPolicy& grids, double tol = 1e-8);

// Sup of |f| over the phase grid of the last sweep point unless the symbol carries a hint.
double symbol_sup(const Symbol& f, const PhaseGrid& g);

}  // namespace magq
