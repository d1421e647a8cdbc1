#pragma once

#include <string>

#include "magq/berezin.hpp"
#include "magq/fields.hpp"
#include "magq/phasespace.hpp"

namespace magq {

struct FieldSetup {
  MagneticField B;
  VectorPotential A;
  std::string field;
  std::string gauge;
};

// field: "zero" | "constant:b" | "sinusoidal:b0,eps"
// gauge: "symmetric" | "landau" | "poincare" | "none" (A = 0 regardless of B, for diagnostics)
// Nonzero fields need N >= 2 and act in the (x_1, x_2) plane.
FieldSetup field_preset(const std::string& field, const std::string& gauge, int dim);

// "zero" | "sin_x1" (rho = sin x_1) | "x1x2:c" (rho = c x_1 x_2 / 2, maps symmetric to Landau for B = c).
GaugeFunction gauge_preset(const std::string& spec, int dim);

// "gaussian:width" | "gaussian:x_1..x_N,xi_1..xi_N,width" | "coordinate:q_j" | "coordinate:p_j" |
// "harmonic" (|x|^2 + |xi|^2) | "kinetic" (|xi|^2) | "constant:c" | "random_bandlimited:seed".
// Gaussians are exp(-(|x - x0|^2 + |xi - xi0|^2) / (2 width^2)) with sup 1.
Symbol symbol_preset(const std::string& spec, int dim);

// "gaussian" | "gaussian:width" | "odd_perturbed:eps"
FiducialVector fiducial_preset(const std::string& spec, int dim);

// Centred Gaussian kernel exp(-|x - x0|^2 / (2 a^2) - |w - w0|^2 / (2 b^2)) times a phase exp(i k.w).
KernelFunction gaussian_kernel(int dim, const Pt& x0, double a, const Pt& w0, double b, const Pt& k);

}  // namespace magq
