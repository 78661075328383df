#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "sqw/grid.hpp"
#include "sqw/kernel.hpp"
#include "sqw/types.hpp"

namespace sqw {

// Damping rate kappa, thermal occupation nbar, squeezing correlation M and
// oscillator frequency Omega.
struct BathParams {
  double kappa = 0.1;
  double nbar = 0.0;
  cplx M{0.0};
  double Omega = 1.0;

  void validate() const;
  // |M|^2 <= nbar (nbar + 1). Violations are allowed but flagged by callers.
  bool is_physical() const;
};

struct NoDrive {};
struct ConstantDrive {
  double f0 = 0.0;
};
// f0 cos(omega t + phase)
struct CosineDrive {
  double f0 = 0.0;
  double omega = 0.0;
  double phase = 0.0;
};
// Piecewise linear through (t, f); times strictly increasing.
struct TabulatedDrive {
  std::vector<std::pair<double, double>> samples;
};

using DriveSpec = std::variant<NoDrive, ConstantDrive, CosineDrive, TabulatedDrive>;

void validate_drive(const DriveSpec& drive);
double drive_value(const DriveSpec& drive, double t);

double coeff_T(const BathParams& bath, double t);
cplx coeff_lambda1(const DriveSpec& drive, const BathParams& bath, double t);
cplx coeff_lambda2(const BathParams& bath, double t);
double coeff_A(const BathParams& bath, double t);
OrderingVector ordering_vector(const BathParams& bath, double t);

struct PropagatorCoefficients {
  double t = 0.0;
  double T = 0.0;
  double A = 1.0;
  cplx lambda1{0.0};
  cplx lambda2{0.0};
  OrderingVector ordering;
};

PropagatorCoefficients propagator_coefficients(const BathParams& bath, const DriveSpec& drive, double t);

// (2 nbar + 1)^2 e^{4 kappa t} T^2 - 16 |lambda2|^2
double kernel_discriminant(const BathParams& bath, double t);

// The normalized kernel that smooths the Wigner function over [0, t]. At t = 0
// this is the delta (ordering 0); for t > 0 a non-positive discriminant throws
// KernelNotNormalizable.
GaussianPhaseFunction evolution_kernel(const BathParams& bath, double t);

// Evaluates the kernel from kappa, nbar, lambda2 directly, without going through r(t).
cplx eval_evolution_kernel_direct(const BathParams& bath, double t, ComplexPoint beta);

// Max |direct - g_{r(t)}| over the grid points.
double kernel_consistency(const BathParams& bath, double t, const GridSpec& spec);

// W(a, t) = e^{2 kappa t} (g_{r(t)} * W0)(e^{kappa t} a - lambda1), closed form for Gaussian W0.
GaussianPhaseFunction propagate_gaussian(const GaussianPhaseFunction& initial, const BathParams& bath,
                                         const DriveSpec& drive, double t);

// Same law on sampled data. The convolution is done with the exact Fourier
// multiplier of g_{r(t)}, then the coordinate map is applied by bicubic
// interpolation. Result is in the rotating frame.
PhaseSpaceGrid propagate_grid(const PhaseSpaceGrid& w0, const BathParams& bath, const DriveSpec& drive, double t,
                              const GridSpec& out);

// Rotating-frame mean: e^{-kappa t} (alpha0 + lambda1(t)).
ComplexPoint mean_trajectory(ComplexPoint alpha0, const BathParams& bath, const DriveSpec& drive, double t);

// Rotating-frame coordinates to lab frame: a_lab = e^{-i Omega t} a_rot.
ComplexPoint to_lab_frame(ComplexPoint rotating, double Omega, double t);
GaussianPhaseFunction to_lab_frame(const GaussianPhaseFunction& rotating, double Omega, double t);

}  // namespace sqw
