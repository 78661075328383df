#pragma once

#include <vector>

#include "sqw/fock.hpp"
#include "sqw/grid.hpp"
#include "sqw/kernel.hpp"
#include "sqw/types.hpp"

namespace sqw {

// 2 D(a) P D(a)^dag = 2 D(2a) P, with exact matrix elements of D.
Matrix transition_T0(ComplexPoint alpha, int N);

// int d^2b/pi g_r(b) T0(a - b) by tensor trapezoid quadrature. r must decay.
Matrix transition_Tr(ComplexPoint alpha, const OrderingVector& r, int N);

// g_r * W0 on the grid. A sampled kernel is used when the grid resolves it,
// the exact Fourier multiplier otherwise.
PhaseSpaceGrid quasi_distribution(const FockDensityMatrix& rho, const OrderingVector& r, const GridSpec& spec);

// Max |grid value - Tr[T_r(a) rho]| over `points` nodes near the grid center.
double quasi_distribution_spot_check(const PhaseSpaceGrid& w, const FockDensityMatrix& rho, const OrderingVector& r,
                                     int points = 5);

// rho = int d^2a/pi W_r(a) T_{-r}(a), evaluated through the characteristic
// function: chi(b) = K_{-r}(b) int d^2a/pi W_r(a) e^{b a* - b* a}, then
// rho = int d^2b/pi chi(b) D(-b). The b extent is where the integrand falls
// below 1e-10 of its peak, or where it bottoms out on sampling noise after
// dropping below 1e-6. Throws TailDivergence otherwise.
FockDensityMatrix reconstruct_rho(const PhaseSpaceGrid& w, const OrderingVector& r, int N);

// Density matrix whose Wigner function is f, through its characteristic function
// chi(b) = (w/c^2) e^{(b mu* - b* mu)/c} K_s(b/c). Throws TailDivergence when chi
// does not decay (f is not the Wigner function of a normalizable state).
FockDensityMatrix density_from_phase_function(const GaussianPhaseFunction& f, int N);

struct CompletenessReport {
  Matrix integral;                        // int d^2a/pi T_r(a) over the grid
  std::vector<double> deviation_by_block; // ||integral - 1|| on the top-left k x k block, k = 1..N
  double block_deviation = 0.0;           // at k = N/2
};

CompletenessReport completeness_check(const OrderingVector& r, int N, const GridSpec& spec);

struct OrderedProductSpec {
  int m = 0;
  int n = 0;
  OrderingVector ordering;
};

// The operator R = int d^2a/pi a*^m a^n T_{-r}(a), so that Tr[T_r(a) R] = a*^m a^n.
// Computed as int d^2c/pi p(c) T0(c) with p(c) = E_{g_{-r}}[(c+b)*^m (c+b)^n],
// which stays convergent even though g_{-r} itself grows.
Matrix ordered_product(const OrderedProductSpec& spec, int N);

// Max |Tr[T_r(a) R] - a*^m a^n| over the given points.
double verify_ordered_product(const OrderedProductSpec& spec, const Matrix& R, int N,
                              const std::vector<ComplexPoint>& points);

}  // namespace sqw
