#pragma once

#include <vector>

#include "sqw/bath.hpp"
#include "sqw/grid.hpp"
#include "sqw/types.hpp"

namespace sqw {

struct FockDensityMatrix {
  Matrix entries;

  FockDensityMatrix() = default;
  explicit FockDensityMatrix(Matrix m) : entries(std::move(m)) {}

  int dim() const { return static_cast<int>(entries.rows()); }
  cplx trace() const { return entries.trace(); }
};

struct Monitors {
  double trace_drift = 0.0;  // |Tr rho - 1|
  double herm_drift = 0.0;   // max |rho - rho^dag|
  double min_eig = 0.0;      // of the Hermitian part
  double tail = 0.0;         // population of the top level
  bool truncation_warning = false;
};

Monitors monitor(const FockDensityMatrix& rho, double tail_threshold = 1e-8);

struct Ladder {
  Matrix lower;
  Matrix raise;
};

Ladder ladder_operators(int N);

// <m|D(beta)|n> for m, n < N, from the closed Laguerre form; these are the
// exact matrix elements of the full displacement operator.
Matrix displacement(cplx beta, int N);
// exp(beta a^dag - beta* a) with truncated ladder matrices.
Matrix displacement_truncated(cplx beta, int N);

FockDensityMatrix coherent_state(cplx alpha0, int N);
FockDensityMatrix thermal_state(double nbar, int N);
FockDensityMatrix fock_state(int k, int N);

// d rho / dt for the driven damped oscillator in the squeezed bath. In the lab
// frame H = Omega a^dag a + f(t)(a + a^dag); in the rotating frame the drive
// carries e^{-+i Omega t} and M picks up e^{2 i Omega t}. Truncated-operator
// products throughout, so the trace is conserved exactly.
Matrix lindblad_rhs(const Matrix& rho, double t, const BathParams& bath, const DriveSpec& drive,
                    Frame frame = Frame::lab);

struct IntegratorConfig {
  double dt = 1e-3;
  double t_end = 0.0;
  std::vector<double> record_times;
  Frame frame = Frame::rotating;
  double tail_threshold = 1e-8;
  double blowup = 1e6;
};

struct TrajectoryPoint {
  double t = 0.0;
  FockDensityMatrix rho;
  Monitors monitors;
};

// Fixed-step RK4. Steps are shortened as needed to land on every record time.
// Never renormalizes.
std::vector<TrajectoryPoint> integrate(const FockDensityMatrix& rho0, const BathParams& bath, const DriveSpec& drive,
                                       const IntegratorConfig& cfg);

double default_time_step(const BathParams& bath);

struct OrderCheck {
  double dt = 0.0;
  double error_dt = 0.0;    // ||rho_dt - rho_ref||_F at t_end
  double error_half = 0.0;  // same with dt/2
  double ratio = 0.0;       // error_dt / error_half, 16 for a fourth-order method
};

// Reference solution uses dt/32.
OrderCheck rk4_order_check(const FockDensityMatrix& rho0, const BathParams& bath, const DriveSpec& drive,
                           double t_end, double dt, Frame frame = Frame::rotating);

enum class Rotation { to_rotating, to_lab };

// Conjugation by exp(+-i Omega t a^dag a).
FockDensityMatrix rotate_frame(const FockDensityMatrix& rho, double Omega, double t, Rotation direction);

// 2 Tr[rho D(a) P D(a)^dag], P the parity. Reliable for |a|^2 below about N/4.
double wigner_point(const FockDensityMatrix& rho, ComplexPoint alpha);
cplx wigner_value(const Matrix& rho, ComplexPoint alpha);
bool wigner_reliable(ComplexPoint alpha, int N);
PhaseSpaceGrid wigner_grid(const FockDensityMatrix& rho, const GridSpec& spec);

// Tr[rho a^dag^m a^n]
cplx moments(const FockDensityMatrix& rho, int m, int n);

// Half the sum of singular values of a - b.
double trace_distance(const Matrix& a, const Matrix& b);

struct SeriesTruncation {
  int mn_max = 12;
  int pq_max = 30;
  double term_norm_floor = 1e-14;
};

struct SeriesResult {
  FockDensityMatrix rho;  // rotating frame, not renormalized
  cplx trace{0.0};
  int mn_terms = 0;
  int pq_terms = 0;
  double last_term_norm = 0.0;
};

// Closed-form operator series for rho(t). Throws NonConvergence when a sum hits
// its cap with the last term still above the floor.
SeriesResult series_propagate(const FockDensityMatrix& rho0, const BathParams& bath, const DriveSpec& drive, double t,
                              const SeriesTruncation& trunc = {});

}  // namespace sqw
