#include "sqw/fock.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unsupported/Eigen/MatrixFunctions>

#include "displacement.hpp"
#include "parallel.hpp"
#include "sqw/errors.hpp"

namespace sqw {

namespace {

void require_square(const Matrix& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() < 1) throw ConfigError(std::string(who) + ": need a square matrix");
}

}  // namespace

Monitors monitor(const FockDensityMatrix& rho, double tail_threshold) {
  const Matrix& m = rho.entries;
  Monitors out;
  out.trace_drift = std::abs(m.trace() - 1.0);
  out.herm_drift = (m - m.adjoint()).cwiseAbs().maxCoeff();
  const Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  out.min_eig = es.eigenvalues().minCoeff();
  out.tail = m(m.rows() - 1, m.cols() - 1).real();
  out.truncation_warning = out.tail > tail_threshold;
  return out;
}

Ladder ladder_operators(int N) {
  if (N < 2) throw ConfigError("ladder_operators: N must be >= 2");
  Matrix a = Matrix::Zero(N, N);
  for (int n = 1; n < N; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return {a, a.adjoint()};
}

Matrix displacement(cplx beta, int N) {
  Matrix d = Matrix::Zero(N, N);
  detail::visit_displacement(beta, N, [&](int m, int n, cplx v) { d(m, n) = v; });
  return d;
}

Matrix displacement_truncated(cplx beta, int N) {
  const Ladder l = ladder_operators(N);
  const Matrix gen = beta * l.raise - std::conj(beta) * l.lower;
  return gen.exp();
}

FockDensityMatrix coherent_state(cplx alpha0, int N) {
  if (N < 1) throw ConfigError("coherent_state: N must be positive");
  Eigen::VectorXcd psi(N);
  cplx amp{1.0};
  for (int n = 0; n < N; ++n) {
    if (n > 0) amp *= alpha0 / std::sqrt(static_cast<double>(n));
    psi(n) = amp;
  }
  psi.normalize();
  return FockDensityMatrix(psi * psi.adjoint());
}

FockDensityMatrix thermal_state(double nbar, int N) {
  if (N < 1 || nbar < 0.0) throw ConfigError("thermal_state: need N > 0 and nbar >= 0");
  const double q = nbar / (nbar + 1.0);
  Eigen::VectorXd p(N);
  double w = 1.0;
  for (int n = 0; n < N; ++n, w *= q) p(n) = w;
  p /= p.sum();
  return FockDensityMatrix(p.cast<cplx>().asDiagonal().toDenseMatrix());
}

FockDensityMatrix fock_state(int k, int N) {
  if (k < 0 || k >= N) throw ConfigError("fock_state: level outside the basis");
  Matrix m = Matrix::Zero(N, N);
  m(k, k) = 1.0;
  return FockDensityMatrix(m);
}

Matrix lindblad_rhs(const Matrix& rho, double t, const BathParams& bath, const DriveSpec& drive, Frame frame) {
  require_square(rho, "lindblad_rhs");
  const int N = static_cast<int>(rho.rows());
  std::vector<double> s(N + 3);
  for (int n = 0; n < N + 3; ++n) s[n] = std::sqrt(static_cast<double>(n));
  auto get = [&](int i, int j) -> cplx { return (i < 0 || j < 0 || i >= N || j >= N) ? cplx{0.0} : rho(i, j); };
  // aa^dag with the truncated a^dag has a zero in the last slot.
  auto aad = [&](int k) { return k < N - 1 ? k + 1.0 : 0.0; };

  const double f = drive_value(drive, t);
  const double k1 = bath.kappa * (bath.nbar + 1.0);
  const double k2 = bath.kappa * bath.nbar;
  cplx m_t = bath.kappa * bath.M;
  cplx down{1.0};  // factor on the a part of the drive
  cplx up{1.0};    // factor on the a^dag part
  double omega = bath.Omega;
  if (frame == Frame::rotating) {
    m_t *= std::polar(1.0, 2.0 * bath.Omega * t);
    down = std::polar(1.0, -bath.Omega * t);
    up = std::conj(down);
    omega = 0.0;
  }
  const cplx m_tc = std::conj(m_t);

  Matrix out(N, N);
  for (int j = 0; j < N; ++j) {
    for (int i = 0; i < N; ++i) {
      const cplx r = rho(i, j);
      const cplx a_r = s[i + 1] * get(i + 1, j);
      const cplx ad_r = s[i] * get(i - 1, j);
      const cplx r_a = get(i, j - 1) * s[j];
      const cplx r_ad = get(i, j + 1) * s[j + 1];
      cplx v = -kI * (omega * (i - j) * r + f * (down * (a_r - r_a) + up * (ad_r - r_ad)));
      v += k1 * (2.0 * s[i + 1] * s[j + 1] * get(i + 1, j + 1) - static_cast<double>(i + j) * r);
      v += k2 * (2.0 * s[i] * s[j] * get(i - 1, j - 1) - (aad(i) + aad(j)) * r);
      v += m_t * (2.0 * s[i] * s[j + 1] * get(i - 1, j + 1) - (i >= 1 ? s[i] * s[i - 1] : 0.0) * get(i - 2, j) -
                  get(i, j + 2) * s[j + 1] * s[j + 2]);
      v += m_tc * (2.0 * s[i + 1] * s[j] * get(i + 1, j - 1) - s[i + 1] * s[i + 2] * get(i + 2, j) -
                   get(i, j - 2) * (j >= 1 ? s[j - 1] * s[j] : 0.0));
      out(i, j) = v;
    }
  }
  return out;
}

double default_time_step(const BathParams& bath) {
  double dt = 1e-3;
  if (bath.Omega != 0.0) dt = std::min(dt, 0.05 / std::abs(bath.Omega));
  dt = std::min(dt, 0.05 / (bath.kappa * (2.0 * bath.nbar + 1.0)));
  return dt;
}

std::vector<TrajectoryPoint> integrate(const FockDensityMatrix& rho0, const BathParams& bath, const DriveSpec& drive,
                                       const IntegratorConfig& cfg) {
  require_square(rho0.entries, "integrate");
  if (!(cfg.dt > 0.0)) throw ConfigError("integrate: dt must be positive");
  if (!(cfg.t_end >= 0.0)) throw NegativeTime("integrate: t_end must be >= 0");
  std::vector<double> stops = cfg.record_times;
  if (stops.empty()) stops.push_back(cfg.t_end);
  for (double t : stops) {
    if (t < 0.0 || t > cfg.t_end * (1.0 + 1e-12) + 1e-300) {
      throw ConfigError("integrate: record times must lie in [0, t_end]");
    }
  }
  if (!std::is_sorted(stops.begin(), stops.end())) throw ConfigError("integrate: record times must be ascending");

  auto f = [&](double t, const Matrix& y) { return lindblad_rhs(y, t, bath, drive, cfg.frame); };
  std::vector<TrajectoryPoint> out;
  out.reserve(stops.size());
  Matrix y = rho0.entries;
  double tc = 0.0;
  for (double ts : stops) {
    if (ts > tc) {
      const int n = std::max(1, static_cast<int>(std::ceil((ts - tc) / cfg.dt - 1e-9)));
      const double h = (ts - tc) / n;
      for (int i = 0; i < n; ++i) {
        const double t = tc + i * h;
        const Matrix k1 = f(t, y);
        const Matrix k2 = f(t + 0.5 * h, y + (0.5 * h) * k1);
        const Matrix k3 = f(t + 0.5 * h, y + (0.5 * h) * k2);
        const Matrix k4 = f(t + h, y + h * k3);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const double peak = y.cwiseAbs().maxCoeff();
        if (!(peak <= cfg.blowup)) {
          std::ostringstream os;
          os << "integrate: entry magnitude " << peak << " exceeded " << cfg.blowup << " at t = " << t + h;
          throw BlowUp(os.str());
        }
      }
      tc = ts;
    }
    TrajectoryPoint p;
    p.t = ts;
    p.rho = FockDensityMatrix(y);
    p.monitors = monitor(p.rho, cfg.tail_threshold);
    out.push_back(std::move(p));
  }
  return out;
}

OrderCheck rk4_order_check(const FockDensityMatrix& rho0, const BathParams& bath, const DriveSpec& drive,
                           double t_end, double dt, Frame frame) {
  auto run = [&](double h) {
    IntegratorConfig cfg;
    cfg.dt = h;
    cfg.t_end = t_end;
    cfg.record_times = {t_end};
    cfg.frame = frame;
    return integrate(rho0, bath, drive, cfg).back().rho.entries;
  };
  const Matrix ref = run(dt / 32.0);
  OrderCheck c;
  c.dt = dt;
  c.error_dt = (run(dt) - ref).norm();
  c.error_half = (run(0.5 * dt) - ref).norm();
  c.ratio = c.error_dt / c.error_half;
  return c;
}

FockDensityMatrix rotate_frame(const FockDensityMatrix& rho, double Omega, double t, Rotation direction) {
  const double sign = direction == Rotation::to_rotating ? 1.0 : -1.0;
  const int N = rho.dim();
  Matrix m = rho.entries;
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i)
      if (i != j) m(i, j) *= std::polar(1.0, sign * Omega * t * (i - j));
  return FockDensityMatrix(m);
}

cplx wigner_value(const Matrix& rho, ComplexPoint alpha) {
  const int N = static_cast<int>(rho.rows());
  cplx w{0.0};
  // T0(a) = 2 D(2a) P, so T0_mn = 2 (-1)^n <m|D(2a)|n>.
  detail::visit_displacement(2.0 * alpha.value(), N,
                             [&](int m, int n, cplx v) { w += (n % 2 == 0 ? 2.0 : -2.0) * v * rho(n, m); });
  return w;
}

double wigner_point(const FockDensityMatrix& rho, ComplexPoint alpha) { return wigner_value(rho.entries, alpha).real(); }

bool wigner_reliable(ComplexPoint alpha, int N) { return std::norm(alpha.value()) <= 0.25 * N; }

PhaseSpaceGrid wigner_grid(const FockDensityMatrix& rho, const GridSpec& spec) {
  PhaseSpaceGrid g = sample(spec, [&](ComplexPoint a) { return wigner_value(rho.entries, a); });
  bool reliable = true;
  for (int iy : {0, spec.ny - 1})
    for (int ix : {0, spec.nx - 1}) reliable = reliable && wigner_reliable(spec.point(ix, iy), rho.dim());
  if (!reliable) g.warnings.push_back("WignerRange: grid reaches beyond |alpha|^2 = N/4 for this cutoff");
  return g;
}

cplx moments(const FockDensityMatrix& rho, int m, int n) {
  if (m < 0 || n < 0) throw ConfigError("moments: orders must be >= 0");
  const int N = rho.dim();
  cplx sum{0.0};
  // a^dag^m a^n |j> = sqrt(j!/(j-n)!) sqrt((j-n+m)!/(j-n)!) |j-n+m>
  for (int j = n; j < N; ++j) {
    const int k = j - n + m;
    if (k >= N) break;
    const double c = std::exp(0.5 * (std::lgamma(j + 1.0) + std::lgamma(k + 1.0)) - std::lgamma(j - n + 1.0));
    sum += rho.entries(j, k) * c;
  }
  return sum;
}

double trace_distance(const Matrix& a, const Matrix& b) {
  Eigen::JacobiSVD<Matrix> svd(a - b);
  return 0.5 * svd.singularValues().sum();
}

}  // namespace sqw
