#include "sqw/bath.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "parallel.hpp"
#include "quadrature.hpp"
#include "sqw/errors.hpp"

namespace sqw {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_time(double t, const char* who) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw NegativeTime(std::string(who) + ": time must be finite and >= 0");
}

// e^w - 1 without cancellation for small |w|.
cplx cexpm1(cplx w) {
  const double x = w.real();
  const double y = w.imag();
  const double s = std::sin(0.5 * y);
  return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

// int_0^t e^{w s} ds
cplx exp_integral(cplx w, double t) {
  if (w == 0.0) return cplx{t};
  return cexpm1(w * t) / w;
}

cplx rate(const BathParams& b) { return {b.kappa, b.Omega}; }

}  // namespace

void BathParams::validate() const {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw ConfigError("bath: kappa must be positive");
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) throw ConfigError("bath: nbar must be >= 0");
  if (!std::isfinite(M.real()) || !std::isfinite(M.imag())) throw ConfigError("bath: M must be finite");
  if (!std::isfinite(Omega)) throw ConfigError("bath: Omega must be finite");
}

bool BathParams::is_physical() const { return std::norm(M) <= nbar * (nbar + 1.0) * (1.0 + 1e-12); }

void validate_drive(const DriveSpec& drive) {
  if (const auto* tab = std::get_if<TabulatedDrive>(&drive)) {
    if (tab->samples.size() < 2) throw ConfigError("tabulated drive needs at least two samples");
    for (std::size_t i = 1; i < tab->samples.size(); ++i) {
      if (!(tab->samples[i].first > tab->samples[i - 1].first)) {
        throw ConfigError("tabulated drive times must be strictly increasing");
      }
    }
  }
}

double drive_value(const DriveSpec& drive, double t) {
  return std::visit(overloaded{
                        [](const NoDrive&) { return 0.0; },
                        [](const ConstantDrive& d) { return d.f0; },
                        [t](const CosineDrive& d) { return d.f0 * std::cos(d.omega * t + d.phase); },
                        [t](const TabulatedDrive& d) {
                          const auto& s = d.samples;
                          if (s.empty() || t < s.front().first || t > s.back().first) {
                            std::ostringstream os;
                            os << "tabulated drive does not cover t = " << t;
                            throw DriveDomainError(os.str());
                          }
                          auto it = std::upper_bound(s.begin(), s.end(), t,
                                                     [](double v, const auto& p) { return v < p.first; });
                          if (it == s.end()) return s.back().second;
                          const auto& hi = *it;
                          const auto& lo = *(it - 1);
                          const double u = (t - lo.first) / (hi.first - lo.first);
                          return lo.second + u * (hi.second - lo.second);
                        },
                    },
                    drive);
}

double coeff_T(const BathParams& bath, double t) {
  check_time(t, "coeff_T");
  return -std::expm1(-2.0 * bath.kappa * t);
}

cplx coeff_lambda1(const DriveSpec& drive, const BathParams& bath, double t) {
  check_time(t, "coeff_lambda1");
  const cplx z = rate(bath);
  return std::visit(
      overloaded{
          [](const NoDrive&) { return cplx{0.0}; },
          [&](const ConstantDrive& d) { return -kI * d.f0 * exp_integral(z, t); },
          [&](const CosineDrive& d) {
            const cplx up = std::polar(1.0, d.phase) * exp_integral(z + kI * d.omega, t);
            const cplx down = std::polar(1.0, -d.phase) * exp_integral(z - kI * d.omega, t);
            return -kI * 0.5 * d.f0 * (up + down);
          },
          [&](const TabulatedDrive& d) {
            validate_drive(d);
            const auto& s = d.samples;
            if (s.front().first > 0.0 || s.back().first < t) {
              std::ostringstream os;
              os << "tabulated drive covers [" << s.front().first << ", " << s.back().first << "], need [0, " << t
                 << "]";
              throw DriveDomainError(os.str());
            }
            cplx sum{0.0};
            for (std::size_t i = 1; i < s.size(); ++i) {
              const double a = std::max(s[i - 1].first, 0.0);
              const double b = std::min(s[i].first, t);
              if (b <= a) continue;
              const auto& lo = s[i - 1];
              const auto& hi = s[i];
              auto integrand = [&](double u) {
                const double w = (u - lo.first) / (hi.first - lo.first);
                return (lo.second + w * (hi.second - lo.second)) * std::exp(z * u);
              };
              sum += detail::adaptive_simpson(integrand, a, b, 1e-10);
            }
            return -kI * sum;
          },
      },
      drive);
}

cplx coeff_lambda2(const BathParams& bath, double t) {
  check_time(t, "coeff_lambda2");
  return -bath.kappa * bath.M * exp_integral(2.0 * rate(bath), t);
}

double coeff_A(const BathParams& bath, double t) {
  return std::exp(-bath.kappa * t) / (bath.nbar * coeff_T(bath, t) + 1.0);
}

OrderingVector ordering_vector(const BathParams& bath, double t) {
  const cplx l2 = coeff_lambda2(bath, t);
  return {4.0 * kI * l2.imag(), 4.0 * kI * l2.real(), (2.0 * bath.nbar + 1.0) * std::expm1(2.0 * bath.kappa * t)};
}

PropagatorCoefficients propagator_coefficients(const BathParams& bath, const DriveSpec& drive, double t) {
  PropagatorCoefficients c;
  c.t = t;
  c.T = coeff_T(bath, t);
  c.A = coeff_A(bath, t);
  c.lambda1 = coeff_lambda1(drive, bath, t);
  c.lambda2 = coeff_lambda2(bath, t);
  c.ordering = ordering_vector(bath, t);
  return c;
}

double kernel_discriminant(const BathParams& bath, double t) {
  check_time(t, "kernel_discriminant");
  const double c = (2.0 * bath.nbar + 1.0) * std::exp(2.0 * bath.kappa * t) * coeff_T(bath, t);
  return c * c - 16.0 * std::norm(coeff_lambda2(bath, t));
}

GaussianPhaseFunction evolution_kernel(const BathParams& bath, double t) {
  check_time(t, "evolution_kernel");
  GaussianPhaseFunction k;
  k.ordering = ordering_vector(bath, t);
  if (t == 0.0) return k;
  if (!(kernel_discriminant(bath, t) > 0.0)) {
    std::ostringstream os;
    os << "evolution kernel is not normalizable: |M| = " << std::abs(bath.M) << ", nbar = " << bath.nbar
       << ", t = " << t;
    throw KernelNotNormalizable(os.str());
  }
  return k;
}

cplx eval_evolution_kernel_direct(const BathParams& bath, double t, ComplexPoint beta) {
  const double c = (2.0 * bath.nbar + 1.0) * std::exp(2.0 * bath.kappa * t) * coeff_T(bath, t);
  const cplx l2 = coeff_lambda2(bath, t);
  const double D = c * c - 16.0 * std::norm(l2);
  const cplx b = beta.value();
  const cplx q = 2.0 * c * std::norm(b) - 4.0 * std::conj(l2) * b * b - 4.0 * l2 * std::conj(b * b);
  return 2.0 / std::sqrt(cplx{D}) * std::exp(-q / D);
}

double kernel_consistency(const BathParams& bath, double t, const GridSpec& spec) {
  const OrderingVector r = ordering_vector(bath, t);
  double worst = 0.0;
  for (int iy = 0; iy < spec.ny; ++iy) {
    for (int ix = 0; ix < spec.nx; ++ix) {
      const ComplexPoint p = spec.point(ix, iy);
      worst = std::max(worst, std::abs(eval_evolution_kernel_direct(bath, t, p) - eval_kernel(r, p)));
    }
  }
  return worst;
}

GaussianPhaseFunction propagate_gaussian(const GaussianPhaseFunction& initial, const BathParams& bath,
                                         const DriveSpec& drive, double t) {
  const GaussianPhaseFunction k = evolution_kernel(bath, t);
  if (t == 0.0) return initial;
  const double c0 = initial.scale;
  GaussianPhaseFunction out;
  out.ordering = initial.ordering + k.ordering * (c0 * c0);
  out.mean = initial.mean.value() + c0 * coeff_lambda1(drive, bath, t);
  out.scale = c0 * std::exp(bath.kappa * t);
  out.weight = initial.weight * std::exp(2.0 * bath.kappa * t);
  return out;
}

PhaseSpaceGrid propagate_grid(const PhaseSpaceGrid& w0, const BathParams& bath, const DriveSpec& drive, double t,
                              const GridSpec& out) {
  out.validate();
  const GaussianPhaseFunction k = evolution_kernel(bath, t);
  const cplx l1 = coeff_lambda1(drive, bath, t);
  const double stretch = std::exp(bath.kappa * t);

  // Zero-extend w0 by the kernel reach so C keeps the part that spills outward.
  int pad = 2;
  if (t > 0.0) {
    const double wide = kernel_widths(k.ordering)[1];
    pad = static_cast<int>(std::ceil(8.0 * wide / std::min(w0.spec.dx, w0.spec.dy))) + 4;
  }
  const PhaseSpaceGrid C = convolve_with_ordering(pad_grid(w0, pad), k.ordering, pad);

  PhaseSpaceGrid w(out);
  w.warnings = w0.warnings;
  const double gain = stretch * stretch;
  detail::parallel_for(out.ny, [&](int iy) {
    for (int ix = 0; ix < out.nx; ++ix) {
      const cplx src = stretch * out.point(ix, iy).value() - l1;
      w.at(ix, iy) = gain * interpolate_bicubic(C, src);
    }
  });
  return w;
}

ComplexPoint mean_trajectory(ComplexPoint alpha0, const BathParams& bath, const DriveSpec& drive, double t) {
  return std::exp(-bath.kappa * t) * (alpha0.value() + coeff_lambda1(drive, bath, t));
}

ComplexPoint to_lab_frame(ComplexPoint rotating, double Omega, double t) {
  return std::polar(1.0, -Omega * t) * rotating.value();
}

GaussianPhaseFunction to_lab_frame(const GaussianPhaseFunction& rotating, double Omega, double t) {
  // W_lab(a) = W_rot(e^{i Omega t} a)
  GaussianPhaseFunction f = rotating;
  const double theta = Omega * t;
  f.ordering = rotate_ordering(rotating.ordering, theta);
  f.mean = std::polar(1.0, -theta) * rotating.mean.value();
  return f;
}

}  // namespace sqw
