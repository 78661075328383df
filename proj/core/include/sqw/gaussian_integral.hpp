#pragma once

#include "sqw/kernel.hpp"
#include "sqw/types.hpp"

namespace sqw {

// int d^2z/pi exp(varsigma |z|^2 + xi z + eta z* + f z^2 + g z*^2)
struct GaussianIntegralParams {
  cplx varsigma{-1.0};
  cplx xi{0.0};
  cplx eta{0.0};
  cplx f{0.0};
  cplx g{0.0};

  RealQuadraticForm form() const;
  bool converges(double threshold = kDecayThreshold) const;
};

cplx gaussian_integral(const GaussianIntegralParams& p);

}  // namespace sqw
