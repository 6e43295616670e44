#pragma once

#include <cstddef>

#include "jumplmi/function_classes.hpp"
#include "jumplmi/linalg.hpp"

namespace jumplmi {

// Finite sum of diagonal quadratics f_i(x) = 0.5 x^T D_i x + b_i^T x.
// For SDCA instances `regularizer` holds the external l2 weight m.
struct QuadraticFiniteSum {
  std::size_t n = 0;
  std::size_t p = 0;
  Vector D;  // n*p, component-major
  Vector b;  // n*p
  double m = 0.0;
  double L = 0.0;
  Assumption assumption = Assumption::StronglyConvex;
  double regularizer = 0.0;
  Vector xstar;

  // Gradient of f_component at x, written into out (length p). component is 0-based.
  void gradient(std::size_t component, const double* x, double* out) const;
  Vector gradient(std::size_t component, const Vector& x) const;

  Vector average_hessian() const;
  // Closed-form minimizer of (1/n) sum f_i + regularizer/2 |x|^2.
  Vector minimizer() const;
};

}  // namespace jumplmi
