#pragma once

#include <string>

#include "jumplmi/linalg.hpp"

namespace jumplmi {

enum class MethodId { SAGA, SAG, Finito, SDCA };

// Assumption on the individual f_i.
enum class Assumption { StronglyConvex, ConvexSmooth, SmoothOnly };

std::string to_string(MethodId m);
std::string to_string(Assumption a);
MethodId parse_method(const std::string& s);
Assumption parse_assumption(const std::string& s);

// -m, 0 or L depending on the assumption on f_i.
double gamma_of(Assumption a, double m, double L);

struct AssumptionProfile {
  double m = 0.0;
  double L = 0.0;
  double nu = 0.0;
  double gamma = 0.0;

  static AssumptionProfile make(MethodId method, Assumption a, double m, double L);
};

// [dx; dg]^T [[2 c1 c2 I, (c1 - c2) I], [(c1 - c2) I, -2 I]] [dx; dg]
double sector_quadratic(const Vector& x_minus_xstar, const Vector& grad_diff, double c1, double c2);

}  // namespace jumplmi
