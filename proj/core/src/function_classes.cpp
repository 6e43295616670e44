#include "jumplmi/function_classes.hpp"

#include <algorithm>
#include <cctype>

#include "jumplmi/error.hpp"

namespace jumplmi {

std::string to_string(MethodId m) {
  switch (m) {
    case MethodId::SAGA: return "saga";
    case MethodId::SAG: return "sag";
    case MethodId::Finito: return "finito";
    case MethodId::SDCA: return "sdca";
  }
  return "unknown";
}

std::string to_string(Assumption a) {
  switch (a) {
    case Assumption::StronglyConvex: return "sc";
    case Assumption::ConvexSmooth: return "cvx";
    case Assumption::SmoothOnly: return "smooth";
  }
  return "unknown";
}

namespace {
std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}
}  // namespace

MethodId parse_method(const std::string& s) {
  auto v = lower(s);
  if (v == "saga") return MethodId::SAGA;
  if (v == "sag") return MethodId::SAG;
  if (v == "finito") return MethodId::Finito;
  if (v == "sdca") return MethodId::SDCA;
  throw Error(ErrorCode::InvalidArgument, "unknown method '" + s + "'");
}

Assumption parse_assumption(const std::string& s) {
  auto v = lower(s);
  if (v == "sc" || v == "stronglyconvex" || v == "strongly-convex") return Assumption::StronglyConvex;
  if (v == "cvx" || v == "convexsmooth" || v == "convex-smooth") return Assumption::ConvexSmooth;
  if (v == "smooth" || v == "smoothonly" || v == "smooth-only") return Assumption::SmoothOnly;
  throw Error(ErrorCode::InvalidArgument, "unknown assumption '" + s + "'");
}

double gamma_of(Assumption a, double m, double L) {
  switch (a) {
    case Assumption::StronglyConvex:
      if (!(m > 0.0)) throw Error(ErrorCode::InvalidArgument, "strong convexity requires m > 0");
      return -m;
    case Assumption::ConvexSmooth: return 0.0;
    case Assumption::SmoothOnly: return L;
  }
  return 0.0;
}

AssumptionProfile AssumptionProfile::make(MethodId method, Assumption a, double m, double L) {
  if (!(L > 0.0)) throw Error(ErrorCode::InvalidArgument, "L must be positive");
  if (!(m > 0.0)) throw Error(ErrorCode::InvalidArgument, "m must be positive");
  AssumptionProfile p;
  p.m = m;
  p.L = L;
  if (method == MethodId::SDCA) {
    if (a == Assumption::StronglyConvex)
      throw Error(ErrorCode::InvalidArgument, "SDCA analysis covers convex-smooth or smooth-only f_i");
    p.nu = 0.0;
  } else {
    if (L < m) throw Error(ErrorCode::InvalidArgument, "L must satisfy L >= m");
    p.nu = -m;
  }
  p.gamma = gamma_of(a, m, L);
  return p;
}

double sector_quadratic(const Vector& dx, const Vector& dg, double c1, double c2) {
  if (dx.size() != dg.size()) throw Error(ErrorCode::DimensionMismatch, "sector_quadratic vectors differ in size");
  double xx = 0.0, xg = 0.0, gg = 0.0;
  for (std::size_t k = 0; k < dx.size(); ++k) {
    xx += dx[k] * dx[k];
    xg += dx[k] * dg[k];
    gg += dg[k] * dg[k];
  }
  return 2.0 * c1 * c2 * xx + 2.0 * (c1 - c2) * xg - 2.0 * gg;
}

}  // namespace jumplmi
