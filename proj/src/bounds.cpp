#include "diskcurv/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace diskcurv {

namespace {

constexpr double kPiSq = M_PI * M_PI;

long double quartic_at(long double x) {
  // 5x^4 - 172x^3 - 98x^2 - 172x + 5 by Horner.
  return (((5.0L * x - 172.0L) * x - 98.0L) * x - 172.0L) * x + 5.0L;
}

}  // namespace

ConstantsRegistry constants_registry() {
  ConstantsRegistry reg;
  reg.heinz_c0 = kPiSq / 2.0;
  reg.new_hopf_bound = closed_form_bound();
  reg.hall_bound = 16.0 * kPiSq / 27.0;
  reg.nitsche_bound = 7.678447;
  reg.hall_rhs = 27.0 / (4.0 * kPiSq);
  if (!(reg.heinz_c0 < reg.new_hopf_bound && reg.new_hopf_bound < reg.hall_bound &&
        reg.hall_bound < reg.nitsche_bound)) {
    throw std::logic_error("constants_registry: bound ordering violated");
  }
  return reg;
}

double hall_lower_bound_a1(double w_modulus) {
  if (!(w_modulus >= 0.0 && w_modulus <= 1.0)) {
    throw std::domain_error("hall_lower_bound_a1: modulus must lie in [0, 1]");
  }
  const double m2 = w_modulus * w_modulus;
  return 27.0 / (4.0 * kPiSq * (1.0 + m2 * m2));
}

double bound_f1(double x) {
  if (!(x >= 0.0 && x < 1.0)) {
    throw std::domain_error("bound_f1: x must lie in [0, 1)");
  }
  const double r = (1.0 + x) / (1.0 - x);
  return 0.5 * kPiSq * r * r;
}

double bound_f2(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("bound_f2: x must lie in [0, 1]");
  }
  return (16.0 * kPiSq / 27.0) * (1.0 + x * x) / ((1.0 + x) * (1.0 + x));
}

std::vector<BoundCurvePoint> bound_curve(const std::vector<double>& xs) {
  std::vector<BoundCurvePoint> out;
  out.reserve(xs.size());
  for (const double x : xs) {
    BoundCurvePoint p;
    p.x = x;
    p.f1 = bound_f1(x);
    p.f2 = bound_f2(x);
    p.min_val = std::min(p.f1, p.f2);
    out.push_back(p);
  }
  return out;
}

double combined_pointwise_bound(double x) {
  return std::min(bound_f1(x), bound_f2(x));
}

QuarticIntersection intersection_quartic() {
  QuarticIntersection out;
  // Keep the headline value bitwise equal to the plain double expression;
  // extended precision is only needed where the quartic cancels.
  out.y_star = (86.0 + 16.0 * std::sqrt(31.0)) / 5.0;
  const long double y = 86.0L / 5.0L + (16.0L / 5.0L) * std::sqrt(31.0L);
  const long double s = std::sqrt(y * y - 4.0L);
  out.x_star = static_cast<double>((y - s) / 2.0L);
  out.rejected_x = static_cast<double>((y + s) / 2.0L);
  out.quartic_residual =
      static_cast<double>(std::fabs(quartic_at(static_cast<long double>(out.x_star))));
  return out;
}

double closed_form_bound() {
  const double bound = 2.0 * kPiSq * (2.0 + std::sqrt(31.0)) / 27.0;
  const QuarticIntersection cross = intersection_quartic();
  const double via_y = 0.5 * kPiSq * (cross.y_star + 2.0) / (cross.y_star - 2.0);
  if (std::abs(bound - via_y) > 1e-12 * bound) {
    throw std::logic_error("closed_form_bound: envelope maximum identity violated");
  }
  return bound;
}

GridMaxResult grid_max_combined_bound(int coarse, int fine) {
  if (coarse < 3 || fine < 3) {
    throw std::invalid_argument("grid_max_combined_bound: need at least 3 grid points");
  }
  const auto scan = [](double lo, double hi, int n) {
    GridMaxResult best{lo, -1.0};
    for (int i = 0; i < n; ++i) {
      const double x = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
      const double v = combined_pointwise_bound(x);
      if (v > best.value) best = {x, v};
    }
    return best;
  };
  const double hi = 0.999;
  const GridMaxResult first = scan(0.0, hi, coarse);
  const double h = hi / (coarse - 1);
  return scan(std::max(0.0, first.x - 2.0 * h), std::min(hi, first.x + 2.0 * h), fine);
}

}  // namespace diskcurv
