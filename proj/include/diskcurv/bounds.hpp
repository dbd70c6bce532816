#pragma once
// Center-curvature bound chain for minimal graphs over the disk: a
// coefficient lower bound for harmonic self-maps, two envelope functions of
// x = |w|^2 whose minimum caps the scaled curvature functional, their
// crossing via a reciprocal quartic, and the resulting closed-form constant
// 2 pi^2 (2 + sqrt 31) / 27.  Every bound here constrains the curvature
// magnitude |K| at the point above the origin (the surface curvature itself
// is nonpositive).

#include <vector>

namespace diskcurv {

// Named constants of the bound chain, strictly ordered
//   heinz_c0 < new_hopf_bound < hall_bound < nitsche_bound.
struct ConstantsRegistry {
  double heinz_c0 = 0.0;        // pi^2/2: sharp bound for |K| itself
  double new_hopf_bound = 0.0;  // 2 pi^2 (2+sqrt 31)/27: improved W^2 |K| bound
  double hall_bound = 0.0;      // 16 pi^2/27: coefficient-inequality bound
  double nitsche_bound = 0.0;   // 7.678447: classical W^2 |K| estimate
  double hall_rhs = 0.0;        // 27/(4 pi^2): coefficient inequality right side
};

// Evaluates the registry and validates the strict ordering; throws
// std::logic_error if floating evaluation ever breaks it.
ConstantsRegistry constants_registry();

// Lower bound 27 / (4 pi^2 (1 + m^4)) for |f_z(0)|^2 of a harmonic
// diffeomorphism of the disk onto itself fixing the origin whose center
// dilatation has modulus m^2 (the coefficient inequality with a_0 = 0 and
// b_1 = w^2 a_1).  Accepts m in [0, 1]; the right endpoint is the
// continuous closure 27/(8 pi^2).
double hall_lower_bound_a1(double w_modulus);

// Envelope functions of x = |w|^2:
//   bound_f1(x) = (pi^2/2)    (1+x)^2 / (1-x)^2   increasing on [0, 1)
//   bound_f2(x) = (16 pi^2/27)(1+x^2) / (1+x)^2   decreasing on [0, 1]
// bound_f1 throws std::domain_error at x >= 1; both reject x < 0.
double bound_f1(double x);
double bound_f2(double x);

struct BoundCurvePoint {
  double x = 0.0;
  double f1 = 0.0;
  double f2 = 0.0;
  double min_val = 0.0;
};

// Pointwise evaluation of both envelopes along a sequence in [0, 1).
std::vector<BoundCurvePoint> bound_curve(const std::vector<double>& xs);

// min(bound_f1, bound_f2) at x in [0, 1).
double combined_pointwise_bound(double x);

struct QuarticIntersection {
  double x_star = 0.0;       // envelope crossing in (0, 1)
  double y_star = 0.0;       // x_star + 1/x_star = (86 + 16 sqrt 31)/5
  double rejected_x = 0.0;   // reciprocal partner root, outside (0, 1)
  double quartic_residual = 0.0;  // |5x^4 - 172x^3 - 98x^2 - 172x + 5| at x_star
};

// Crossing of the two envelopes in closed form: clearing denominators in
// bound_f1 = bound_f2 gives 5x^4 - 172x^3 - 98x^2 - 172x + 5 = 0, which is
// palindromic, so y = x + 1/x satisfies 5y^2 - 172y - 108 = 0.  The y >= 2
// root splits into the (0,1) crossing and its reciprocal partner; the
// residual is evaluated in extended precision.
QuarticIntersection intersection_quartic();

// The maximum of the combined envelope: 2 pi^2 (2 + sqrt 31)/27.  Asserts
// agreement with (pi^2/2)(y+2)/(y-2) at the crossing to 1e-12 and throws
// std::logic_error if the identity fails.
double closed_form_bound();

struct GridMaxResult {
  double x = 0.0;
  double value = 0.0;
};

// Dense-grid maximum of the combined envelope over [0, 1): a coarse pass
// followed by refinement around the argmax.  Numeric oracle for
// closed_form_bound; the kink at the crossing limits first-stage accuracy,
// hence the two stages.
GridMaxResult grid_max_combined_bound(int coarse = 20001, int fine = 20001);

}  // namespace diskcurv
