#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <stdexcept>

#include "diskcurv/diskfield.hpp"
#include "diskcurv/numerics.hpp"
#include "diskcurv/scherk.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace diskcurv;
using testutil::cdist;

namespace {

constexpr double kHalfPiSq = M_PI * M_PI / 2.0;

// Square with prevertices on the axes; its center derivative is the positive
// real 2*sqrt(2)/pi and its dilatation is exactly -z^2.
StepBoundary axis_square() {
  std::array<double, 4> t = {0.0, M_PI / 2.0, M_PI, 3.0 * M_PI / 2.0};
  std::array<cplx, 4> v;
  for (int j = 0; j < 4; ++j) v[j] = std::polar(1.0, M_PI / 4.0 + j * M_PI / 2.0);
  return make_step_boundary(t, make_bicentric_quad(v));
}

// Same square with prevertices on the diagonals; f(0) = 0 still, but the
// center derivative picks up a phase: (2/pi)(1 - i).
StepBoundary diagonal_square() {
  std::array<double, 4> t;
  std::array<cplx, 4> v;
  for (int j = 0; j < 4; ++j) {
    t[j] = M_PI / 4.0 + j * M_PI / 2.0;
    v[j] = std::polar(1.0, M_PI / 4.0 + j * M_PI / 2.0);
  }
  return make_step_boundary(t, make_bicentric_quad(v));
}

// Signed clearance of p from the quad: minimum over edges of the ccw cross
// product, nonnegative exactly on the closed quadrilateral.
double hull_clearance(const std::array<cplx, 4>& q, cplx p) {
  double m = std::numeric_limits<double>::infinity();
  for (int j = 0; j < 4; ++j) {
    const cplx e = q[(j + 1) % 4] - q[j];
    const cplx r = p - q[j];
    m = std::min(m, e.real() * r.imag() - e.imag() * r.real());
  }
  return m;
}

std::vector<cplx> scattered_points(int n, unsigned seed, double rmax) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<cplx> pts;
  for (int i = 0; i < n; ++i) {
    pts.push_back(std::polar(rmax * std::sqrt(unif(rng)), 2.0 * M_PI * unif(rng)));
  }
  return pts;
}

double f1_bound(double x) { return kHalfPiSq * (1.0 + x) * (1.0 + x) / ((1.0 - x) * (1.0 - x)); }
double f2_bound(double x) {
  return (16.0 * M_PI * M_PI / 27.0) * (1.0 + x * x) / ((1.0 + x) * (1.0 + x));
}

}  // namespace

TEST_CASE("bicentric quad validation") {
  const BicentricQuad sq = make_bicentric_quad(
      {std::polar(1.0, 0.3), std::polar(1.0, 0.3 + M_PI / 2.0), std::polar(1.0, 0.3 + M_PI),
       std::polar(1.0, 0.3 + 3.0 * M_PI / 2.0)});
  CHECK(pitot_defect(sq.vertices) <= 1e-12);

  // A non-square rectangle is cyclic but has no incircle.
  const double phi = M_PI / 6.0;
  const std::array<cplx, 4> rect = {std::polar(1.0, phi), std::polar(1.0, M_PI - phi),
                                    std::polar(1.0, M_PI + phi), std::polar(1.0, -phi)};
  CHECK(pitot_defect(rect) > 1.46);
  CHECK_THROWS_AS(make_bicentric_quad(rect), std::invalid_argument);

  // Off-circle and misordered vertices are rejected.
  CHECK_THROWS_AS(make_bicentric_quad({cplx(0.9, 0.0), cplx(0.0, 1.0), cplx(-1.0, 0.0),
                                       cplx(0.0, -1.0)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_bicentric_quad({cplx(1.0, 0.0), cplx(-1.0, 0.0), cplx(0.0, 1.0),
                                       cplx(0.0, -1.0)}),
                  std::invalid_argument);

  // One-parameter tangential families through the square.
  for (const double s : {-0.5, -0.2, 0.1, 0.4, 0.65}) {
    const BicentricQuad trap = bicentric_trapezoid(s, std::polar(1.0, 0.7));
    CHECK(pitot_defect(trap.vertices) <= 1e-12);
    const BicentricQuad kite = kite_quad(0.2 + 0.3 * s);
    CHECK(pitot_defect(kite.vertices) <= 1e-12);
  }
  CHECK(cdist(bicentric_trapezoid(0.0).vertices[0], std::polar(1.0, M_PI / 4.0)) <= 1e-14);

  CHECK_THROWS_AS(make_step_boundary({0.0, 2.0, 1.0, 3.0}, sq), std::invalid_argument);
  CHECK_THROWS_AS(make_step_boundary({0.0, 1.0, 2.0, 7.0}, sq), std::invalid_argument);
}

TEST_CASE("harmonic measure closed form") {
  // Oracle: 128-node Gauss-Legendre quadrature of the Poisson kernel over the
  // arc, fully converged for these evaluation points.
  std::vector<double> gx, gw;
  gauss_legendre(128, gx, gw);
  const double alpha = 0.3, beta = 2.1;
  for (const cplx z : {cplx(0.0, 0.0), cplx(0.37, -0.22), cplx(-0.61, 0.44), cplx(0.9, 0.0),
                       cplx(-0.05, -0.88)}) {
    double quad = 0.0;
    for (int i = 0; i < 128; ++i) {
      const double t = 0.5 * (alpha + beta) + 0.5 * (beta - alpha) * gx[i];
      const cplx u = std::polar(1.0, t);
      quad += gw[i] * 0.5 * (beta - alpha) * (1.0 - std::norm(z)) / std::norm(u - z) /
              (2.0 * M_PI);
    }
    const double cf = arc_harmonic_measure(alpha, beta, z);
    CHECK(std::abs(cf - quad) <= 1e-12);
    CHECK(cf > 0.0);
    CHECK(cf < 1.0);
  }

  // The four arc measures of any partition sum to one.
  const std::array<double, 4> t = {0.1, 1.3, 2.9, 4.4};
  for (const cplx z : scattered_points(20, 11u, 0.97)) {
    double total = 0.0;
    for (int j = 0; j < 4; ++j) {
      total += arc_harmonic_measure(t[j], j + 1 < 4 ? t[j + 1] : t[0] + 2.0 * M_PI, z);
    }
    CHECK(std::abs(total - 1.0) <= 1e-13);
  }
}

TEST_CASE("square step map closed forms") {
  const StepBoundary axis = axis_square();
  CHECK(cdist(step_map_value(axis, cplx(0.0, 0.0)), cplx(0.0, 0.0)) <= 1e-15);
  const double fz0_exact = 2.0 * std::sqrt(2.0) / M_PI;
  CHECK(cdist(step_map_fz0(axis), cplx(fz0_exact, 0.0)) <= 1e-14);
  const StepDerivs d0 = step_map_derivs(axis, cplx(0.0, 0.0));
  CHECK(cdist(d0.f_z, step_map_fz0(axis)) <= 1e-14);
  CHECK(std::abs(d0.conj_f_z) <= 1e-14);

  // Dilatation of the axis square is -z^2 on the nose.
  for (const cplx z : scattered_points(40, 5u, 0.9)) {
    CHECK(cdist(step_map_dilatation(axis, z), -z * z) <= 1e-13);
  }

  const StepBoundary diag = diagonal_square();
  CHECK(cdist(step_map_value(diag, cplx(0.0, 0.0)), cplx(0.0, 0.0)) <= 1e-15);
  CHECK(cdist(step_map_fz0(diag), (2.0 / M_PI) * cplx(1.0, -1.0)) <= 1e-14);
  CHECK(std::abs(std::abs(step_map_fz0(diag)) - fz0_exact) <= 1e-14);
}

TEST_CASE("step maps are harmonic and quad-valued") {
  const StepBoundary trap =
      make_step_boundary({-0.2, 1.1, 2.9, 4.3}, bicentric_trapezoid(0.35, std::polar(1.0, 0.4)));
  const std::vector<cplx> probes = {cplx(0.0, 0.0),   cplx(0.3, 0.2),  cplx(-0.5, 0.1),
                                    cplx(0.1, -0.62), cplx(0.85, 0.0), cplx(0.0, 0.85)};
  for (const cplx z : probes) {
    CHECK(step_map_laplacian(trap, z) <= 1e-6);
    CHECK(step_map_laplacian(axis_square(), z) <= 1e-6);
  }
  for (const cplx z : scattered_points(200, 3u, 0.995)) {
    CHECK(hull_clearance(trap.values.vertices, step_map_value(trap, z)) >= -1e-12);
  }
  CHECK_THROWS_AS(step_map_value(trap, cplx(1.0, 0.0)), std::domain_error);

  // Grid sampling agrees with pointwise evaluation.
  const GridPtr grid = build_grid(12, 48);
  const ComplexField f = poisson_step_map(trap, grid);
  for (int ring = 0; ring < grid->n_radial(); ring += 5) {
    for (int j = 0; j < grid->angular_count; j += 7) {
      CHECK(cdist(f.at(ring, j), step_map_value(trap, grid->nodes[grid->index(ring, j)])) <=
            1e-14);
    }
  }
  const std::vector<cplx> pts = scattered_points(8, 1u, 0.9);
  const std::vector<cplx> vals = poisson_step_map(trap, pts);
  for (size_t i = 0; i < pts.size(); ++i) {
    CHECK(cdist(vals[i], step_map_value(trap, pts[i])) <= 1e-15);
  }
}

TEST_CASE("sampled dilatation fields") {
  const GridPtr grid = build_grid(32, 128);

  // Identity map: zero dilatation everywhere, nothing excluded.
  const DilatationField id = dilatation_of(sample(grid, [](cplx z) { return z; }));
  CHECK(id.excluded.empty());
  CHECK(sup_norm(id.omega) <= 1e-12);

  // Square step map: omega = -z^2 to sampling accuracy on interior rings
  // (measured 9.8e-5 on this grid), modulus near one on the outermost ring.
  const DilatationField sq = dilatation_of(poisson_step_map(axis_square(), grid));
  CHECK(sq.excluded.empty());
  double worst = 0.0;
  for (int ring = 0; ring < grid->n_radial(); ++ring) {
    for (int j = 0; j < grid->angular_count; ++j) {
      const cplx z = grid->nodes[grid->index(ring, j)];
      if (std::abs(z) > 0.65) continue;
      worst = std::max(worst, cdist(sq.omega.at(ring, j), -z * z));
    }
  }
  CHECK(worst <= 1e-3);
  const int rim = grid->n_radial() - 1;
  for (int j = 0; j < grid->angular_count; ++j) {
    CHECK(std::abs(std::abs(sq.omega.at(rim, j)) - 1.0) <= 0.15);
  }

  // An analytic map with a critical point at a grid node: the node is
  // excluded and reported, the rest of the field stays near zero.
  const double r0 = grid->radial_nodes[20];
  const DilatationField crit =
      dilatation_of(sample(grid, [r0](cplx z) { return (z - r0) * (z - r0); }));
  REQUIRE(crit.excluded.size() == 1);
  CHECK(crit.excluded[0] == grid->index(20, 0));
  CHECK(sup_norm(crit.omega) <= 1e-8);
}

TEST_CASE("curvature functionals from the center derivative") {
  const auto [c0_sq, c1_sq] = c0_c1(cplx(0.0, 0.0), 2.0 * std::sqrt(2.0) / M_PI);
  CHECK(std::abs(c0_sq - kHalfPiSq) <= 1e-12);
  CHECK(std::abs(c1_sq - kHalfPiSq) <= 1e-12);

  const auto [c0_unit, c1_unit] = c0_c1(cplx(0.0, 0.0), 1.0);
  CHECK(c0_unit == 4.0);
  CHECK(c1_unit == 4.0);

  // Ratio identity c0 (1+|w|^2)^2 = c1 (1-|w|^2)^2 across the disk.
  std::mt19937 rng(7u);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const cplx w = std::polar(0.95 * unif(rng), 2.0 * M_PI * unif(rng));
    const double fz0 = 0.2 + 2.0 * unif(rng);
    const auto [c0, c1] = c0_c1(w, fz0);
    const double x = std::norm(w);
    const double lhs = c0 * (1.0 + x) * (1.0 + x);
    const double rhs = c1 * (1.0 - x) * (1.0 - x);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs));
    CHECK(c0 <= c1);
  }
  CHECK_THROWS_AS(c0_c1(cplx(0.1, 0.0), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(c0_c1(cplx(0.1, 0.0), -1.0), std::invalid_argument);
}

TEST_CASE("extremal report validation") {
  ExtremalReport good;
  good.w = cplx(0.3, 0.0);
  good.f_z0 = 0.883390700201;
  const auto [c0, c1] = c0_c1(good.w, good.f_z0);
  good.c0 = c0;
  good.c1 = c1;
  good.error_estimate = 1e-10;
  validate_extremal_report(good);

  ExtremalReport bad = good;
  bad.f_z0 = -1.0;
  CHECK_THROWS_AS(validate_extremal_report(bad), std::logic_error);
  bad = good;
  bad.c1 = good.c1 * 1.0001;
  CHECK_THROWS_AS(validate_extremal_report(bad), std::logic_error);
  bad = good;
  bad.f_z0 = 0.5;  // pushes c0 past the square value with no error allowance
  const auto [bc0, bc1] = c0_c1(bad.w, bad.f_z0);
  bad.c0 = bc0;
  bad.c1 = bc1;
  CHECK_THROWS_AS(validate_extremal_report(bad), std::logic_error);
}

TEST_CASE("quadrilateral match at the symmetric point") {
  const MatchResult res = match_quadrilateral(cplx(0.0, 0.0), 1e-8);
  CHECK(res.residual <= 1e-10);
  CHECK(std::abs(res.report.c0 - kHalfPiSq) <= 0.005 * kHalfPiSq);
  CHECK(std::abs(res.report.c0 - kHalfPiSq) <= 1e-9);
  CHECK(res.report.c1 == res.report.c0);
  CHECK(std::abs(res.report.f_z0 - 2.0 * std::sqrt(2.0) / M_PI) <= 1e-10);
  CHECK(res.report.error_estimate >= std::abs(res.report.c0 - kHalfPiSq));
  CHECK(res.report.method == ExtremalMethod::step_construction);

  // Symmetry forces the square: all sides equal.
  const auto& q = res.boundary.values.vertices;
  const double side = std::abs(q[1] - q[0]);
  for (int j = 1; j < 4; ++j) {
    CHECK(std::abs(std::abs(q[(j + 1) % 4] - q[j]) - side) <= 1e-9);
  }
  CHECK(std::abs(step_map_value(res.boundary, cplx(0.0, 0.0))) <= 1e-8);
}

TEST_CASE("quadrilateral match off the symmetric point") {
  const MatchResult res = match_quadrilateral(cplx(0.3, 0.0), 1e-8);
  CHECK(res.residual <= 1e-12);
  CHECK(res.report.c0 < kHalfPiSq);
  CHECK(std::abs(res.report.c0 - 3.006984145685) <= 1e-6);
  CHECK(std::abs(res.report.f_z0 - 0.883390700201) <= 1e-7);
  CHECK(std::abs(step_map_value(res.boundary, cplx(0.0, 0.0))) <= 1e-8);
  const double x = 0.09;
  CHECK(res.report.c1 <= std::min(f1_bound(x), f2_bound(x)));

  // The matched boundary's own dilatation is the certificate: recompute the
  // mismatch at off-collocation points against the map the report claims.
  validate_extremal_report(res.report);
}

TEST_CASE("match failure carries the best candidate") {
  bool threw = false;
  try {
    match_quadrilateral(cplx(0.3, 0.0), 1e-18);
  } catch (const MatchError& e) {
    threw = true;
    CHECK(e.best().residual > 1e-18);
    CHECK(e.best().residual <= 1e-12);
    CHECK(std::abs(e.best().report.c0 - 3.006984145685) <= 1e-6);
  }
  CHECK(threw);
  CHECK_THROWS_AS(match_quadrilateral(cplx(1.0, 0.0), 1e-8), std::invalid_argument);
  CHECK_THROWS_AS(match_quadrilateral(cplx(0.3, 0.0), 0.0), std::invalid_argument);
}

TEST_CASE("match orientation tracks the parameter phase") {
  // Rotating w rotates the quadrilateral and the z-plane but leaves the
  // derivative modulus and both functionals unchanged; the orientation is
  // recorded in the returned boundary.
  const MatchResult real_w = match_quadrilateral(cplx(0.3, 0.0), 1e-8);
  const MatchResult turned = match_quadrilateral(std::polar(0.3, 0.9), 1e-8);
  CHECK(turned.residual <= 1e-12);
  CHECK(std::abs(turned.report.f_z0 - real_w.report.f_z0) <= 1e-10);
  CHECK(std::abs(turned.report.c0 - real_w.report.c0) <= 1e-9);
  CHECK(std::abs(turned.report.c1 - real_w.report.c1) <= 1e-9);
  CHECK(cdist(turned.boundary.values.vertices[0], real_w.boundary.values.vertices[0]) > 0.1);
}

TEST_CASE("k sweep reaches the square limit") {
  const ExtremalReport rep =
      k_sweep_extrapolate(cplx(0.0, 0.0), {0.5, 0.7, 0.8, 0.9, 0.95});
  CHECK(std::abs(rep.c0 - kHalfPiSq) <= 0.02 * kHalfPiSq);
  CHECK(rep.error_estimate >= std::abs(rep.c0 - kHalfPiSq));
  CHECK(rep.method == ExtremalMethod::k_extrapolation);
  CHECK(rep.c1 == rep.c0);
  validate_extremal_report(rep);
}

TEST_CASE("k sweep agrees with the match off the origin") {
  const ExtremalReport sweep =
      k_sweep_extrapolate(cplx(0.3, 0.0), {0.5, 0.6, 0.7, 0.8, 0.85, 0.9});
  const MatchResult match = match_quadrilateral(cplx(0.3, 0.0), 1e-8);
  const double gap = std::abs(sweep.c0 - match.report.c0);
  CHECK(gap <= sweep.error_estimate + match.report.error_estimate);
  CHECK(std::abs(sweep.c0 - 2.918829115) <= 1e-3);
  validate_extremal_report(sweep);
}

TEST_CASE("k sweep input validation and degenerate sweeps") {
  CHECK_THROWS_AS(k_sweep_extrapolate(cplx(0.0, 0.0), {}), std::invalid_argument);
  CHECK_THROWS_AS(k_sweep_extrapolate(cplx(0.0, 0.0), {0.5, 0.4}), std::invalid_argument);
  CHECK_THROWS_AS(k_sweep_extrapolate(cplx(0.0, 0.0), {0.98}), std::invalid_argument);
  CHECK_THROWS_AS(k_sweep_extrapolate(cplx(0.0, 0.0), {-0.1, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(k_sweep_extrapolate(cplx(1.0, 0.0), {0.5}), std::invalid_argument);

  // A single vanishing-dilatation solve pins the flat map: zero curvature
  // with no extrapolation information at all.
  KSweepOptions small;
  small.n_radial = 16;
  small.n_angular = 64;
  const ExtremalReport flat = k_sweep_extrapolate(cplx(0.0, 0.0), {0.0}, small);
  CHECK(flat.c0 == 0.0);
  CHECK(std::isinf(flat.error_estimate));
}

TEST_CASE("sup sweep over the radius grid") {
  std::vector<cplx> grid;
  for (int i = 0; i <= 9; ++i) grid.emplace_back(0.1 * i, 0.0);
  const SupSweepResult res = sup_sweep(grid, 1e-6);
  REQUIRE(res.skipped.empty());
  REQUIRE(res.points.size() == grid.size());

  CHECK(res.heinz_estimate <= kHalfPiSq * 1.01);
  CHECK(res.hopf_estimate <= 5.5327 * 1.01);
  CHECK(res.hopf_estimate >= kHalfPiSq * 0.99);
  CHECK(std::abs(res.heinz_estimate - kHalfPiSq) <= 1e-9);

  // Both functionals peak at the symmetric point and decay along the radius.
  for (size_t i = 0; i + 1 < res.points.size(); ++i) {
    CHECK(res.points[i].c0 > res.points[i + 1].c0);
    CHECK(res.points[i].c1 > res.points[i + 1].c1);
  }
  for (const ExtremalReport& p : res.points) {
    const double x = std::norm(p.w);
    CHECK(p.c1 <= std::min(f1_bound(x), f2_bound(x)) * (1.0 + 1e-9));
    CHECK(p.c0 <= kHalfPiSq * (1.0 + 1e-9));
  }
}
