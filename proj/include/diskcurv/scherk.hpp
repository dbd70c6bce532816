#pragma once

// Harmonic maps with four-step boundary data: the boundary function takes a
// constant vertex value on each of four circular arcs, and the map is its
// Poisson extension into the disk.  The harmonic measure of an arc has a
// closed form built from arguments of boundary chords, so the map, its
// Wirtinger derivatives, and hence its second-kind dilatation
// omega = conj(f)_z / f_z are available exactly at any interior point; no
// grid enters until a sampled field is requested.
//
// When the four values are the vertices of a bicentric quadrilateral (cyclic
// and tangential), these maps carry the disk onto the quadrilateral and are
// the k -> 1 boundary objects of the Moebius-square dilatation family: the
// piecewise-constant boundary map has a degree-2 Blaschke-like dilatation,
// and matching it against the family's limit target recovers the extremal
// quadrilateral for a prescribed center normal.  The pair of curvature
// functionals (c0, c1) then follows from f_z(0) alone.

#include <array>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "diskcurv/diskfield.hpp"

namespace diskcurv {

struct BicentricQuad {
  std::array<cplx, 4> vertices;  // counterclockwise on the unit circle
};

// Sum of one pair of opposite sides minus the other:
//   |a0-a1| + |a2-a3| - |a1-a2| - |a3-a0|.
// Zero exactly when the quadrilateral admits an incircle.
double pitot_defect(const std::array<cplx, 4>& vertices);

// Validates: unit-modulus vertices (1e-12), Pitot equality (1e-8), and
// strictly increasing arguments over one period (convex ordering).
BicentricQuad make_bicentric_quad(const std::array<cplx, 4>& vertices);

// Kite inscribed in the unit circle: rotation * {1, e^{i gamma}, -1,
// e^{-i gamma}} with gamma in (0, pi).  Adjacent sides are pairwise equal,
// so the Pitot equality holds identically; gamma is the single shape angle
// and gamma = pi/2 gives the square.  |rotation| must be 1.
BicentricQuad kite_quad(double gamma, cplx rotation = cplx(1.0, 0.0));

// Isosceles trapezoid that is both cyclic and tangential: vertices
// rotation * {e^{i theta}, e^{i (pi-theta)}, -e^{i phi}, e^{-i phi}} with the
// parallel sides 2 cos(theta) and 2 cos(phi).  The Pitot equality reduces to
// cos((theta-phi)/2) = tan((theta+phi)/2), so the family has the single
// shape parameter sigma = (theta - phi)/2; sigma = 0 gives the square.  The
// feasible range is |sigma| < sigma_max ~= 0.6662 where phi reaches 0.
BicentricQuad bicentric_trapezoid(double sigma, cplx rotation = cplx(1.0, 0.0));

struct StepBoundary {
  std::array<double, 4> prevertices;  // t0 < t1 < t2 < t3 < t0 + 2*pi
  BicentricQuad values;               // vertex j taken on the arc (t_j, t_{j+1})
};

StepBoundary make_step_boundary(const std::array<double, 4>& prevertices,
                                const BicentricQuad& values);

// Harmonic measure at z of the boundary arc from e^{i alpha} to e^{i beta}
// (counterclockwise, 0 < beta - alpha < 2*pi), for |z| < 1.
double arc_harmonic_measure(double alpha, double beta, cplx z);

// f(z) = sum_j a_j * omega_j(z) with omega_j the harmonic measure of arc j.
cplx step_map_value(const StepBoundary& boundary, cplx z);

// f_z(0) = (i / 2 pi) * sum_j a_j (e^{-i t_{j+1}} - e^{-i t_j}).
cplx step_map_fz0(const StepBoundary& boundary);

struct StepDerivs {
  cplx f_z;       // holomorphic Wirtinger derivative
  cplx conj_f_z;  // (conj f)_z = conj(f_zbar)
};

// Both derivatives as rational jump sums over the prevertex poles.
StepDerivs step_map_derivs(const StepBoundary& boundary, cplx z);

// omega(z) = conj(f)_z / f_z; throws std::domain_error where f_z vanishes.
cplx step_map_dilatation(const StepBoundary& boundary, cplx z);

// Nine-point compact finite-difference Laplacian at z (step h).  For a
// harmonic function the leading h^2 error term is proportional to the
// biharmonic Delta^2 f = 0, so the residual decays like h^4.
double step_map_laplacian(const StepBoundary& boundary, cplx z, double h = 0.005);

// Poisson extension sampled on a grid / at arbitrary interior points.
ComplexField poisson_step_map(const StepBoundary& boundary, const GridPtr& grid);
std::vector<cplx> poisson_step_map(const StepBoundary& boundary,
                                   const std::vector<cplx>& eval_points);

struct DilatationField {
  ComplexField omega;
  std::vector<int> excluded;  // node indices where |f_z| was too small to divide
};

// omega = conj(f)_z / f_z from spectral differentiation of a sampled field.
// Nodes with |f_z| below 1e-10 * max |f_z| are excluded (omega set to zero
// there) and reported.
DilatationField dilatation_of(const ComplexField& f);

enum class ExtremalMethod { step_construction, k_extrapolation };

const char* extremal_method_name(ExtremalMethod m);

// Curvature functionals of an extremal map with derivative f_z0 at the
// origin and center normal parameter w:
//   c0 = 4 (1-|w|^2)^2 / ((1+|w|^2)^4 f_z0^2)   (graph curvature at the center)
//   c1 = 4 / ((1+|w|^2)^2 f_z0^2)               (curvature scaled by W^2)
// computed so that c0 * (1+|w|^2)^2 == c1 * (1-|w|^2)^2 holds to rounding.
std::pair<double, double> c0_c1(cplx w, double f_z0);

struct ExtremalReport {
  cplx w{0.0, 0.0};
  double f_z0 = 1.0;  // positive real after orientation normalization
  double c0 = 0.0;
  double c1 = 0.0;
  ExtremalMethod method = ExtremalMethod::step_construction;
  double error_estimate = 0.0;
};

// Checks the c0/c1 ratio identity (1e-12 relative) and c0 <= pi^2/2 +
// error_estimate; throws std::logic_error on violation.
void validate_extremal_report(const ExtremalReport& report);

struct MatchResult {
  StepBoundary boundary;  // matched quadrilateral, orientation included
  ExtremalReport report;
  double residual = 0.0;  // rms dilatation mismatch over the collocation rings
};

class MatchError : public std::runtime_error {
 public:
  MatchError(const std::string& what, MatchResult best);
  const MatchResult& best() const { return best_; }

 private:
  MatchResult best_;
};

// Finds the step boundary whose dilatation matches the k -> 1 limit of the
// Moebius-square family at parameter w: simplex search over four prevertex
// angles, the trapezoid shape angle, and the quadrilateral's orientation
// (which the target dilatation pins mod pi), with f(0) = 0 enforced by a
// linear prevertex-gap correction.  The report's f_z0 is the modulus of the
// matched derivative; the orientation itself is recorded in the returned
// boundary.  Throws MatchError (carrying the best candidate) if the residual
// stays above tol.
MatchResult match_quadrilateral(cplx w, double tol = 1e-8);

struct KSweepOptions {
  int n_radial = 64;
  int n_angular = 256;
  double solve_tol = 1e-10;
  int max_iter = 2000;  // crowding at high k slows the fixed point well below
                        // the damped contraction rate of the easy regime
};

class ExtrapolationError : public std::runtime_error {
 public:
  ExtrapolationError(const std::string& what,
                     std::vector<std::pair<double, double>> samples);
  // (k, |curvature at 0|) pairs that triggered the failure.
  const std::vector<std::pair<double, double>>& samples() const { return samples_; }

 private:
  std::vector<std::pair<double, double>> samples_;
};

struct KSample {
  double k = 0.0;
  double f_z0 = 0.0;           // center derivative of the solved map
  double curvature_mag = 0.0;  // |K| at the origin
};

// Solves the dilatation family at each k on the options' grid and evaluates
// the center derivative and curvature magnitude.  k_list must be strictly
// increasing within [0, 0.97].
std::vector<KSample> k_sweep_samples(cplx w, const std::vector<double>& k_list,
                                     const KSweepOptions& opts = {});

// Extrapolates the sampled curvature magnitudes to k = 1 by quadratic
// Richardson windows in (1 - k).  The error estimate combines successive
// extrapolant differences with the systematic error of the affine
// denormalization (see the implementation note).
ExtremalReport k_sweep_extrapolate(cplx w, const std::vector<KSample>& samples);

// Convenience pipeline: k_sweep_samples followed by the extrapolation.
ExtremalReport k_sweep_extrapolate(cplx w, const std::vector<double>& k_list,
                                   const KSweepOptions& opts = {});

struct SupSweepResult {
  double heinz_estimate = 0.0;  // max of c0 over the grid
  double hopf_estimate = 0.0;   // max of c1 over the grid
  std::vector<ExtremalReport> points;
  std::vector<cplx> skipped;  // w values whose match failed
};

// Per-point quadrilateral matches over a grid of normal parameters.  Points
// whose match fails are skipped and reported; throws std::runtime_error only
// if no point succeeds.
SupSweepResult sup_sweep(const std::vector<cplx>& w_grid, double tol = 1e-6);

}  // namespace diskcurv
