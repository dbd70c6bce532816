#pragma once

// Fixed-point solver for harmonic self-maps of the unit disk with prescribed
// analytic dilatation.  A map f with conj(f)_z = omega * f_z and f(0) = 0 is
// represented as f(z) = z * exp((P phi)(z)) where phi solves phi = T(phi),
//
//   T(phi)(z) = (conj(omega(z)) / z) * M(z) * bracket(z),
//   M(z)      = exp(-2i Im (P phi)(z))   (unit modulus by construction).
//
// Two bracket variants are carried: the printed form 1 + conj(z) * (H phi)(z)
// and the conjugated form 1 + conj(z * (H phi)(z)).  Differentiating
// f = z exp(P phi) and imposing the Beltrami equation yields the conjugated
// form; the selection is settled at run time by the measured residual.

#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "diskcurv/diskfield.hpp"
#include "diskcurv/transforms.hpp"

namespace diskcurv {

struct BeltramiCoefficient {
  std::function<cplx(cplx)> evaluator;
  double sup_bound = 0.0;
  cplx value_at_0{0.0, 0.0};
  // Optional provenance when omega comes from the Moebius-square family.
  bool has_family_tag = false;
  cplx family_w{0.0, 0.0};
  double family_k = 0.0;
};

BeltramiCoefficient make_beltrami(std::function<cplx(cplx)> evaluator, double sup_bound);

enum class TVariant { as_printed, conjugated, automatic };

const char* variant_name(TVariant v);
TVariant parse_variant(const std::string& name);

struct SolvedMap {
  ComplexField phi;
  ComplexField f_values;
  double f_z_at_0 = 1.0;
  BeltramiCoefficient dilatation;
  double residual_norm = 0.0;       // max equation error over rings with r <= 0.95
  double residual_norm_full = 0.0;  // same, over every ring except the outermost
  int iterations = 0;
  TVariant variant_flag = TVariant::conjugated;
  double rejected_variant_residual = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> step_history;
  bool tail_monotone = true;
};

struct MapCoefficients {
  cplx a0{0.0, 0.0};
  cplx a1{1.0, 0.0};
  cplx b1{0.0, 0.0};
};

struct SolveOptions {
  double tol = 1e-10;
  int max_iter = 400;
  double damping = 0.0;  // <= 0 selects 1.0 for sup_bound <= 0.7, else 0.5
  TVariant variant = TVariant::automatic;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::vector<double> history);
  const std::vector<double>& history() const { return history_; }

 private:
  std::vector<double> history_;
};

// One application of the fixed-point operator (omega must satisfy omega(0) = 0).
ComplexField apply_T(const OperatorBackend& backend, const BeltramiCoefficient& omega,
                     const ComplexField& phi, TVariant variant = TVariant::conjugated);

SolvedMap solve_fixed_point(const OperatorBackend& backend, const BeltramiCoefficient& omega,
                            const SolveOptions& opts = {});

// Moebius shift moving omega(0) to 0; returns the shifted coefficient and omega(0).
std::pair<BeltramiCoefficient, cplx> normalize_dilatation(const BeltramiCoefficient& omega);

// Inverse of the normalization on the map level:
//   f = (f_tilde + conj(omega0) * conj(f_tilde)) / (1 - |omega0|^2),
// which transports solutions for the shifted coefficient back to the original
// one and rescales f_z(0) by 1/(1 - |omega0|^2).
SolvedMap denormalize_map(const SolvedMap& f_tilde, cplx omega0);

MapCoefficients extract_coefficients(const SolvedMap& map);

// Max of |conj(f)_z - omega f_z| over collocation rings with r <= max_radius.
// The default 0.95 matches harmonicity_residual: near the rim the angular
// spectrum of a crowded map outruns the radial polynomial degree, so the
// global differentiation that evaluates f_z is no longer trustworthy there
// and the check would measure interpolation error rather than the equation.
double beltrami_residual(const ComplexField& f, const BeltramiCoefficient& omega,
                         double max_radius = 0.95);

// Per-ring max of |conj(f)_z - omega f_z|, indexed by ring (all rings).
std::vector<double> beltrami_residual_profile(const ComplexField& f,
                                              const BeltramiCoefficient& omega);

// The unit-modulus multiplier M sampled on the grid (exposed for property tests).
ComplexField unit_phase_factor(const OperatorBackend& backend, const ComplexField& phi);

// Diagnostic: max |Laplacian f| over rings with 0.1 <= r <= 0.95.  The polar
// Laplacian of a harmonic map vanishes up to discretization noise; the value is
// reported, not asserted.
double harmonicity_residual(const ComplexField& f);

}  // namespace diskcurv
