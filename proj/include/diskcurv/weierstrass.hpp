#pragma once

// Enneper-Weierstrass data of the minimal graphs attached to a solved disk
// self-map.  With f = h + conj(g) harmonic and sense-preserving, the pair
// p = f_z and q = sqrt(g'/h') parameterizes the graph conformally as
//
//   w(z) = ( Re f(z), Im f(z), Im Int_0^z 2 p q dzeta ),
//
// its Gauss map is the stereographic image of q, and the curvature is
//
//   K(z) = -4 |q'(z)|^2 / ( |p(z)|^2 (1 + |q(z)|^2)^4 ).
//
// The dilatation family treated throughout is the squared Moebius map
//
//   mu_k(z) = ((w + k tau z) / (1 + k tau conj(w) z))^2,
//   tau     = i (1 - w^4) / |1 - w^4|,
//
// for which q is the quotient itself -- taking the displayed Moebius form
// instead of a square root of mu_k avoids any branch ambiguity.

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "diskcurv/beltrami.hpp"
#include "diskcurv/diskfield.hpp"

namespace diskcurv {

struct FamilyParameter {
  cplx w{0.0, 0.0};  // stereographic parameter of the normal at the origin, |w| < 1
  double k = 0.0;    // dilatation strength in [0, 1)
};

FamilyParameter make_family_parameter(cplx w, double k);

// tau = i (1 - w^4) / |1 - w^4|; unit modulus for every |w| < 1.
cplx family_phase(const FamilyParameter& par);

cplx mu_k(cplx z, const FamilyParameter& par);

// sup_{|z|<=1} |mu_k| <= ((|w| + k) / (1 + |w| k))^2 < 1.
double mu_k_sup_bound(const FamilyParameter& par);

// q(z) = (w + k tau z) / (1 + k tau conj(w) z); q(0) = w and q^2 = mu_k.
cplx gauss_map_q(cplx z, const FamilyParameter& par);
// q'(z) = k tau (1 - |w|^2) / (1 + k tau conj(w) z)^2, so |q'(0)|^2 = k^2 (1-|w|^2)^2.
cplx gauss_map_q_prime(cplx z, const FamilyParameter& par);

// mu_k wrapped for the fixed-point solver, provenance tags filled in.
BeltramiCoefficient family_coefficient(const FamilyParameter& par);

// Angular-mode radial profiles of a sampled field: tab[m * n_radial + i] is
// mode m on ring i.  Off-node evaluation interpolates every profile with the
// grid's barycentric weights and resums the modes; z = 0 returns the stored
// limit (the mode sum degenerates there).
struct RingModeTable {
  GridPtr grid;
  std::vector<cplx> tab;
  cplx at_zero{0.0, 0.0};

  std::vector<cplx> profiles_at(double r) const;
  cplx eval(cplx z) const;
};

RingModeTable build_mode_table(const ComplexField& field, cplx at_zero);

struct WeierstrassData {
  std::function<cplx(cplx)> p;        // f_z of the source map
  std::function<cplx(cplx)> q;        // Gauss map; q^2 equals the dilatation of f
  std::function<cplx(cplx)> q_prime;  // closed form for the family, differences otherwise
  std::shared_ptr<const SolvedMap> source_map;
  // Interpolation tables for f and f_z; present when built from a solved map.
  std::shared_ptr<const RingModeTable> f_modes;
  std::shared_ptr<const RingModeTable> p_modes;
  bool has_family = false;
  FamilyParameter family;
};

// Couples a solved map with the family's Gauss map (or a caller-supplied q;
// its derivative is then taken by central differences).  Checks q^2 against
// the map's dilatation at every grid node, tolerance 1e-6 -- this rejects
// mismatched pairs, in particular a still-normalized map whose shifted
// dilatation no longer squares to q.
WeierstrassData make_weierstrass_data(std::shared_ptr<const SolvedMap> map,
                                      const FamilyParameter& par);
WeierstrassData make_weierstrass_data(std::shared_ptr<const SolvedMap> map,
                                      std::function<cplx(cplx)> q);

struct SurfaceSample {
  cplx z;                            // disk parameter
  std::array<double, 3> position{};  // (Re f, Im f, height)
  std::array<double, 3> normal{};    // unit, upper hemisphere for |q| <= 1
  double gauss_curvature = 0.0;      // nonpositive
};

// K(z) from the data's (p, q, q').  Throws std::domain_error where p vanishes:
// such a point is a branch point of the graph and a pole of the curvature.
double curvature(cplx z, const WeierstrassData& data);

// K at the origin for the family in closed form,
//   K_k(0) = -4 k^2 (1 - |w|^2)^2 / ( f_z0^2 (1 + |w|^2)^4 ),
// the same arithmetic curvature() performs at z = 0, kept as a separate entry
// point so the two code paths can be compared.
double curvature_at_origin_family(const FamilyParameter& par, double f_z0);

// n = -(2 Im q, 2 Re q, -1 + |q|^2) / (1 + |q|^2); exactly unit length, and the
// third component is (1 - |q|^2)/(1 + |q|^2) >= 0 on |q| <= 1.
std::array<double, 3> unit_normal_from_q(cplx q);
std::array<double, 3> unit_normal(cplx z, const WeierstrassData& data);

// Int_{z0}^{z1} 2 p q dzeta along the straight segment, 16-node Gauss rule.
cplx height_integral_segment(const WeierstrassData& data, cplx z0, cplx z1);

// |closed-loop integral of 2 p q| around the triangle (a, b, c).  The
// integrand is analytic, so this measures how far the sampled p is from one.
double triangle_loop_defect(const WeierstrassData& data, cplx a, cplx b, cplx c);

// Samples the surface at the grid's nodes plus the center, center first, so
// the output holds n_radial * n_angular + 1 samples.  Heights are accumulated
// along radial rays with a per-segment Gauss rule; before integrating, path
// independence is verified on a fixed set of interior triangles (tolerance
// 1e-4) and violation throws std::runtime_error.  Requires data built from a
// solved map.
std::vector<SurfaceSample> parameterize_surface(const WeierstrassData& data,
                                                const GridPtr& grid);

// Drops the parameterization: keeps (x1, x2) -> x3 as a scattered graph patch
// for the finite-difference probes.  Two samples landing on nearly the same
// planar point with different heights mean the projection folds over, and
// that throws std::domain_error.
GraphPatch reconstruct_graph(const std::vector<SurfaceSample>& samples);

}  // namespace diskcurv
