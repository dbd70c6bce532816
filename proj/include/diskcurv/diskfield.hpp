#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "diskcurv/numerics.hpp"

namespace diskcurv {

// Polar tensor sampling of the unit disk: Gauss-Legendre rings in r,
// uniform angles in theta. The origin and the boundary circle carry no
// nodes; values there come from dedicated evaluations.
struct DiskGrid {
  std::vector<double> radial_nodes;    // Gauss-Legendre nodes in (0,1), ascending
  std::vector<double> radial_weights;  // matching 1-D weights on (0,1)
  std::vector<double> radial_bary;     // barycentric weights of the radial nodes
  int angular_count = 0;
  std::vector<cplx> nodes;      // ring-major: node(ring, j) = nodes[ring*angular_count + j]
  std::vector<double> weights;  // area measure per node, sums to pi
  int boundary_ring_index = 0;
  Eigen::MatrixXd radial_diff;  // derivative of the radial interpolant at the nodes

  int n_radial() const { return static_cast<int>(radial_nodes.size()); }
  int node_count() const { return static_cast<int>(nodes.size()); }
  int index(int ring, int j) const { return ring * angular_count + j; }
  double theta(int j) const;
};

using GridPtr = std::shared_ptr<const DiskGrid>;

GridPtr build_grid(int n_radial, int n_angular);

struct ComplexField {
  GridPtr grid;
  std::vector<cplx> values;

  ComplexField() = default;
  explicit ComplexField(GridPtr g);
  cplx& at(int ring, int j) { return values[grid->index(ring, j)]; }
  const cplx& at(int ring, int j) const { return values[grid->index(ring, j)]; }
};

ComplexField sample(const GridPtr& grid, const std::function<cplx(cplx)>& f);

cplx integrate(const ComplexField& field);
double lp_norm(const ComplexField& field, double p);
double sup_norm(const ComplexField& field);

// One ring of values / its angular Fourier modes F_p = (1/n) sum_j v_j e^{-ip theta_j}.
// Mode index m in [0, n) maps to frequency p = m for m < n/2, else m - n.
std::vector<cplx> ring_values(const ComplexField& field, int ring);
std::vector<cplx> ring_modes(const ComplexField& field, int ring);
int mode_frequency(int m, int n);

struct PolarDerivs {
  ComplexField d_r;
  ComplexField d_theta;
};
PolarDerivs polar_derivatives(const ComplexField& field);

struct WirtingerDerivs {
  ComplexField d_z;
  ComplexField d_zbar;
};
WirtingerDerivs wirtinger_derivatives(const ComplexField& field);

// Scattered graph samples (u, v, height) with the metadata used by the
// finite-difference probes.
struct GraphPatch {
  std::vector<std::array<double, 2>> uv_points;
  std::vector<double> heights;
  double scale = 0.0;       // max distance of a sample from the centroid
  double fd_step = 0.0;     // central-difference step, 1e-3 * scale
  double fit_radius = 0.0;  // neighborhood radius of the local fits

  GraphPatch(std::vector<std::array<double, 2>> pts, std::vector<double> h);
};

// Height at (u, v) from a moving-least-squares cubic fit over nearby samples.
double patch_eval(const GraphPatch& patch, double u, double v);

struct HessianResult {
  double f_u = 0.0;
  double f_v = 0.0;
  double f_uu = 0.0;
  double f_uv = 0.0;
  double f_vv = 0.0;
  double step = 0.0;
};

// Central-difference first and second derivatives of the patch height at
// (u, v). A single local fit around (u, v) is frozen and evaluated at all
// stencil points so the differences see one smooth surrogate.
HessianResult finite_difference_hessian(const GraphPatch& patch, double u, double v);

}  // namespace diskcurv
