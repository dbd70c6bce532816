#pragma once

#include <functional>
#include <vector>

#include "diskcurv/diskfield.hpp"

namespace diskcurv {

// The disk transform P maps a bounded field phi to
//   (P phi)(z) = -(1/pi) Int_D { phi/(zeta-z) + z phibar/(1-zetabar z)
//                                - phi/(2 zeta) + phibar/(2 zetabar) } dA,
// and H = (P phi)_z with the first kernel 1/(zeta-z)^2 taken as a principal
// value. Two backends evaluate them: a semi-analytic direct quadrature
// (angular Fourier modes integrated exactly, radial Gauss sub-integrals) and
// a spectral basis of closed-form actions on monomials z^m conj(z)^n.

enum class KernelId { cauchy, hilbert };
enum class BackendMode { direct_quadrature, spectral_basis };

// Closed-form action on a single monomial: a finite sum of z^a conj(z)^b.
struct MonomialAction {
  struct Term {
    int a = 0;
    int b = 0;
    cplx coeff;
  };
  std::vector<Term> terms;

  cplx eval(cplx z) const;
};

// P (or H) applied to c * z^m conj(z)^n is c * lin(z) + conj(c) * anti(z):
// the kernel's phibar terms act antilinearly on the coefficient.
struct MonomialActionPair {
  MonomialAction lin;
  MonomialAction anti;
};

MonomialActionPair p_monomial_action(int m, int n);
MonomialActionPair h_monomial_action(int m, int n);

class OperatorBackend {
 public:
  static OperatorBackend direct(GridPtr grid);
  // The spectral tables are checked against a direct backend on the same grid
  // at construction; pass one in to avoid rebuilding it.
  static OperatorBackend spectral(GridPtr grid, int basis_degree = 12,
                                  const OperatorBackend* direct_reference = nullptr);

  BackendMode mode() const { return mode_; }
  const GridPtr& grid() const { return grid_; }
  int basis_degree() const { return basis_degree_; }

  // P(phi) and/or H(phi) sampled at every grid node (either output may be null).
  void apply_fields(const ComplexField& phi, ComplexField* p_out,
                    ComplexField* h_out) const;

  // Evaluation at arbitrary points of the closed disk.
  std::vector<cplx> apply(KernelId kid, const ComplexField& phi,
                          const std::vector<cplx>& eval_points) const;

  // Projection of a sampled field onto the monomial basis (spectral mode).
  std::vector<std::tuple<int, int, cplx>> project(const ComplexField& phi) const;

 private:
  OperatorBackend() = default;

  struct PointRows;
  void direct_point_values(const Eigen::MatrixXcd& modes, cplx z, bool want_p,
                           bool want_h, cplx* p_val, cplx* h_val) const;
  Eigen::RowVectorXd mode_row(double r, int p) const;

  BackendMode mode_ = BackendMode::direct_quadrature;
  GridPtr grid_;
  int basis_degree_ = 0;

  // direct mode: per angular frequency, the matrix taking the mode's radial
  // profile at the grid nodes to its outer/inner kernel integral there.
  std::vector<Eigen::MatrixXd> ring_op_;

  // spectral mode: per-frequency least-squares fits of radial profiles r^t
  // and the closed-form action tables.
  std::vector<std::vector<int>> fit_degrees_;              // indexed p + basis_degree
  std::vector<Eigen::MatrixXd> fit_pinv_;                  // pseudo-inverses
  std::vector<MonomialActionPair> p_actions_, h_actions_;  // indexed m*(D+1)+n
};

// Spec'd operation fronts. Eval points must not collide with grid nodes
// (the literal quadrature view of the kernels is singular there); use the
// cell-exclusion oracle at nodes instead.
std::vector<cplx> cauchy_P(const OperatorBackend& backend, const ComplexField& phi,
                           const std::vector<cplx>& eval_points);
std::vector<cplx> hilbert_H(const OperatorBackend& backend, const ComplexField& phi,
                            const std::vector<cplx>& eval_points);

// (P phi)(0) = -(1/pi) Int { phi/(2 zeta) + phibar/(2 zetabar) } dA by literal
// node quadrature; asserts the imaginary part vanishes and returns the real part.
double P_at_origin(const ComplexField& phi);

// Independent slow-path oracle: fresh quadrature in polar coordinates centered
// at the evaluation point (which removes the kernel singularity analytically),
// with no reuse of grid machinery.
cplx oracle_direct(const std::function<cplx(cplx)>& phi, KernelId kid, cplx z,
                   int n_rho = 48, int n_psi = 256);

// Secondary slow path: plain node-sum quadrature of the literal kernels with
// the singular node excluded; z must be a grid node. First-order accurate
// only; serves as an order-of-magnitude cross-check.
cplx oracle_cell_exclusion(const ComplexField& phi, KernelId kid, cplx z);

}  // namespace diskcurv
