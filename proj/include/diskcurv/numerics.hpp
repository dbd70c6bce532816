#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace diskcurv {

using cplx = std::complex<double>;

inline double ipow(double x, int e) {
  double acc = 1.0;
  for (int i = 0; i < e; ++i) acc *= x;
  return acc;
}

inline cplx ipow(cplx x, int e) {
  cplx acc(1.0, 0.0);
  for (int i = 0; i < e; ++i) acc *= x;
  return acc;
}

// Gauss-Legendre nodes (ascending) and weights on [-1,1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

// Same rule mapped to [0,1].
void gauss_legendre_01(int n, std::vector<double>& x, std::vector<double>& w);

// Barycentric weights for Gauss-Legendre nodes given on [0,1].
// Uses the explicit form lambda_i = (-1)^i sqrt(x_i (1-x_i) w_i), which is
// proportional to the classical 1/prod(x_i - x_j) weights but avoids
// overflow/underflow for large node counts.
std::vector<double> barycentric_weights_gl(const std::vector<double>& x01,
                                           const std::vector<double>& w01);

// Row of interpolation weights: f(t) ~= sum_i row[i] * f(x[i]).
std::vector<double> barycentric_row(const std::vector<double>& x,
                                    const std::vector<double>& lam, double t);

// Differentiation matrix of the barycentric interpolant at its own nodes,
// with the diagonal from the negative-sum trick.
Eigen::MatrixXd barycentric_diff_matrix(const std::vector<double>& x,
                                        const std::vector<double>& lam);

// FFT with forward sign e^{-2pi i jm/n}; inverse divides by n.
// Radix-2 in-place when n is a power of two, direct DFT otherwise.
void fft(std::vector<cplx>& a, bool inverse);
std::vector<cplx> fft_copy(const std::vector<cplx>& a, bool inverse);

// Value at 0 of the polynomial interpolating (x_i, y_i).
double neville_at_zero(std::vector<double> x, std::vector<double> y);

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Derivative-free simplex minimizer. `steps` sets the initial simplex extent
// per coordinate; stops when the simplex's value spread falls below tol.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& x0,
                             const std::vector<double>& steps, double tol,
                             int max_iter);

}  // namespace diskcurv
