#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "diskcurv/diskfield.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace diskcurv;
using testutil::cdist;

TEST_CASE("gauss_legendre rule") {
  std::vector<double> x, w;
  gauss_legendre(16, x, w);
  double wsum = 0.0, x2 = 0.0;
  for (int i = 0; i < 16; ++i) {
    wsum += w[i];
    x2 += w[i] * x[i] * x[i];
    CHECK(x[i] > -1.0);
    CHECK(x[i] < 1.0);
    if (i > 0) CHECK(x[i] > x[i - 1]);
  }
  CHECK(std::abs(wsum - 2.0) < 1e-13);
  CHECK(std::abs(x2 - 2.0 / 3.0) < 1e-13);
}

TEST_CASE("build_grid geometry and weights") {
  GridPtr g = build_grid(8, 32);
  CHECK(g->node_count() == 256);
  CHECK(g->boundary_ring_index == 7);

  double wsum = 0.0;
  for (double w : g->weights) {
    CHECK(w > 0.0);
    wsum += w;
  }
  CHECK(std::abs(wsum - M_PI) < 1e-6 * M_PI);

  std::set<std::pair<double, double>> uniq;
  for (const cplx& z : g->nodes) {
    CHECK(std::abs(z) > 0.0);
    CHECK(std::abs(z) < 1.0);
    uniq.insert({z.real(), z.imag()});
  }
  CHECK(uniq.size() == g->nodes.size());

  CHECK_THROWS_AS(build_grid(3, 32), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(8, 6), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(8, 9), std::invalid_argument);
}

TEST_CASE("integrate closed forms") {
  GridPtr g = build_grid(16, 64);

  ComplexField zero(g);
  CHECK(std::abs(integrate(zero)) == 0.0);

  ComplexField ones = sample(g, [](cplx) { return cplx(1.0, 0.0); });
  CHECK(cdist(integrate(ones), cplx(M_PI, 0.0)) < 1e-6);

  ComplexField zf = sample(g, [](cplx z) { return z; });
  CHECK(std::abs(integrate(zf)) < 1e-6);

  ComplexField r2 = sample(g, [](cplx z) { return cplx(std::norm(z), 0.0); });
  CHECK(cdist(integrate(r2), cplx(M_PI / 2.0, 0.0)) < 1e-6 * (M_PI / 2.0));
}

TEST_CASE("radial quadrature exactness for r^2m") {
  GridPtr g = build_grid(16, 64);
  for (int m = 0; m <= 8; ++m) {
    ComplexField f = sample(g, [m](cplx z) { return cplx(std::pow(std::norm(z), m), 0.0); });
    const double exact = M_PI / (m + 1.0);
    CHECK(std::abs(integrate(f).real() - exact) < 1e-6 * exact);
    CHECK(std::abs(integrate(f).imag()) < 1e-12);
  }
}

TEST_CASE("angular orthogonality of mixed monomials") {
  GridPtr g = build_grid(16, 64);
  const int pairs[4][2] = {{1, 0}, {2, 1}, {3, 0}, {5, 2}};
  for (const auto& p : pairs) {
    const int m = p[0], n = p[1];
    ComplexField f = sample(g, [m, n](cplx z) { return std::pow(z, m) * std::pow(std::conj(z), n); });
    CHECK(std::abs(integrate(f)) < 1e-6);
  }
}

TEST_CASE("ring modes of a bivariate polynomial") {
  GridPtr g = build_grid(8, 32);
  ComplexField f = sample(g, [](cplx z) { return z * z + 3.0 * std::conj(z); });
  for (int ring : {0, 4, 7}) {
    const double r = g->radial_nodes[ring];
    std::vector<cplx> modes = ring_modes(f, ring);
    CHECK(cdist(modes[2], cplx(r * r, 0.0)) < 1e-12);
    CHECK(cdist(modes[32 - 1], cplx(3.0 * r, 0.0)) < 1e-12);
    CHECK(std::abs(modes[5]) < 1e-12);
  }
  CHECK(mode_frequency(2, 32) == 2);
  CHECK(mode_frequency(31, 32) == -1);
  CHECK(mode_frequency(16, 32) == -16);
}

TEST_CASE("wirtinger derivatives of analytic and antianalytic powers") {
  GridPtr g = build_grid(16, 64);

  ComplexField f = sample(g, [](cplx z) { return z * z * z; });
  WirtingerDerivs d = wirtinger_derivatives(f);
  double e_z = 0.0, e_zbar = 0.0;
  for (int i = 0; i < g->node_count(); ++i) {
    const cplx z = g->nodes[i];
    e_z = std::max(e_z, cdist(d.d_z.values[i], 3.0 * z * z));
    e_zbar = std::max(e_zbar, std::abs(d.d_zbar.values[i]));
  }
  CHECK(e_z < 1e-9);
  CHECK(e_zbar < 1e-9);

  ComplexField h = sample(g, [](cplx z) { return std::conj(z) * std::conj(z); });
  WirtingerDerivs dh = wirtinger_derivatives(h);
  double h_z = 0.0, h_zbar = 0.0;
  for (int i = 0; i < g->node_count(); ++i) {
    const cplx z = g->nodes[i];
    h_z = std::max(h_z, std::abs(dh.d_z.values[i]));
    h_zbar = std::max(h_zbar, cdist(dh.d_zbar.values[i], 2.0 * std::conj(z)));
  }
  CHECK(h_z < 1e-9);
  CHECK(h_zbar < 1e-9);
}

TEST_CASE("norms") {
  GridPtr g = build_grid(8, 32);
  ComplexField ones = sample(g, [](cplx) { return cplx(1.0, 0.0); });
  CHECK(std::abs(lp_norm(ones, 4.0) - std::pow(M_PI, 0.25)) < 1e-10);
  ComplexField zf = sample(g, [](cplx z) { return z; });
  CHECK(std::abs(sup_norm(zf) - g->radial_nodes.back()) < 1e-14);
}

TEST_CASE("fft roundtrip, delta, and non-power-of-two fallback") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);

  std::vector<cplx> v(64);
  for (auto& x : v) x = cplx(unif(rng), unif(rng));
  std::vector<cplx> w = fft_copy(v, false);
  std::vector<cplx> back = fft_copy(w, true);
  for (size_t i = 0; i < v.size(); ++i) CHECK(cdist(v[i], back[i]) < 1e-12);

  std::vector<cplx> delta(16, cplx(0.0, 0.0));
  delta[0] = 1.0;
  std::vector<cplx> flat = fft_copy(delta, false);
  for (const cplx& x : flat) CHECK(cdist(x, cplx(1.0, 0.0)) < 1e-13);

  // n = 12 exercises the direct-DFT path: a pure exponential concentrates
  // in a single bin.
  std::vector<cplx> tone(12);
  for (int j = 0; j < 12; ++j) tone[j] = std::polar(1.0, 2.0 * M_PI * 3.0 * j / 12.0);
  std::vector<cplx> bins = fft_copy(tone, false);
  CHECK(cdist(bins[3], cplx(12.0, 0.0)) < 1e-9);
  for (int m = 0; m < 12; ++m) {
    if (m != 3) CHECK(std::abs(bins[m]) < 1e-9);
  }
  std::vector<cplx> tone_back = fft_copy(bins, true);
  for (int j = 0; j < 12; ++j) CHECK(cdist(tone_back[j], tone[j]) < 1e-12);
}

TEST_CASE("barycentric interpolation and differentiation on radial nodes") {
  std::vector<double> x, w;
  gauss_legendre_01(16, x, w);
  std::vector<double> lam = barycentric_weights_gl(x, w);

  std::vector<double> fx(16);
  for (int i = 0; i < 16; ++i) fx[i] = std::exp(x[i]);
  std::vector<double> row = barycentric_row(x, lam, 0.37);
  double val = 0.0;
  for (int i = 0; i < 16; ++i) val += row[i] * fx[i];
  CHECK(std::abs(val - std::exp(0.37)) < 1e-10);

  std::vector<double> row_node = barycentric_row(x, lam, x[5]);
  CHECK(row_node[5] == 1.0);
  CHECK(row_node[4] == 0.0);

  Eigen::MatrixXd d = barycentric_diff_matrix(x, lam);
  for (int i = 0; i < 16; ++i) {
    double acc = 0.0;
    for (int j = 0; j < 16; ++j) acc += d(i, j) * std::sin(3.0 * x[j]);
    CHECK(std::abs(acc - 3.0 * std::cos(3.0 * x[i])) < 1e-9);
  }
}

TEST_CASE("neville extrapolation to zero") {
  std::vector<double> x = {0.1, 0.2, 0.3};
  std::vector<double> y;
  for (double t : x) y.push_back(5.0 - 3.0 * t + 2.0 * t * t);
  CHECK(std::abs(neville_at_zero(x, y) - 5.0) < 1e-12);
}

TEST_CASE("nelder_mead quadratic bowl") {
  auto f = [](const std::vector<double>& p) {
    return (p[0] - 2.0) * (p[0] - 2.0) + (p[1] + 1.0) * (p[1] + 1.0);
  };
  NelderMeadResult res = nelder_mead(f, {0.0, 0.0}, {0.5, 0.5}, 1e-14, 500);
  CHECK(res.converged);
  CHECK(std::abs(res.x[0] - 2.0) < 1e-5);
  CHECK(std::abs(res.x[1] + 1.0) < 1e-5);
}

namespace {

GraphPatch lattice_patch(const std::function<double(double, double)>& f) {
  std::vector<std::array<double, 2>> pts;
  std::vector<double> h;
  const int n = 41;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double u = -0.7 + 1.4 * i / (n - 1.0);
      const double v = -0.7 + 1.4 * j / (n - 1.0);
      pts.push_back({u, v});
      h.push_back(f(u, v));
    }
  }
  return GraphPatch(std::move(pts), std::move(h));
}

}  // namespace

TEST_CASE("hessian exact on plane and bilinear") {
  GraphPatch flat = lattice_patch([](double, double) { return 0.0; });
  HessianResult r0 = finite_difference_hessian(flat, 0.1, 0.1);
  CHECK(std::abs(r0.f_u) < 1e-12);
  CHECK(std::abs(r0.f_v) < 1e-12);
  CHECK(std::abs(r0.f_uu) < 1e-9);
  CHECK(std::abs(r0.f_uv) < 1e-9);
  CHECK(std::abs(r0.f_vv) < 1e-9);

  GraphPatch bil = lattice_patch([](double u, double v) { return u * v; });
  HessianResult r1 = finite_difference_hessian(bil, 0.0, 0.0);
  CHECK(std::abs(r1.f_uv - 1.0) < 1e-8);
  CHECK(std::abs(r1.f_u) < 1e-8);
  CHECK(std::abs(r1.f_v) < 1e-8);
  CHECK(std::abs(r1.f_uu) < 1e-7);
  CHECK(std::abs(r1.f_vv) < 1e-7);
  CHECK(r1.step == doctest::Approx(bil.fd_step));
}

TEST_CASE("hessian exact on a generic quadratic") {
  auto f = [](double u, double v) {
    return 1.0 + 2.0 * u - 3.0 * v + 0.5 * u * u + 1.5 * u * v - 2.5 * v * v;
  };
  GraphPatch patch = lattice_patch(f);
  HessianResult r = finite_difference_hessian(patch, 0.1, -0.2);
  CHECK(std::abs(r.f_u - 1.8) < 1e-7);
  CHECK(std::abs(r.f_v + 1.85) < 1e-7);
  CHECK(std::abs(r.f_uu - 1.0) < 1e-7);
  CHECK(std::abs(r.f_uv - 1.5) < 1e-7);
  CHECK(std::abs(r.f_vv + 5.0) < 1e-7);
}

TEST_CASE("hessian on a cubic within central-difference truncation") {
  GraphPatch patch = lattice_patch([](double u, double) { return u * u * u; });
  HessianResult r = finite_difference_hessian(patch, 0.2, 0.0);
  CHECK(std::abs(r.f_u - 0.12) < 5e-6);
  CHECK(std::abs(r.f_uu - 1.2) < 1e-6);
  CHECK(std::abs(r.f_uv) < 1e-6);
  CHECK(std::abs(r.f_vv) < 1e-6);
}

TEST_CASE("patch evaluation and domain guards") {
  GraphPatch patch = lattice_patch([](double u, double v) { return std::sin(u) * std::cos(v); });
  CHECK(std::abs(patch_eval(patch, 0.1, 0.2) - std::sin(0.1) * std::cos(0.2)) < 1e-4);

  CHECK_THROWS_AS(finite_difference_hessian(patch, 0.9, 0.9), std::domain_error);

  std::vector<std::array<double, 2>> bad_pts = {{0.0, 0.0}, {1.5, 0.0}};
  std::vector<double> bad_h = {0.0, 0.0};
  CHECK_THROWS_AS(GraphPatch(bad_pts, bad_h), std::invalid_argument);
  std::vector<double> short_h = {0.0};
  std::vector<std::array<double, 2>> two_pts = {{0.0, 0.0}, {0.5, 0.0}};
  CHECK_THROWS_AS(GraphPatch(two_pts, short_h), std::invalid_argument);
}
