#include "diskcurv/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace diskcurv {

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const double eps = 1e-15;
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Newton iteration on P_n from the Chebyshev-based initial guess.
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0, z1 = 0.0;
    do {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      z1 = z;
      z = z1 - p1 / pp;
    } while (std::abs(z - z1) > eps);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

void gauss_legendre_01(int n, std::vector<double>& x, std::vector<double>& w) {
  gauss_legendre(n, x, w);
  for (int i = 0; i < n; ++i) {
    x[i] = 0.5 * (x[i] + 1.0);
    w[i] *= 0.5;
  }
}

std::vector<double> barycentric_weights_gl(const std::vector<double>& x01,
                                           const std::vector<double>& w01) {
  const int n = static_cast<int>(x01.size());
  std::vector<double> lam(n);
  for (int i = 0; i < n; ++i) {
    const double s = std::sqrt(x01[i] * (1.0 - x01[i]) * w01[i]);
    lam[i] = (i % 2 == 0) ? s : -s;
  }
  return lam;
}

std::vector<double> barycentric_row(const std::vector<double>& x,
                                    const std::vector<double>& lam, double t) {
  const int n = static_cast<int>(x.size());
  std::vector<double> row(n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (t == x[i]) {
      row[i] = 1.0;
      return row;
    }
  }
  double denom = 0.0;
  for (int i = 0; i < n; ++i) {
    row[i] = lam[i] / (t - x[i]);
    denom += row[i];
  }
  for (int i = 0; i < n; ++i) row[i] /= denom;
  return row;
}

Eigen::MatrixXd barycentric_diff_matrix(const std::vector<double>& x,
                                        const std::vector<double>& lam) {
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd d(n, n);
  for (int i = 0; i < n; ++i) {
    double rowsum = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      d(i, j) = (lam[j] / lam[i]) / (x[i] - x[j]);
      rowsum += d(i, j);
    }
    d(i, i) = -rowsum;
  }
  return d;
}

void fft(std::vector<cplx>& a, bool inverse) {
  const size_t n = a.size();
  if (n <= 1) return;
  if ((n & (n - 1)) != 0) {
    // Direct DFT fallback for non-power-of-two sizes.
    std::vector<cplx> out(n, cplx(0.0, 0.0));
    const double sgn = inverse ? 1.0 : -1.0;
    for (size_t m = 0; m < n; ++m) {
      for (size_t j = 0; j < n; ++j) {
        const double ang = sgn * 2.0 * M_PI * static_cast<double>((m * j) % n) /
                           static_cast<double>(n);
        out[m] += a[j] * std::polar(1.0, ang);
      }
    }
    if (inverse) {
      for (auto& v : out) v /= static_cast<double>(n);
    }
    a = std::move(out);
    return;
  }
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * M_PI / static_cast<double>(len);
    const cplx wl = std::polar(1.0, ang);
    for (size_t i = 0; i < n; i += len) {
      cplx w(1.0, 0.0);
      for (size_t j = 0; j < len / 2; ++j) {
        const cplx u = a[i + j];
        const cplx v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (inverse) {
    for (auto& v : a) v /= static_cast<double>(n);
  }
}

std::vector<cplx> fft_copy(const std::vector<cplx>& a, bool inverse) {
  std::vector<cplx> out = a;
  fft(out, inverse);
  return out;
}

double neville_at_zero(std::vector<double> x, std::vector<double> y) {
  const int n = static_cast<int>(x.size());
  if (n == 0) throw std::invalid_argument("neville_at_zero: empty data");
  for (int m = 1; m < n; ++m) {
    for (int i = 0; i + m < n; ++i) {
      y[i] = (x[i + m] * y[i] - x[i] * y[i + 1]) / (x[i + m] - x[i]);
    }
  }
  return y[0];
}

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& x0,
                             const std::vector<double>& steps, double tol,
                             int max_iter) {
  const int n = static_cast<int>(x0.size());
  if (static_cast<int>(steps.size()) != n) {
    throw std::invalid_argument("nelder_mead: steps size mismatch");
  }
  std::vector<std::vector<double>> pts(n + 1, x0);
  for (int i = 0; i < n; ++i) pts[i + 1][i] += steps[i];
  std::vector<double> vals(n + 1);
  for (int i = 0; i <= n; ++i) vals[i] = f(pts[i]);

  NelderMeadResult res;
  int iter = 0;
  while (iter < max_iter) {
    // Order the simplex by value.
    std::vector<int> ord(n + 1);
    for (int i = 0; i <= n; ++i) ord[i] = i;
    std::sort(ord.begin(), ord.end(), [&](int a, int b) { return vals[a] < vals[b]; });
    {
      std::vector<std::vector<double>> p2(n + 1);
      std::vector<double> v2(n + 1);
      for (int i = 0; i <= n; ++i) {
        p2[i] = pts[ord[i]];
        v2[i] = vals[ord[i]];
      }
      pts = std::move(p2);
      vals = std::move(v2);
    }
    if (vals[n] - vals[0] < tol) {
      res.converged = true;
      break;
    }
    ++iter;

    std::vector<double> centroid(n, 0.0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) centroid[j] += pts[i][j];
    }
    for (int j = 0; j < n; ++j) centroid[j] /= n;

    auto blend = [&](double c) {
      std::vector<double> p(n);
      for (int j = 0; j < n; ++j) p[j] = centroid[j] + c * (pts[n][j] - centroid[j]);
      return p;
    };

    const std::vector<double> xr = blend(-1.0);
    const double fr = f(xr);
    if (fr < vals[0]) {
      const std::vector<double> xe = blend(-2.0);
      const double fe = f(xe);
      if (fe < fr) {
        pts[n] = xe;
        vals[n] = fe;
      } else {
        pts[n] = xr;
        vals[n] = fr;
      }
      continue;
    }
    if (fr < vals[n - 1]) {
      pts[n] = xr;
      vals[n] = fr;
      continue;
    }
    const std::vector<double> xc = blend(fr < vals[n] ? -0.5 : 0.5);
    const double fc = f(xc);
    if (fc < std::min(fr, vals[n])) {
      pts[n] = xc;
      vals[n] = fc;
      continue;
    }
    // Shrink toward the best vertex.
    for (int i = 1; i <= n; ++i) {
      for (int j = 0; j < n; ++j) pts[i][j] = pts[0][j] + 0.5 * (pts[i][j] - pts[0][j]);
      vals[i] = f(pts[i]);
    }
  }
  res.iterations = iter;
  res.x = pts[0];
  res.value = vals[0];
  if (!res.converged) {
    // Report the best vertex even when the budget ran out.
    for (int i = 1; i <= static_cast<int>(x0.size()); ++i) {
      if (vals[i] < res.value) {
        res.value = vals[i];
        res.x = pts[i];
      }
    }
  }
  return res;
}

}  // namespace diskcurv
