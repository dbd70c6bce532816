#include "diskcurv/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace diskcurv {

namespace {

struct QuadCache {
  std::vector<double> x16, w16, x24, w24;  // rules on [0,1]
  QuadCache() {
    gauss_legendre_01(16, x16, w16);
    gauss_legendre_01(24, x24, w24);
  }
};

const QuadCache& quad_cache() {
  static const QuadCache c;
  return c;
}

// Integration segments for the radial kernels. The weights (r/s)^e over
// [r, 1] and (s/r)^e over [0, r] concentrate near s = r for large e, so the
// interval is split into slices on which the weight decays by e^-6 each.
std::vector<double> outer_breaks(double r, int e) {
  if (e <= 8) return {r, 1.0};
  std::vector<double> b{r};
  for (int k = 1; k <= 6; ++k) {
    const double s = r * std::exp(6.0 * k / static_cast<double>(e));
    if (s >= 1.0) break;
    b.push_back(s);
  }
  b.push_back(1.0);
  return b;
}

std::vector<double> inner_breaks(double r, int e) {
  if (e <= 8) return {0.0, r};
  std::vector<double> b{r};
  for (int k = 1; k <= 6; ++k) b.push_back(r * std::exp(-6.0 * k / static_cast<double>(e)));
  b.push_back(0.0);
  std::reverse(b.begin(), b.end());
  return b;
}

// Highest angular frequency the kernel sums may act on. The assembled output
// shifts the input frequency by up to two slots, and the half-spectrum bin of
// the FFT carries +na/2 and -na/2 content indistinguishably, so anything
// closer than three bins to the fold is dropped rather than wrapped into a
// wrong frequency. (Wrapping is not benign here: a misfiled mode re-enters
// the fixed-point iteration through the conjugations in T and gets amplified
// by the frequency-proportional gain of the derivative kernel.)
int band_cap(int na) { return na / 2 - 3; }

Eigen::MatrixXcd all_ring_modes(const ComplexField& phi) {
  const GridPtr& g = phi.grid;
  const int nr = g->n_radial();
  const int na = g->angular_count;
  Eigen::MatrixXcd m(nr, na);
  std::vector<cplx> row(na);
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < na; ++j) row[j] = phi.at(i, j);
    fft(row, false);
    for (int j = 0; j < na; ++j) m(i, j) = row[j] / static_cast<double>(na);
  }
  return m;
}

struct Moments {
  std::vector<cplx> c;       // c[j] = Int_0^1 conj(phi_{-j}(s)) s^{j+1} ds
  cplx int_phi1;             // Int_0^1 phi_1(s) ds
  cplx int_phi2_over_s;      // Int_0^1 phi_2(s)/s ds
};

Moments compute_moments(const DiskGrid& g, const Eigen::MatrixXcd& modes) {
  const int nr = g.n_radial();
  const int na = g.angular_count;
  Moments mm;
  mm.c.assign(na / 2 + 1, cplx(0.0, 0.0));
  std::vector<double> rp(nr);
  for (int i = 0; i < nr; ++i) rp[i] = g.radial_nodes[i];
  for (int j = 0; j <= band_cap(na); ++j) {
    const int col = (na - j) % na;
    cplx acc(0.0, 0.0);
    for (int i = 0; i < nr; ++i) {
      acc += g.radial_weights[i] * rp[i] * std::conj(modes(i, col));
      rp[i] *= g.radial_nodes[i];
    }
    mm.c[j] = acc;
  }
  mm.int_phi1 = cplx(0.0, 0.0);
  mm.int_phi2_over_s = cplx(0.0, 0.0);
  for (int i = 0; i < nr; ++i) {
    mm.int_phi1 += g.radial_weights[i] * modes(i, 1 % na);
    mm.int_phi2_over_s += g.radial_weights[i] * modes(i, 2 % na) / g.radial_nodes[i];
  }
  return mm;
}

Eigen::VectorXcd real_mat_apply(const Eigen::MatrixXd& a, const Eigen::VectorXcd& v) {
  const Eigen::VectorXd re = a * v.real();
  const Eigen::VectorXd im = a * v.imag();
  Eigen::VectorXcd out(re.size());
  for (int i = 0; i < re.size(); ++i) out[i] = cplx(re[i], im[i]);
  return out;
}

int wrap_mode(int q, int na) { return ((q % na) + na) % na; }

}  // namespace

cplx MonomialAction::eval(cplx z) const {
  cplx acc(0.0, 0.0);
  const cplx zb = std::conj(z);
  for (const Term& t : terms) acc += t.coeff * ipow(z, t.a) * ipow(zb, t.b);
  return acc;
}

MonomialActionPair p_monomial_action(int m, int n) {
  MonomialActionPair act;
  const double inv = 1.0 / (n + 1.0);
  act.lin.terms.push_back({m, n + 1, cplx(inv, 0.0)});
  if (m >= n + 1) act.lin.terms.push_back({m - n - 1, 0, cplx(-inv, 0.0)});
  if (m == n + 1) act.lin.terms.push_back({0, 0, cplx(0.5 * inv, 0.0)});
  if (n >= m) act.anti.terms.push_back({n - m + 1, 0, cplx(-inv, 0.0)});
  if (m == n + 1) act.anti.terms.push_back({0, 0, cplx(-0.5 * inv, 0.0)});
  return act;
}

MonomialActionPair h_monomial_action(int m, int n) {
  const MonomialActionPair p = p_monomial_action(m, n);
  MonomialActionPair h;
  for (const auto& t : p.lin.terms) {
    if (t.a >= 1) h.lin.terms.push_back({t.a - 1, t.b, t.coeff * static_cast<double>(t.a)});
  }
  for (const auto& t : p.anti.terms) {
    if (t.a >= 1) h.anti.terms.push_back({t.a - 1, t.b, t.coeff * static_cast<double>(t.a)});
  }
  return h;
}

Eigen::RowVectorXd OperatorBackend::mode_row(double r, int p) const {
  const QuadCache& q = quad_cache();
  const int nr = grid_->n_radial();
  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(nr);
  const bool outer = (p >= 1);
  const int e = outer ? p - 1 : 1 - p;
  const std::vector<double> breaks = outer ? outer_breaks(r, e) : inner_breaks(r, e);
  const bool single = breaks.size() == 2;
  const std::vector<double>& xg = single ? q.x24 : q.x16;
  const std::vector<double>& wg = single ? q.w24 : q.w16;
  for (size_t seg = 0; seg + 1 < breaks.size(); ++seg) {
    const double a = breaks[seg];
    const double b = breaks[seg + 1];
    if (b <= a) continue;
    for (size_t t = 0; t < xg.size(); ++t) {
      const double s = a + (b - a) * xg[t];
      if (s <= 0.0) continue;
      const double kern = (e == 0) ? 1.0 : std::pow(outer ? r / s : s / r, e);
      if (kern == 0.0) continue;
      const double wq = (b - a) * wg[t] * kern;
      const std::vector<double> brow =
          barycentric_row(grid_->radial_nodes, grid_->radial_bary, s);
      for (int l = 0; l < nr; ++l) row[l] += wq * brow[l];
    }
  }
  return row;
}

OperatorBackend OperatorBackend::direct(GridPtr grid) {
  OperatorBackend b;
  b.mode_ = BackendMode::direct_quadrature;
  b.grid_ = std::move(grid);
  const int nr = b.grid_->n_radial();
  const int na = b.grid_->angular_count;
  b.ring_op_.resize(na);
  for (int m = 0; m < na; ++m) {
    const int p = mode_frequency(m, na);
    Eigen::MatrixXd u(nr, nr);
    for (int i = 0; i < nr; ++i) u.row(i) = b.mode_row(b.grid_->radial_nodes[i], p);
    b.ring_op_[m] = std::move(u);
  }
  return b;
}

void OperatorBackend::apply_fields(const ComplexField& phi, ComplexField* p_out,
                                   ComplexField* h_out) const {
  if (phi.grid != grid_) throw std::invalid_argument("apply_fields: field grid mismatch");
  const int nr = grid_->n_radial();
  const int na = grid_->angular_count;

  if (mode_ == BackendMode::spectral_basis) {
    const auto coeffs = project(phi);
    if (p_out) *p_out = ComplexField(grid_);
    if (h_out) *h_out = ComplexField(grid_);
    for (int idx = 0; idx < grid_->node_count(); ++idx) {
      const cplx z = grid_->nodes[idx];
      cplx pv(0.0, 0.0), hv(0.0, 0.0);
      for (const auto& [m, n, c] : coeffs) {
        const int key = m * (basis_degree_ + 1) + n;
        if (p_out) {
          pv += c * p_actions_[key].lin.eval(z) + std::conj(c) * p_actions_[key].anti.eval(z);
        }
        if (h_out) {
          hv += c * h_actions_[key].lin.eval(z) + std::conj(c) * h_actions_[key].anti.eval(z);
        }
      }
      if (p_out) p_out->values[idx] = pv;
      if (h_out) h_out->values[idx] = hv;
    }
    return;
  }

  Eigen::MatrixXcd modes = all_ring_modes(phi);
  const int cap = band_cap(na);
  for (int m = 0; m < na; ++m) {
    if (std::abs(mode_frequency(m, na)) > cap) modes.col(m).setZero();
  }
  Eigen::MatrixXcd g(nr, na);
  for (int m = 0; m < na; ++m) g.col(m) = real_mat_apply(ring_op_[m], modes.col(m));
  const Moments mm = compute_moments(*grid_, modes);
  const cplx p34(0.0, 2.0 * mm.int_phi1.imag());

  if (p_out) *p_out = ComplexField(grid_);
  if (h_out) *h_out = ComplexField(grid_);

  std::vector<cplx> arr(na);
  for (int i = 0; i < nr; ++i) {
    const double r = grid_->radial_nodes[i];
    if (p_out) {
      std::fill(arr.begin(), arr.end(), cplx(0.0, 0.0));
      for (int m = 0; m < na; ++m) {
        const int p = mode_frequency(m, na);
        if (std::abs(p) > cap) continue;
        arr[wrap_mode(p - 1, na)] += (p >= 1 ? -2.0 : 2.0) * g(i, m);
      }
      double rp = r;  // r^{j+1}
      for (int j = 0; j <= cap; ++j) {
        arr[wrap_mode(j + 1, na)] += -2.0 * mm.c[j] * rp;
        rp *= r;
      }
      fft(arr, true);
      for (int j = 0; j < na; ++j) {
        p_out->at(i, j) = arr[j] * static_cast<double>(na) + p34;
      }
    }
    if (h_out) {
      std::fill(arr.begin(), arr.end(), cplx(0.0, 0.0));
      for (int m = 0; m < na; ++m) {
        const int p = mode_frequency(m, na);
        if (p == 1 || std::abs(p) > cap) continue;
        arr[wrap_mode(p - 2, na)] +=
            (p >= 1 ? -2.0 : 2.0) * static_cast<double>(p - 1) / r * g(i, m);
      }
      double rp = 1.0;  // r^j
      for (int j = 0; j <= cap; ++j) {
        arr[wrap_mode(j, na)] += -2.0 * static_cast<double>(j + 1) * mm.c[j] * rp;
        rp *= r;
      }
      // The local part of the derivative kernel, taken from the same
      // band-limited view of the field the integral terms saw.
      for (int m = 0; m < na; ++m) {
        const int p = mode_frequency(m, na);
        if (std::abs(p) > cap) continue;
        arr[wrap_mode(p - 2, na)] += modes(i, m);
      }
      fft(arr, true);
      for (int j = 0; j < na; ++j) {
        h_out->at(i, j) = arr[j] * static_cast<double>(na);
      }
    }
  }
}

void OperatorBackend::direct_point_values(const Eigen::MatrixXcd& modes, cplx z,
                                          bool want_p, bool want_h, cplx* p_val,
                                          cplx* h_val) const {
  const int nr = grid_->n_radial();
  const int na = grid_->angular_count;
  const double r = std::abs(z);
  const double th = std::arg(z);
  const Moments mm = compute_moments(*grid_, modes);

  cplx pv(0.0, 2.0 * mm.int_phi1.imag());
  cplx hv(0.0, 0.0);

  if (r < 1e-14) {
    if (want_p) {
      // Only the p = 1 outer integral survives at the origin.
      pv += -2.0 * mm.int_phi1;
      if (p_val) *p_val = pv;
    }
    if (want_h) {
      hv = -2.0 * mm.int_phi2_over_s - 2.0 * mm.c[0];
      if (h_val) *h_val = hv;
    }
    return;
  }

  Eigen::VectorXcd col(nr);
  const std::vector<double> brow = barycentric_row(grid_->radial_nodes, grid_->radial_bary, r);
  const int cap = band_cap(na);
  cplx phi_here(0.0, 0.0);
  for (int m = 0; m < na; ++m) {
    const int p = mode_frequency(m, na);
    if (std::abs(p) > cap) continue;
    const Eigen::RowVectorXd row = mode_row(r, p);
    cplx gp(0.0, 0.0), interp(0.0, 0.0);
    for (int i = 0; i < nr; ++i) {
      gp += row[i] * modes(i, m);
      interp += brow[i] * modes(i, m);
    }
    phi_here += interp * std::polar(1.0, p * th);
    if (want_p) pv += (p >= 1 ? -2.0 : 2.0) * gp * std::polar(1.0, (p - 1) * th);
    if (want_h && p != 1) {
      hv += (p >= 1 ? -2.0 : 2.0) * static_cast<double>(p - 1) / r * gp *
            std::polar(1.0, (p - 2) * th);
    }
  }
  cplx zp = z;  // z^{j+1}
  for (int j = 0; j <= cap; ++j) {
    if (want_p) pv += -2.0 * mm.c[j] * zp;
    if (want_h) hv += -2.0 * static_cast<double>(j + 1) * mm.c[j] * zp / z;
    zp *= z;
  }
  if (want_h) hv += std::polar(1.0, -2.0 * th) * phi_here;
  if (p_val) *p_val = pv;
  if (h_val) *h_val = hv;
}

std::vector<cplx> OperatorBackend::apply(KernelId kid, const ComplexField& phi,
                                         const std::vector<cplx>& eval_points) const {
  if (phi.grid != grid_) throw std::invalid_argument("apply: field grid mismatch");
  std::vector<cplx> out(eval_points.size());

  if (mode_ == BackendMode::spectral_basis) {
    const auto coeffs = project(phi);
    const auto& actions = (kid == KernelId::cauchy) ? p_actions_ : h_actions_;
    for (size_t ip = 0; ip < eval_points.size(); ++ip) {
      const cplx z = eval_points[ip];
      cplx acc(0.0, 0.0);
      for (const auto& [m, n, c] : coeffs) {
        const int key = m * (basis_degree_ + 1) + n;
        acc += c * actions[key].lin.eval(z) + std::conj(c) * actions[key].anti.eval(z);
      }
      out[ip] = acc;
    }
    return out;
  }

  const Eigen::MatrixXcd modes = all_ring_modes(phi);
  for (size_t ip = 0; ip < eval_points.size(); ++ip) {
    cplx v(0.0, 0.0);
    if (kid == KernelId::cauchy) {
      direct_point_values(modes, eval_points[ip], true, false, &v, nullptr);
    } else {
      direct_point_values(modes, eval_points[ip], false, true, nullptr, &v);
    }
    out[ip] = v;
  }
  return out;
}

std::vector<std::tuple<int, int, cplx>> OperatorBackend::project(const ComplexField& phi) const {
  if (mode_ != BackendMode::spectral_basis) {
    throw std::logic_error("project: spectral backend required");
  }
  const int na = grid_->angular_count;
  const int d = basis_degree_;
  const Eigen::MatrixXcd modes = all_ring_modes(phi);
  std::vector<std::tuple<int, int, cplx>> coeffs;
  for (int p = -d; p <= d; ++p) {
    const int col = wrap_mode(p, na);
    const Eigen::MatrixXd& pinv = fit_pinv_[p + d];
    const Eigen::VectorXd cre = pinv * modes.col(col).real();
    const Eigen::VectorXd cim = pinv * modes.col(col).imag();
    const std::vector<int>& ts = fit_degrees_[p + d];
    for (size_t l = 0; l < ts.size(); ++l) {
      const int t = ts[l];
      coeffs.emplace_back((t + p) / 2, (t - p) / 2, cplx(cre[l], cim[l]));
    }
  }
  return coeffs;
}

OperatorBackend OperatorBackend::spectral(GridPtr grid, int basis_degree,
                                          const OperatorBackend* direct_reference) {
  if (basis_degree < 1) throw std::invalid_argument("spectral: basis_degree must be >= 1");
  if (basis_degree >= grid->angular_count / 2) {
    throw std::invalid_argument("spectral: basis_degree exceeds the grid's angular modes");
  }
  OperatorBackend b;
  b.mode_ = BackendMode::spectral_basis;
  b.grid_ = grid;
  b.basis_degree_ = basis_degree;
  const int nr = grid->n_radial();
  const int d = basis_degree;

  b.fit_degrees_.resize(2 * d + 1);
  b.fit_pinv_.resize(2 * d + 1);
  for (int p = -d; p <= d; ++p) {
    std::vector<int> ts;
    for (int t = std::abs(p); t <= d; t += 2) ts.push_back(t);
    Eigen::MatrixXd v(nr, static_cast<int>(ts.size()));
    for (int i = 0; i < nr; ++i) {
      for (size_t l = 0; l < ts.size(); ++l) v(i, l) = ipow(grid->radial_nodes[i], ts[l]);
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(v);
    b.fit_pinv_[p + d] = cod.pseudoInverse();
    b.fit_degrees_[p + d] = std::move(ts);
  }

  b.p_actions_.resize((d + 1) * (d + 1));
  b.h_actions_.resize((d + 1) * (d + 1));
  for (int m = 0; m <= d; ++m) {
    for (int n = 0; m + n <= d; ++n) {
      b.p_actions_[m * (d + 1) + n] = p_monomial_action(m, n);
      b.h_actions_[m * (d + 1) + n] = h_monomial_action(m, n);
    }
  }

  // Certify every tabulated monomial against the direct quadrature backend.
  OperatorBackend owned;
  const OperatorBackend* ref = direct_reference;
  if (ref == nullptr || ref->grid_ != grid || ref->mode_ != BackendMode::direct_quadrature) {
    owned = direct(grid);
    ref = &owned;
  }
  const std::vector<cplx> probes = {cplx(0.0, 0.0), cplx(0.3, 0.0), cplx(-0.55, 0.0),
                                    cplx(0.42, 0.13), cplx(0.2, -0.6)};
  for (int m = 0; m <= d; ++m) {
    for (int n = 0; m + n <= d; ++n) {
      const ComplexField mono =
          sample(grid, [m, n](cplx z) { return ipow(z, m) * ipow(std::conj(z), n); });
      const std::vector<cplx> pd = ref->apply(KernelId::cauchy, mono, probes);
      const std::vector<cplx> hd = ref->apply(KernelId::hilbert, mono, probes);
      const int key = m * (d + 1) + n;
      for (size_t ip = 0; ip < probes.size(); ++ip) {
        const cplx pt = b.p_actions_[key].lin.eval(probes[ip]) +
                        b.p_actions_[key].anti.eval(probes[ip]);
        const cplx ht = b.h_actions_[key].lin.eval(probes[ip]) +
                        b.h_actions_[key].anti.eval(probes[ip]);
        if (std::abs(pt - pd[ip]) > 1e-5 || std::abs(ht - hd[ip]) > 1e-5) {
          throw std::logic_error("spectral backend: tabulated action disagrees with direct quadrature");
        }
      }
    }
  }
  return b;
}

namespace {

void check_eval_points(const GridPtr& grid, const std::vector<cplx>& pts) {
  for (const cplx& z : pts) {
    if (std::abs(z) > 1.0 + 1e-12) {
      throw std::invalid_argument("eval point outside the closed disk");
    }
    for (const cplx& node : grid->nodes) {
      if (std::abs(z - node) < 1e-13) {
        throw std::invalid_argument(
            "eval point coincides with a grid node; perturb it or use oracle_cell_exclusion");
      }
    }
  }
}

}  // namespace

std::vector<cplx> cauchy_P(const OperatorBackend& backend, const ComplexField& phi,
                           const std::vector<cplx>& eval_points) {
  check_eval_points(backend.grid(), eval_points);
  return backend.apply(KernelId::cauchy, phi, eval_points);
}

std::vector<cplx> hilbert_H(const OperatorBackend& backend, const ComplexField& phi,
                            const std::vector<cplx>& eval_points) {
  check_eval_points(backend.grid(), eval_points);
  return backend.apply(KernelId::hilbert, phi, eval_points);
}

double P_at_origin(const ComplexField& phi) {
  const GridPtr& g = phi.grid;
  cplx acc(0.0, 0.0);
  for (int i = 0; i < g->node_count(); ++i) {
    const cplx z = g->nodes[i];
    const cplx v = phi.values[i];
    acc += g->weights[i] * (v / (2.0 * z) + std::conj(v) / (2.0 * std::conj(z)));
  }
  acc *= -1.0 / M_PI;
  if (!(std::abs(acc.imag()) <= 1e-6 * (1.0 + std::abs(acc.real())))) {
    throw std::runtime_error("P_at_origin: imaginary part failed to vanish");
  }
  return acc.real();
}

cplx oracle_direct(const std::function<cplx(cplx)>& phi, KernelId kid, cplx z,
                   int n_rho, int n_psi) {
  if (std::abs(z) >= 1.0) throw std::invalid_argument("oracle_direct: |z| < 1 required");
  std::vector<double> xg, wg;
  gauss_legendre_01(n_rho, xg, wg);
  const double dpsi = 2.0 * M_PI / static_cast<double>(n_psi);
  const double zn = std::norm(z);
  const cplx zb = std::conj(z);

  cplx acc(0.0, 0.0);
  for (int l = 0; l < n_psi; ++l) {
    const double psi = dpsi * l;
    const cplx dir = std::polar(1.0, psi);
    const double beta = (zb * dir).real();
    const double rmax = -beta + std::sqrt(beta * beta + 1.0 - zn);
    if (kid == KernelId::cauchy) {
      for (int t = 0; t < n_rho; ++t) {
        const double rho = rmax * xg[t];
        const double w = dpsi * rmax * wg[t];
        const cplx zeta = z + rho * dir;
        const cplx pv = phi(zeta);
        acc += w * (pv * std::conj(dir) +
                    z * std::conj(pv) / (1.0 - std::conj(zeta) * z) * rho);
      }
    } else {
      const cplx phi_z = phi(z);
      cplx inner(0.0, 0.0);
      cplx second(0.0, 0.0);
      for (int t = 0; t < n_rho; ++t) {
        const double rho = rmax * xg[t];
        const double w = rmax * wg[t];
        const cplx zeta = z + rho * dir;
        const cplx pv = phi(zeta);
        inner += w * (pv - phi_z) / rho;
        second += w * rho * std::conj(pv) / ipow(1.0 - std::conj(zeta) * z, 2);
      }
      const cplx dir2 = std::conj(dir * dir);
      acc += dpsi * (dir2 * (inner + phi_z * std::log(rmax)) + second);
    }
  }
  acc *= -1.0 / M_PI;

  if (kid == KernelId::cauchy) {
    // The -phi/(2 zeta) + phibar/(2 zetabar) pair in origin-centered polar
    // coordinates, where the 1/s singularity cancels against the area element.
    cplx x(0.0, 0.0);
    for (int l = 0; l < n_psi; ++l) {
      const double alpha = dpsi * l;
      const cplx e = std::polar(1.0, -alpha);
      for (int t = 0; t < n_rho; ++t) {
        x += dpsi * wg[t] * phi(std::polar(xg[t], alpha)) * e;
      }
    }
    acc += cplx(0.0, 1.0 / M_PI) * x.imag();
  }
  return acc;
}

cplx oracle_cell_exclusion(const ComplexField& phi, KernelId kid, cplx z) {
  const GridPtr& g = phi.grid;
  int hit = -1;
  for (int i = 0; i < g->node_count(); ++i) {
    if (std::abs(g->nodes[i] - z) < 1e-12) {
      hit = i;
      break;
    }
  }
  if (hit < 0) {
    throw std::invalid_argument("oracle_cell_exclusion: z must be a grid node");
  }
  const int ring = hit / g->angular_count;
  const double r = g->radial_nodes[ring];
  double dr = 0.0;
  if (ring > 0) dr = std::max(dr, r - g->radial_nodes[ring - 1]);
  if (ring + 1 < g->n_radial()) dr = std::max(dr, g->radial_nodes[ring + 1] - r);
  const double delta = 1.5 * std::max(dr, r * 2.0 * M_PI / g->angular_count);
  const cplx phi_z = phi.values[hit];

  cplx acc(0.0, 0.0);
  for (int i = 0; i < g->node_count(); ++i) {
    const cplx zeta = g->nodes[i];
    const cplx v = phi.values[i];
    const double w = g->weights[i];
    if (kid == KernelId::cauchy) {
      if (std::abs(zeta - z) >= delta) acc += w * v / (zeta - z);
      acc += w * (z * std::conj(v) / (1.0 - std::conj(zeta) * z) - v / (2.0 * zeta) +
                  std::conj(v) / (2.0 * std::conj(zeta)));
    } else {
      // Subtracting phi(z) makes the excluded-disk error first order; the
      // principal value of the bare kernel over the disk is zero.
      if (std::abs(zeta - z) >= delta) acc += w * (v - phi_z) / ipow(zeta - z, 2);
      acc += w * std::conj(v) / ipow(1.0 - std::conj(zeta) * z, 2);
    }
  }
  return acc * (-1.0 / M_PI);
}

}  // namespace diskcurv
