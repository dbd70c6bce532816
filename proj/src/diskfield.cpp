#include "diskcurv/diskfield.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace diskcurv {

double DiskGrid::theta(int j) const {
  return 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(angular_count);
}

GridPtr build_grid(int n_radial, int n_angular) {
  if (n_radial < 4) throw std::invalid_argument("build_grid: n_radial must be >= 4");
  if (n_angular < 8) throw std::invalid_argument("build_grid: n_angular must be >= 8");
  if (n_angular % 2 != 0) throw std::invalid_argument("build_grid: n_angular must be even");

  auto grid = std::make_shared<DiskGrid>();
  gauss_legendre_01(n_radial, grid->radial_nodes, grid->radial_weights);
  grid->radial_bary = barycentric_weights_gl(grid->radial_nodes, grid->radial_weights);
  grid->radial_diff = barycentric_diff_matrix(grid->radial_nodes, grid->radial_bary);
  grid->angular_count = n_angular;
  grid->boundary_ring_index = n_radial - 1;

  const double dtheta = 2.0 * M_PI / static_cast<double>(n_angular);
  grid->nodes.resize(static_cast<size_t>(n_radial) * n_angular);
  grid->weights.resize(grid->nodes.size());
  for (int i = 0; i < n_radial; ++i) {
    const double r = grid->radial_nodes[i];
    // Area element r dr dtheta: Gauss weight in r, trapezoid (uniform) in theta.
    const double w = grid->radial_weights[i] * r * dtheta;
    for (int j = 0; j < n_angular; ++j) {
      grid->nodes[grid->index(i, j)] = std::polar(r, grid->theta(j));
      grid->weights[grid->index(i, j)] = w;
    }
  }
  return grid;
}

ComplexField::ComplexField(GridPtr g) : grid(std::move(g)) {
  values.assign(grid->node_count(), cplx(0.0, 0.0));
}

ComplexField sample(const GridPtr& grid, const std::function<cplx(cplx)>& f) {
  ComplexField out(grid);
  for (int i = 0; i < grid->node_count(); ++i) out.values[i] = f(grid->nodes[i]);
  return out;
}

cplx integrate(const ComplexField& field) {
  cplx acc(0.0, 0.0);
  const int n = field.grid->node_count();
  for (int i = 0; i < n; ++i) acc += field.values[i] * field.grid->weights[i];
  return acc;
}

double lp_norm(const ComplexField& field, double p) {
  double acc = 0.0;
  const int n = field.grid->node_count();
  for (int i = 0; i < n; ++i) {
    acc += std::pow(std::abs(field.values[i]), p) * field.grid->weights[i];
  }
  return std::pow(acc, 1.0 / p);
}

double sup_norm(const ComplexField& field) {
  double m = 0.0;
  for (const cplx& v : field.values) m = std::max(m, std::abs(v));
  return m;
}

std::vector<cplx> ring_values(const ComplexField& field, int ring) {
  const int n = field.grid->angular_count;
  std::vector<cplx> out(n);
  for (int j = 0; j < n; ++j) out[j] = field.at(ring, j);
  return out;
}

std::vector<cplx> ring_modes(const ComplexField& field, int ring) {
  std::vector<cplx> modes = ring_values(field, ring);
  fft(modes, false);
  const double inv = 1.0 / static_cast<double>(modes.size());
  for (cplx& v : modes) v *= inv;
  return modes;
}

int mode_frequency(int m, int n) { return (m < n / 2) ? m : m - n; }

PolarDerivs polar_derivatives(const ComplexField& field) {
  const GridPtr& g = field.grid;
  const int nr = g->n_radial();
  const int na = g->angular_count;
  PolarDerivs out{ComplexField(g), ComplexField(g)};

  for (int i = 0; i < nr; ++i) {
    std::vector<cplx> modes = ring_values(field, i);
    fft(modes, false);
    for (int m = 0; m < na; ++m) {
      // The half-spectrum bin aliases +na/2 and -na/2; its derivative is
      // taken as zero (the symmetric choice) rather than picking a sign.
      const double freq = (2 * m == na) ? 0.0 : static_cast<double>(mode_frequency(m, na));
      modes[m] *= cplx(0.0, freq);
    }
    fft(modes, true);
    for (int j = 0; j < na; ++j) out.d_theta.at(i, j) = modes[j];
  }

  std::vector<cplx> col(nr);
  for (int j = 0; j < na; ++j) {
    for (int i = 0; i < nr; ++i) col[i] = field.at(i, j);
    for (int i = 0; i < nr; ++i) {
      cplx acc(0.0, 0.0);
      for (int l = 0; l < nr; ++l) acc += g->radial_diff(i, l) * col[l];
      out.d_r.at(i, j) = acc;
    }
  }
  return out;
}

WirtingerDerivs wirtinger_derivatives(const ComplexField& field) {
  const GridPtr& g = field.grid;
  PolarDerivs pd = polar_derivatives(field);
  WirtingerDerivs out{ComplexField(g), ComplexField(g)};
  for (int i = 0; i < g->n_radial(); ++i) {
    const double r = g->radial_nodes[i];
    for (int j = 0; j < g->angular_count; ++j) {
      const cplx eit = std::polar(1.0, g->theta(j));
      const cplx dr = pd.d_r.at(i, j);
      const cplx dt = pd.d_theta.at(i, j);
      out.d_z.at(i, j) = 0.5 * (dr - cplx(0.0, 1.0) * dt / r) / eit;
      out.d_zbar.at(i, j) = 0.5 * (dr + cplx(0.0, 1.0) * dt / r) * eit;
    }
  }
  return out;
}

GraphPatch::GraphPatch(std::vector<std::array<double, 2>> pts, std::vector<double> h)
    : uv_points(std::move(pts)), heights(std::move(h)) {
  if (uv_points.size() != heights.size()) {
    throw std::invalid_argument("GraphPatch: one height per point required");
  }
  if (uv_points.empty()) throw std::invalid_argument("GraphPatch: empty patch");
  double cu = 0.0, cv = 0.0;
  for (const auto& p : uv_points) {
    if (std::hypot(p[0], p[1]) >= 1.0) {
      throw std::invalid_argument("GraphPatch: points must lie in the open unit disk");
    }
    cu += p[0];
    cv += p[1];
  }
  cu /= static_cast<double>(uv_points.size());
  cv /= static_cast<double>(uv_points.size());
  for (const auto& p : uv_points) {
    scale = std::max(scale, std::hypot(p[0] - cu, p[1] - cv));
  }
  if (scale <= 0.0) throw std::invalid_argument("GraphPatch: degenerate point set");
  fd_step = 1e-3 * scale;
  const double mean_spacing =
      std::sqrt(M_PI * scale * scale / static_cast<double>(uv_points.size()));
  fit_radius = 4.0 * mean_spacing;
}

namespace {

struct LocalFit {
  double u0 = 0.0, v0 = 0.0, radius = 1.0;
  Eigen::VectorXd coef;  // cubic in the scaled offsets (x, y) = ((u-u0)/radius, (v-v0)/radius)

  double eval(double u, double v) const {
    const double x = (u - u0) / radius;
    const double y = (v - v0) / radius;
    return coef[0] + coef[1] * x + coef[2] * y + coef[3] * x * x + coef[4] * x * y +
           coef[5] * y * y + coef[6] * x * x * x + coef[7] * x * x * y +
           coef[8] * x * y * y + coef[9] * y * y * y;
  }
};

LocalFit fit_local(const GraphPatch& patch, double u, double v) {
  const double radius = patch.fit_radius;
  const double r2 = radius * radius;
  std::vector<int> idx;
  for (size_t i = 0; i < patch.uv_points.size(); ++i) {
    const double du = patch.uv_points[i][0] - u;
    const double dv = patch.uv_points[i][1] - v;
    if (du * du + dv * dv <= r2) idx.push_back(static_cast<int>(i));
  }
  if (idx.size() < 12) {
    throw std::domain_error("finite_difference_hessian: stencil outside the sampled patch");
  }

  Eigen::MatrixXd ata = Eigen::MatrixXd::Zero(10, 10);
  Eigen::VectorXd atb = Eigen::VectorXd::Zero(10);
  Eigen::VectorXd b(10);
  for (int i : idx) {
    const double x = (patch.uv_points[i][0] - u) / radius;
    const double y = (patch.uv_points[i][1] - v) / radius;
    const double d = std::hypot(x, y);
    const double t = std::max(0.0, 1.0 - d);
    const double wq = t * t * t * t * (4.0 * d + 1.0);  // Wendland C2 taper
    b << 1.0, x, y, x * x, x * y, y * y, x * x * x, x * x * y, x * y * y, y * y * y;
    ata.noalias() += wq * b * b.transpose();
    atb.noalias() += wq * patch.heights[i] * b;
  }
  ata.diagonal().array() += 1e-12 * ata.trace();

  LocalFit fit;
  fit.u0 = u;
  fit.v0 = v;
  fit.radius = radius;
  fit.coef = ata.ldlt().solve(atb);
  return fit;
}

}  // namespace

double patch_eval(const GraphPatch& patch, double u, double v) {
  return fit_local(patch, u, v).eval(u, v);
}

HessianResult finite_difference_hessian(const GraphPatch& patch, double u, double v) {
  const LocalFit fit = fit_local(patch, u, v);
  const double h = patch.fd_step;

  const double fpp = fit.eval(u + h, v + h);
  const double fpm = fit.eval(u + h, v - h);
  const double fmp = fit.eval(u - h, v + h);
  const double fmm = fit.eval(u - h, v - h);
  const double fp0 = fit.eval(u + h, v);
  const double fm0 = fit.eval(u - h, v);
  const double f0p = fit.eval(u, v + h);
  const double f0m = fit.eval(u, v - h);
  const double f00 = fit.eval(u, v);

  HessianResult res;
  res.step = h;
  res.f_u = (fp0 - fm0) / (2.0 * h);
  res.f_v = (f0p - f0m) / (2.0 * h);
  res.f_uu = (fp0 - 2.0 * f00 + fm0) / (h * h);
  res.f_vv = (f0p - 2.0 * f00 + f0m) / (h * h);
  res.f_uv = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
  return res;
}

}  // namespace diskcurv
