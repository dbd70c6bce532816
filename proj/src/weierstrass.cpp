#include "diskcurv/weierstrass.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace diskcurv {

FamilyParameter make_family_parameter(cplx w, double k) {
  if (std::abs(w) >= 1.0) {
    throw std::invalid_argument("make_family_parameter: |w| must be < 1");
  }
  if (k < 0.0 || k >= 1.0) {
    throw std::invalid_argument("make_family_parameter: k must lie in [0, 1)");
  }
  return FamilyParameter{w, k};
}

cplx family_phase(const FamilyParameter& par) {
  const cplx num = cplx(0.0, 1.0) * (cplx(1.0, 0.0) - ipow(par.w, 4));
  return num / std::abs(num);
}

cplx gauss_map_q(cplx z, const FamilyParameter& par) {
  const cplx kt = par.k * family_phase(par);
  return (par.w + kt * z) / (cplx(1.0, 0.0) + kt * std::conj(par.w) * z);
}

cplx gauss_map_q_prime(cplx z, const FamilyParameter& par) {
  // Moebius derivative: (ad - bc)/(cz + d)^2 with a = k tau, b = w,
  // c = k tau conj(w), d = 1.
  const cplx kt = par.k * family_phase(par);
  const cplx den = cplx(1.0, 0.0) + kt * std::conj(par.w) * z;
  return kt * (1.0 - std::norm(par.w)) / (den * den);
}

cplx mu_k(cplx z, const FamilyParameter& par) {
  const cplx q = gauss_map_q(z, par);
  return q * q;
}

double mu_k_sup_bound(const FamilyParameter& par) {
  const double a = std::abs(par.w);
  const double m = (a + par.k) / (1.0 + a * par.k);
  return m * m;
}

BeltramiCoefficient family_coefficient(const FamilyParameter& par) {
  BeltramiCoefficient om =
      make_beltrami([par](cplx z) { return mu_k(z, par); }, mu_k_sup_bound(par));
  om.has_family_tag = true;
  om.family_w = par.w;
  om.family_k = par.k;
  return om;
}

std::vector<cplx> RingModeTable::profiles_at(double r) const {
  const int nr = grid->n_radial();
  const int na = grid->angular_count;
  const std::vector<double> row = barycentric_row(grid->radial_nodes, grid->radial_bary, r);
  std::vector<cplx> modes(na, cplx(0.0, 0.0));
  for (int m = 0; m < na; ++m) {
    cplx acc(0.0, 0.0);
    const cplx* prof = &tab[static_cast<size_t>(m) * nr];
    for (int i = 0; i < nr; ++i) acc += row[i] * prof[i];
    modes[m] = acc;
  }
  return modes;
}

cplx RingModeTable::eval(cplx z) const {
  if (z == cplx(0.0, 0.0)) return at_zero;
  const int na = grid->angular_count;
  const double theta = std::arg(z);
  const std::vector<cplx> modes = profiles_at(std::abs(z));
  cplx acc(0.0, 0.0);
  for (int m = 0; m < na; ++m) {
    acc += modes[m] * std::polar(1.0, mode_frequency(m, na) * theta);
  }
  return acc;
}

RingModeTable build_mode_table(const ComplexField& field, cplx at_zero) {
  const GridPtr& g = field.grid;
  const int nr = g->n_radial();
  const int na = g->angular_count;
  RingModeTable table;
  table.grid = g;
  table.at_zero = at_zero;
  table.tab.resize(static_cast<size_t>(nr) * na);
  for (int i = 0; i < nr; ++i) {
    const std::vector<cplx> modes = ring_modes(field, i);
    for (int m = 0; m < na; ++m) table.tab[static_cast<size_t>(m) * nr + i] = modes[m];
  }
  return table;
}

namespace {

WeierstrassData assemble_data(std::shared_ptr<const SolvedMap> map,
                              std::function<cplx(cplx)> q, std::function<cplx(cplx)> q_prime) {
  if (!map) throw std::invalid_argument("make_weierstrass_data: null source map");
  if (!map->dilatation.evaluator) {
    throw std::invalid_argument("make_weierstrass_data: source map carries no dilatation");
  }

  const GridPtr& g = map->f_values.grid;
  double worst = 0.0;
  for (const cplx& z : g->nodes) {
    const cplx qz = q(z);
    worst = std::max(worst, std::abs(qz * qz - map->dilatation.evaluator(z)));
  }
  if (worst > 1e-6) {
    throw std::invalid_argument(
        "make_weierstrass_data: q^2 deviates from the map's dilatation by " +
        std::to_string(worst));
  }

  WeierstrassData data;
  data.source_map = map;
  data.q = std::move(q);
  data.q_prime = std::move(q_prime);
  data.f_modes = std::make_shared<RingModeTable>(
      build_mode_table(map->f_values, cplx(0.0, 0.0)));
  const WirtingerDerivs wd = wirtinger_derivatives(map->f_values);
  // f_z(0) is known exactly from the solve; the interpolant only covers the
  // open rings, so the table's center value carries that limit explicitly.
  data.p_modes = std::make_shared<RingModeTable>(
      build_mode_table(wd.d_z, cplx(map->f_z_at_0, 0.0)));
  auto p_table = data.p_modes;
  data.p = [p_table](cplx z) { return p_table->eval(z); };
  return data;
}

}  // namespace

WeierstrassData make_weierstrass_data(std::shared_ptr<const SolvedMap> map,
                                      const FamilyParameter& par) {
  WeierstrassData data = assemble_data(
      std::move(map), [par](cplx z) { return gauss_map_q(z, par); },
      [par](cplx z) { return gauss_map_q_prime(z, par); });
  data.has_family = true;
  data.family = par;
  return data;
}

WeierstrassData make_weierstrass_data(std::shared_ptr<const SolvedMap> map,
                                      std::function<cplx(cplx)> q) {
  auto q_copy = q;
  auto q_diff = [q_copy](cplx z) {
    const double h = 1e-5;
    return (q_copy(z + h) - q_copy(z - h)) / (2.0 * h);
  };
  return assemble_data(std::move(map), std::move(q), std::move(q_diff));
}

double curvature(cplx z, const WeierstrassData& data) {
  const cplx p = data.p(z);
  if (std::abs(p) < 1e-12) {
    throw std::domain_error(
        "curvature: p(z) = 0 is a branch point of the graph (curvature pole)");
  }
  const cplx q = data.q(z);
  const cplx qp = data.q_prime(z);
  return -4.0 * std::norm(qp) / (std::norm(p) * ipow(1.0 + std::norm(q), 4));
}

double curvature_at_origin_family(const FamilyParameter& par, double f_z0) {
  if (!(f_z0 > 0.0)) {
    throw std::invalid_argument("curvature_at_origin_family: f_z0 must be positive");
  }
  const cplx qp0 = gauss_map_q_prime(cplx(0.0, 0.0), par);
  return -4.0 * std::norm(qp0) / (f_z0 * f_z0 * ipow(1.0 + std::norm(par.w), 4));
}

std::array<double, 3> unit_normal_from_q(cplx q) {
  const double d = 1.0 + std::norm(q);
  return {-2.0 * q.imag() / d, -2.0 * q.real() / d, (1.0 - std::norm(q)) / d};
}

std::array<double, 3> unit_normal(cplx z, const WeierstrassData& data) {
  return unit_normal_from_q(data.q(z));
}

cplx height_integral_segment(const WeierstrassData& data, cplx z0, cplx z1) {
  std::vector<double> gx, gw;
  gauss_legendre_01(16, gx, gw);
  const cplx d = z1 - z0;
  cplx acc(0.0, 0.0);
  for (size_t l = 0; l < gx.size(); ++l) {
    const cplx zeta = z0 + gx[l] * d;
    acc += gw[l] * 2.0 * data.p(zeta) * data.q(zeta);
  }
  return acc * d;
}

double triangle_loop_defect(const WeierstrassData& data, cplx a, cplx b, cplx c) {
  return std::abs(height_integral_segment(data, a, b) + height_integral_segment(data, b, c) +
                  height_integral_segment(data, c, a));
}

namespace {

// Inverse DFT of the modes representable at na_out uniform angles; an exact
// roundtrip when the angle counts agree.
std::vector<cplx> synthesize_angles(const std::vector<cplx>& modes, int na_in, int na_out) {
  std::vector<cplx> padded(na_out, cplx(0.0, 0.0));
  for (int m = 0; m < na_in; ++m) {
    const int f = mode_frequency(m, na_in);
    if (f < -na_out / 2 || f > na_out / 2 - 1) continue;
    padded[(f + na_out) % na_out] = modes[m];
  }
  fft(padded, true);
  for (cplx& v : padded) v *= static_cast<double>(na_out);
  return padded;
}

}  // namespace

std::vector<SurfaceSample> parameterize_surface(const WeierstrassData& data,
                                                const GridPtr& grid) {
  if (!grid) throw std::invalid_argument("parameterize_surface: null grid");
  if (!data.source_map || !data.f_modes || !data.p_modes) {
    throw std::invalid_argument(
        "parameterize_surface: data lacks a solved source map; build it with "
        "make_weierstrass_data");
  }

  // The height is Im of an integral of the analytic function 2 p q, so closed
  // loops must vanish.  Checking a few interior triangles before integrating
  // turns a corrupted p interpolant into a hard error instead of a warped
  // surface.
  const cplx tri[3][3] = {
      {cplx(0.2, 0.0), cplx(0.0, 0.55), cplx(-0.35, -0.2)},
      {cplx(0.5, 0.0), cplx(-0.3, 0.4), cplx(-0.1, -0.45)},
      {cplx(0.65, 0.0), cplx(0.0, 0.65), cplx(-0.65, 0.0)},
  };
  for (const auto& t : tri) {
    const double defect = triangle_loop_defect(data, t[0], t[1], t[2]);
    if (defect > 1e-4) {
      throw std::runtime_error(
          "parameterize_surface: closed-loop height integral " + std::to_string(defect) +
          " exceeds 1e-4 (path-dependent integrand, integration inconsistency)");
    }
  }

  const int nr = grid->n_radial();
  const int na = grid->angular_count;
  const int na_src = data.f_modes->grid->angular_count;

  std::vector<double> gx, gw;
  gauss_legendre_01(8, gx, gw);

  // Heights: accumulate Int 2 p q dzeta along each ray theta_j = const with a
  // Gauss rule per radial segment [r_{i-1}, r_i].  Every quadrature radius is
  // evaluated for all angles at once -- interpolate the mode profiles once,
  // then synthesize across the ring -- which keeps the cost linear in the
  // number of quadrature radii.
  std::vector<double> heights(static_cast<size_t>(nr) * na, 0.0);
  std::vector<cplx> running(na, cplx(0.0, 0.0));
  std::vector<cplx> phase(na);
  for (int j = 0; j < na; ++j) phase[j] = std::polar(1.0, grid->theta(j));
  double r_prev = 0.0;
  for (int i = 0; i < nr; ++i) {
    const double r_next = grid->radial_nodes[i];
    const double dr = r_next - r_prev;
    for (size_t l = 0; l < gx.size(); ++l) {
      const double rho = r_prev + gx[l] * dr;
      const std::vector<cplx> pv =
          synthesize_angles(data.p_modes->profiles_at(rho), na_src, na);
      for (int j = 0; j < na; ++j) {
        const cplx zeta = rho * phase[j];
        running[j] += gw[l] * dr * 2.0 * pv[j] * data.q(zeta) * phase[j];
      }
    }
    for (int j = 0; j < na; ++j) heights[grid->index(i, j)] = running[j].imag();
    r_prev = r_next;
  }

  std::vector<SurfaceSample> samples;
  samples.reserve(static_cast<size_t>(nr) * na + 1);

  SurfaceSample center;
  center.z = cplx(0.0, 0.0);
  center.position = {0.0, 0.0, 0.0};
  center.normal = unit_normal_from_q(data.q(cplx(0.0, 0.0)));
  center.gauss_curvature = curvature(cplx(0.0, 0.0), data);
  samples.push_back(center);

  for (int i = 0; i < nr; ++i) {
    const double r = grid->radial_nodes[i];
    const std::vector<cplx> fv =
        synthesize_angles(data.f_modes->profiles_at(r), na_src, na);
    const std::vector<cplx> pv =
        synthesize_angles(data.p_modes->profiles_at(r), na_src, na);
    for (int j = 0; j < na; ++j) {
      SurfaceSample s;
      s.z = grid->nodes[grid->index(i, j)];
      s.position = {fv[j].real(), fv[j].imag(), heights[grid->index(i, j)]};
      const cplx q = data.q(s.z);
      const cplx qp = data.q_prime(s.z);
      s.normal = unit_normal_from_q(q);
      if (std::abs(pv[j]) < 1e-12) {
        throw std::domain_error(
            "parameterize_surface: p vanishes at a sample (curvature pole)");
      }
      s.gauss_curvature =
          -4.0 * std::norm(qp) / (std::norm(pv[j]) * ipow(1.0 + std::norm(q), 4));
      samples.push_back(s);
    }
  }
  return samples;
}

GraphPatch reconstruct_graph(const std::vector<SurfaceSample>& samples) {
  // A patch lives over the open unit disk, while a denormalized map carries
  // the disk onto an ellipse whose long axis exceeds 1; the overhang is
  // dropped, restricting the graph to the disk.
  std::vector<std::array<double, 2>> uv;
  std::vector<double> h;
  uv.reserve(samples.size());
  h.reserve(samples.size());
  for (const SurfaceSample& s : samples) {
    if (std::hypot(s.position[0], s.position[1]) >= 1.0) continue;
    uv.push_back({s.position[0], s.position[1]});
    h.push_back(s.position[2]);
  }
  const size_t n = uv.size();

  // Fold-over scan: a graph admits one height per planar point.  Sweep in u
  // (sorted) so only near-collisions are compared; the tolerances sit far
  // below the node spacing of any practical grid but far above roundoff.
  const double tol_xy = 1e-6;
  const double tol_h = 1e-4;
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&uv](size_t a, size_t b) { return uv[a][0] < uv[b][0]; });
  for (size_t a = 0; a < n; ++a) {
    for (size_t b = a + 1; b < n; ++b) {
      const size_t ia = order[a], ib = order[b];
      if (uv[ib][0] - uv[ia][0] > tol_xy) break;
      if (std::abs(uv[ib][1] - uv[ia][1]) > tol_xy) continue;
      if (std::abs(h[ib] - h[ia]) > tol_h) {
        throw std::domain_error(
            "reconstruct_graph: two samples project to the same planar point with "
            "different heights (projection folds over, not a graph)");
      }
    }
  }
  return GraphPatch(std::move(uv), std::move(h));
}

}  // namespace diskcurv
