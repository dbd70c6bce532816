#include "diskcurv/beltrami.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace diskcurv {

namespace {

struct SampledCoefficient {
  std::vector<cplx> omega;        // omega at the nodes
  std::vector<cplx> factor;       // conj(omega(z)) / z at the nodes
  int n_fine = 0;                 // oversampled angle count, a power of two
  std::vector<cplx> factor_fine;  // conj(omega(z)) / z on the oversampled rings
};

// Power-of-two angle count with at least 4x oversampling, so that products of
// band-limited ring spectra can be formed without wrap-around.
int oversampled_count(int n_angular) {
  int nf = 1;
  while (nf < 4 * n_angular) nf *= 2;
  return nf;
}

SampledCoefficient sample_coefficient(const DiskGrid& grid, const BeltramiCoefficient& om) {
  if (!om.evaluator) throw std::invalid_argument("Beltrami coefficient has no evaluator");
  if (om.sup_bound < 0.0 || om.sup_bound >= 1.0) {
    throw std::invalid_argument("Beltrami coefficient sup bound must lie in [0, 1)");
  }
  SampledCoefficient sc;
  sc.omega.resize(grid.nodes.size());
  sc.factor.resize(grid.nodes.size());
  for (size_t i = 0; i < grid.nodes.size(); ++i) {
    const cplx w = om.evaluator(grid.nodes[i]);
    if (std::abs(w) > om.sup_bound + 1e-9) {
      std::ostringstream msg;
      msg << "dilatation exceeds its declared sup bound at a node: |omega| = " << std::abs(w)
          << " > " << om.sup_bound;
      throw std::invalid_argument(msg.str());
    }
    sc.omega[i] = w;
    sc.factor[i] = std::conj(w) / grid.nodes[i];
  }
  sc.n_fine = oversampled_count(grid.angular_count);
  sc.factor_fine.resize(static_cast<size_t>(grid.n_radial()) * sc.n_fine);
  for (int ring = 0; ring < grid.n_radial(); ++ring) {
    const double r = grid.radial_nodes[ring];
    for (int j = 0; j < sc.n_fine; ++j) {
      const cplx z = std::polar(r, 2.0 * M_PI * j / sc.n_fine);
      sc.factor_fine[static_cast<size_t>(ring) * sc.n_fine + j] = std::conj(om.evaluator(z)) / z;
    }
  }
  return sc;
}

void require_normalized(const BeltramiCoefficient& om) {
  if (std::abs(om.value_at_0) > 1e-12) {
    throw std::invalid_argument(
        "dilatation must vanish at the origin; apply normalize_dilatation first");
  }
}

// One application of the T operator.  The multiplier exp(-2i Im P) and the
// bracket are nonlinear in the band-limited iterate, so forming their product
// on the grid's own angles would fold the spillover spectrum back into the
// retained band; at crowded rim rings that folding is O(1).  Each ring is
// therefore synthesized on the oversampled angle set, the product is taken
// there, and only the modes the grid can actually carry are kept.
ComplexField t_step(const OperatorBackend& backend, const SampledCoefficient& sc,
                    const ComplexField& phi, TVariant variant) {
  ComplexField p, h;
  backend.apply_fields(phi, &p, &h);
  const GridPtr grid = phi.grid;
  const int na = grid->angular_count;
  const int nr = grid->n_radial();
  const int nf = sc.n_fine;
  const int keep = na / 2 - 1;
  ComplexField out(grid);
  std::vector<cplx> ring_p(na), ring_h(na), fine_p(nf), fine_h(nf), fine_t(nf), coarse(na);
  for (int ring = 0; ring < nr; ++ring) {
    const double r = grid->radial_nodes[ring];
    for (int j = 0; j < na; ++j) {
      ring_p[j] = p.values[grid->index(ring, j)];
      ring_h[j] = h.values[grid->index(ring, j)];
    }
    // P and H are band-limited in theta, so their na-point spectra are exact.
    fft(ring_p, false);
    fft(ring_h, false);
    std::fill(fine_p.begin(), fine_p.end(), cplx(0.0, 0.0));
    std::fill(fine_h.begin(), fine_h.end(), cplx(0.0, 0.0));
    const double upscale = static_cast<double>(nf) / na;
    for (int m = 0; m < na; ++m) {
      const int freq = m <= na / 2 ? m : m - na;
      const int slot = (freq + nf) % nf;
      fine_p[slot] = ring_p[m] * upscale;
      fine_h[slot] = ring_h[m] * upscale;
    }
    fft(fine_p, true);
    fft(fine_h, true);
    for (int j = 0; j < nf; ++j) {
      const cplx z = std::polar(r, 2.0 * M_PI * j / nf);
      const cplx mult = std::polar(1.0, -2.0 * fine_p[j].imag());
      const cplx bracket = (variant == TVariant::as_printed)
                               ? cplx(1.0, 0.0) + std::conj(z) * fine_h[j]
                               : cplx(1.0, 0.0) + std::conj(z * fine_h[j]);
      fine_t[j] = sc.factor_fine[static_cast<size_t>(ring) * nf + j] * mult * bracket;
    }
    fft(fine_t, false);
    std::fill(coarse.begin(), coarse.end(), cplx(0.0, 0.0));
    const double downscale = static_cast<double>(na) / nf;
    for (int freq = -keep; freq <= keep; ++freq) {
      coarse[(freq + na) % na] = fine_t[(freq + nf) % nf] * downscale;
    }
    fft(coarse, true);
    for (int j = 0; j < na; ++j) out.values[grid->index(ring, j)] = coarse[j];
  }
  return out;
}

SolvedMap solve_one_variant(const OperatorBackend& backend, const BeltramiCoefficient& omega,
                            const SolveOptions& opts, TVariant variant) {
  const GridPtr grid = backend.grid();
  const SampledCoefficient sc = sample_coefficient(*grid, omega);
  double lambda = opts.damping > 0.0 ? opts.damping : (omega.sup_bound <= 0.7 ? 1.0 : 0.5);

  ComplexField phi(grid);
  std::vector<double> history;
  history.reserve(64);
  int grow_streak = 0;
  double prev_delta = std::numeric_limits<double>::infinity();
  bool converged = false;
  int iterations = 0;

  for (int n = 0; n < opts.max_iter; ++n) {
    const ComplexField t = t_step(backend, sc, phi, variant);
    ComplexField next(grid);
    ComplexField step(grid);
    for (size_t i = 0; i < phi.values.size(); ++i) {
      next.values[i] = (1.0 - lambda) * phi.values[i] + lambda * t.values[i];
      step.values[i] = next.values[i] - phi.values[i];
    }
    const double delta = lp_norm(step, 4.0);
    history.push_back(delta);
    phi = std::move(next);
    iterations = n + 1;
    if (!std::isfinite(delta)) {
      throw SolverError("fixed-point iteration produced a non-finite step", history);
    }
    if (delta < opts.tol) {
      converged = true;
      break;
    }
    if (delta > prev_delta) {
      if (++grow_streak >= 8) {
        lambda = std::max(0.5 * lambda, 0.1);
        grow_streak = 0;
      }
    } else {
      grow_streak = 0;
    }
    prev_delta = delta;
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "fixed-point iteration did not reach tolerance " << opts.tol << " in "
        << opts.max_iter << " iterations (last step " << history.back() << ")";
    throw SolverError(msg.str(), history);
  }

  SolvedMap map;
  map.phi = phi;
  map.dilatation = omega;
  map.iterations = iterations;
  map.variant_flag = variant;
  map.step_history = history;
  map.tail_monotone = true;
  for (size_t n = 2; n < history.size(); ++n) {
    if (history[n] > history[n - 1] * (1.0 + 1e-12)) map.tail_monotone = false;
  }

  ComplexField p;
  backend.apply_fields(phi, &p, nullptr);
  map.f_values = ComplexField(grid);
  for (size_t i = 0; i < grid->nodes.size(); ++i) {
    map.f_values.values[i] = grid->nodes[i] * std::exp(p.values[i]);
  }
  map.f_z_at_0 = std::exp(P_at_origin(phi));

  double max_mod = 0.0;
  double min_boundary = std::numeric_limits<double>::infinity();
  for (int j = 0; j < grid->angular_count; ++j) {
    min_boundary = std::min(min_boundary, std::abs(map.f_values.at(grid->boundary_ring_index, j)));
  }
  for (const cplx& v : map.f_values.values) max_mod = std::max(max_mod, std::abs(v));
  if (max_mod > 1.0 + 1e-2 || min_boundary < 1.0 - 5e-2) {
    std::ostringstream msg;
    msg << "converged map is not a disk self-map: max |f| = " << max_mod
        << ", boundary-ring min |f| = " << min_boundary;
    throw SolverError(msg.str(), history);
  }

  map.residual_norm = beltrami_residual(map.f_values, omega);
  map.residual_norm_full = beltrami_residual(map.f_values, omega, 1.0);
  return map;
}

}  // namespace

BeltramiCoefficient make_beltrami(std::function<cplx(cplx)> evaluator, double sup_bound) {
  BeltramiCoefficient om;
  om.evaluator = std::move(evaluator);
  om.sup_bound = sup_bound;
  om.value_at_0 = om.evaluator(cplx(0.0, 0.0));
  return om;
}

const char* variant_name(TVariant v) {
  switch (v) {
    case TVariant::as_printed:
      return "as_printed";
    case TVariant::conjugated:
      return "conjugated";
    default:
      return "auto";
  }
}

TVariant parse_variant(const std::string& name) {
  if (name == "printed" || name == "as_printed") return TVariant::as_printed;
  if (name == "conjugated") return TVariant::conjugated;
  if (name == "auto" || name == "automatic") return TVariant::automatic;
  throw std::invalid_argument("unknown T-variant name: " + name);
}

SolverError::SolverError(const std::string& what, std::vector<double> history)
    : std::runtime_error(what), history_(std::move(history)) {}

ComplexField apply_T(const OperatorBackend& backend, const BeltramiCoefficient& omega,
                     const ComplexField& phi, TVariant variant) {
  if (variant == TVariant::automatic) {
    throw std::invalid_argument("apply_T needs a concrete variant, not automatic");
  }
  require_normalized(omega);
  const SampledCoefficient sc = sample_coefficient(*backend.grid(), omega);
  return t_step(backend, sc, phi, variant);
}

SolvedMap solve_fixed_point(const OperatorBackend& backend, const BeltramiCoefficient& omega,
                            const SolveOptions& opts) {
  require_normalized(omega);
  if (omega.sup_bound > 0.97) {
    throw std::invalid_argument(
        "sup bound above 0.97 refused: operator conditioning degrades near 1");
  }
  if (opts.tol <= 0.0 || opts.max_iter < 1) {
    throw std::invalid_argument("solver tolerance and iteration budget must be positive");
  }
  if (opts.variant != TVariant::automatic) {
    return solve_one_variant(backend, omega, opts, opts.variant);
  }

  SolvedMap conj_map;
  bool conj_ok = false;
  std::string conj_error;
  try {
    conj_map = solve_one_variant(backend, omega, opts, TVariant::conjugated);
    conj_ok = true;
  } catch (const SolverError& e) {
    conj_error = e.what();
  }
  SolvedMap printed_map;
  bool printed_ok = false;
  try {
    printed_map = solve_one_variant(backend, omega, opts, TVariant::as_printed);
    printed_ok = true;
  } catch (const SolverError&) {
  }

  if (conj_ok && printed_ok) {
    if (conj_map.residual_norm <= printed_map.residual_norm) {
      conj_map.rejected_variant_residual = printed_map.residual_norm;
      return conj_map;
    }
    printed_map.rejected_variant_residual = conj_map.residual_norm;
    return printed_map;
  }
  if (conj_ok) {
    conj_map.rejected_variant_residual = std::numeric_limits<double>::infinity();
    return conj_map;
  }
  if (printed_ok) {
    printed_map.rejected_variant_residual = std::numeric_limits<double>::infinity();
    return printed_map;
  }
  throw SolverError("neither T-variant converged: " + conj_error, {});
}

std::pair<BeltramiCoefficient, cplx> normalize_dilatation(const BeltramiCoefficient& omega) {
  const cplx w0 = omega.value_at_0;
  if (std::abs(w0) >= 1.0) {
    throw std::invalid_argument("|omega(0)| must be below 1");
  }
  if (std::abs(w0) < 1e-15) {
    return {omega, cplx(0.0, 0.0)};
  }
  BeltramiCoefficient shifted;
  auto base = omega.evaluator;
  shifted.evaluator = [base, w0](cplx z) {
    const cplx w = base(z);
    return (w - w0) / (1.0 - std::conj(w0) * w);
  };
  const double k = omega.sup_bound;
  const double a = std::abs(w0);
  shifted.sup_bound = (k + a) / (1.0 + k * a);
  shifted.value_at_0 = cplx(0.0, 0.0);
  shifted.has_family_tag = omega.has_family_tag;
  shifted.family_w = omega.family_w;
  shifted.family_k = omega.family_k;
  return {shifted, w0};
}

SolvedMap denormalize_map(const SolvedMap& f_tilde, cplx omega0) {
  if (std::abs(omega0) >= 1.0) {
    throw std::invalid_argument("|omega(0)| must be below 1");
  }
  if (std::abs(omega0) == 0.0) {
    return f_tilde;
  }
  const double denom = 1.0 - std::norm(omega0);

  SolvedMap out = f_tilde;
  for (cplx& v : out.f_values.values) {
    v = (v + std::conj(omega0) * std::conj(v)) / denom;
  }
  out.f_z_at_0 = f_tilde.f_z_at_0 / denom;

  BeltramiCoefficient original;
  auto shifted_eval = f_tilde.dilatation.evaluator;
  original.evaluator = [shifted_eval, omega0](cplx z) {
    const cplx wt = shifted_eval(z);
    return (wt + omega0) / (1.0 + std::conj(omega0) * wt);
  };
  const double kt = f_tilde.dilatation.sup_bound;
  const double a = std::abs(omega0);
  original.sup_bound = std::min((kt + a) / (1.0 + kt * a), 0.999999);
  original.value_at_0 = omega0;
  original.has_family_tag = f_tilde.dilatation.has_family_tag;
  original.family_w = f_tilde.dilatation.family_w;
  original.family_k = f_tilde.dilatation.family_k;
  out.dilatation = original;

  out.residual_norm = beltrami_residual(out.f_values, original);
  out.residual_norm_full = beltrami_residual(out.f_values, original, 1.0);
  if (out.residual_norm > 10.0 * std::max(f_tilde.residual_norm, 1e-10)) {
    std::ostringstream msg;
    msg << "denormalization degraded the Beltrami residual from " << f_tilde.residual_norm
        << " to " << out.residual_norm << "; omega0 is inconsistent with the solved map";
    throw std::runtime_error(msg.str());
  }
  return out;
}

MapCoefficients extract_coefficients(const SolvedMap& map) {
  const GridPtr grid = map.f_values.grid;
  if (!grid) throw std::invalid_argument("map has no grid");
  const int nr = grid->n_radial();
  const int na = grid->angular_count;

  auto nearest_ring = [&](double target) {
    int best = 0;
    for (int i = 1; i < nr; ++i) {
      if (std::abs(grid->radial_nodes[i] - target) <
          std::abs(grid->radial_nodes[best] - target)) {
        best = i;
      }
    }
    return best;
  };
  int i1 = nearest_ring(0.2);
  int i2 = nearest_ring(0.35);
  if (i1 == i2) i2 = std::min(i1 + 1, nr - 1);

  cplx f0[2], a1f[2], b1f[2];
  const int rings[2] = {i1, i2};
  for (int t = 0; t < 2; ++t) {
    const std::vector<cplx> modes = ring_modes(map.f_values, rings[t]);
    const double r = grid->radial_nodes[rings[t]];
    f0[t] = modes[0];
    a1f[t] = modes[1] / r;
    b1f[t] = std::conj(modes[na - 1]) / r;
  }

  MapCoefficients coeffs;
  coeffs.a0 = 0.5 * (f0[0] + f0[1]);
  coeffs.a1 = cplx(map.f_z_at_0, 0.0);
  coeffs.b1 = 0.5 * (b1f[0] + b1f[1]);

  const cplx a1_fourier = 0.5 * (a1f[0] + a1f[1]);
  double noise = std::abs(f0[0] - f0[1]);
  noise = std::max(noise, std::abs(a1f[0] - a1f[1]));
  noise = std::max(noise, std::abs(b1f[0] - b1f[1]));
  noise = std::max(noise, std::abs(a1_fourier - coeffs.a1));
  const double threshold = std::max(5e-3, 30.0 * map.residual_norm);
  if (noise > threshold) {
    std::ostringstream msg;
    msg << "coefficient extraction: ring Fourier data is inconsistent (spread " << noise
        << " exceeds " << threshold << "); the map looks noisy";
    throw std::runtime_error(msg.str());
  }
  return coeffs;
}

std::vector<double> beltrami_residual_profile(const ComplexField& f,
                                              const BeltramiCoefficient& omega) {
  const GridPtr grid = f.grid;
  const WirtingerDerivs d = wirtinger_derivatives(f);
  std::vector<double> profile(grid->radial_nodes.size(), 0.0);
  for (std::size_t ring = 0; ring < profile.size(); ++ring) {
    double worst = 0.0;
    for (int j = 0; j < grid->angular_count; ++j) {
      const int i = grid->index(static_cast<int>(ring), j);
      const cplx w = omega.evaluator(grid->nodes[i]);
      const cplx r = std::conj(d.d_zbar.values[i]) - w * d.d_z.values[i];
      worst = std::max(worst, std::abs(r));
    }
    profile[ring] = worst;
  }
  return profile;
}

double beltrami_residual(const ComplexField& f, const BeltramiCoefficient& omega,
                         double max_radius) {
  const GridPtr grid = f.grid;
  const std::vector<double> profile = beltrami_residual_profile(f, omega);
  double worst = 0.0;
  for (int ring = 0; ring < grid->boundary_ring_index; ++ring) {
    if (grid->radial_nodes[ring] > max_radius) continue;
    worst = std::max(worst, profile[ring]);
  }
  return worst;
}

ComplexField unit_phase_factor(const OperatorBackend& backend, const ComplexField& phi) {
  ComplexField p;
  backend.apply_fields(phi, &p, nullptr);
  ComplexField out(phi.grid);
  for (size_t i = 0; i < p.values.size(); ++i) {
    out.values[i] = std::polar(1.0, -2.0 * p.values[i].imag());
  }
  return out;
}

double harmonicity_residual(const ComplexField& f) {
  const GridPtr grid = f.grid;
  const PolarDerivs d1 = polar_derivatives(f);
  const PolarDerivs drr = polar_derivatives(d1.d_r);
  const PolarDerivs dtt = polar_derivatives(d1.d_theta);
  double worst = 0.0;
  for (int ring = 0; ring < grid->n_radial(); ++ring) {
    const double r = grid->radial_nodes[ring];
    if (r < 0.1 || r > 0.95) continue;
    for (int j = 0; j < grid->angular_count; ++j) {
      const int i = grid->index(ring, j);
      const cplx lap =
          drr.d_r.values[i] + d1.d_r.values[i] / r + dtt.d_theta.values[i] / (r * r);
      worst = std::max(worst, std::abs(lap));
    }
  }
  return worst;
}

}  // namespace diskcurv
