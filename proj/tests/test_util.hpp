#pragma once

#include <complex>
#include <random>
#include <vector>

#include "diskcurv/diskfield.hpp"

namespace testutil {

inline double cdist(std::complex<double> a, std::complex<double> b) {
  return std::abs(a - b);
}

// Random bivariate polynomial sum c_{mn} z^m conj(z)^n of total degree <= deg,
// with coefficients in the unit square; deterministic in the seed.
struct RandomPolyField {
  std::vector<std::tuple<int, int, std::complex<double>>> terms;

  RandomPolyField(int deg, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int m = 0; m <= deg; ++m) {
      for (int n = 0; m + n <= deg; ++n) {
        terms.emplace_back(m, n, std::complex<double>(unif(rng), unif(rng)));
      }
    }
  }

  std::complex<double> operator()(std::complex<double> z) const {
    std::complex<double> acc(0.0, 0.0);
    for (const auto& [m, n, c] : terms) {
      acc += c * std::pow(z, m) * std::pow(std::conj(z), n);
    }
    return acc;
  }
};

}  // namespace testutil
