#pragma once

// Level-spacing samplers and synthetic spectra.

#include "cens/core.hpp"

#include <array>
#include <memory>

namespace cens {

enum class SpacingDist { poisson, wigner_dyson, custom };

// CDF of the unitary Wigner surmise (32/pi^2) s^2 exp(-4 s^2/pi).
inline double wigner_dyson_cdf(double s) {
  return std::erf(2.0 * s / std::sqrt(kPi)) - 4.0 * s / kPi * std::exp(-4.0 * s * s / kPi);
}

namespace detail {
struct InverseCdfTable {
  static constexpr int n = 1 << 14;
  static constexpr double smax = 6.0;
  std::vector<double> s, c;
  InverseCdfTable() {
    s.resize(n + 1);
    c.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
      s[i] = smax * i / n;
      c[i] = wigner_dyson_cdf(s[i]);
    }
    c[n] = 1.0;
  }
  double inverse(double u) const {
    auto it = std::upper_bound(c.begin(), c.end(), u);
    long k = std::clamp<long>(it - c.begin(), 1, n);
    double t = (u - c[k - 1]) / (c[k] - c[k - 1]);
    return s[k - 1] + t * (s[k] - s[k - 1]);
  }
};
inline const InverseCdfTable& wd_table() {
  static const InverseCdfTable t;
  return t;
}
}  // namespace detail

inline double sample_wigner_dyson(std::mt19937_64& g) { return detail::wd_table().inverse(uniform01(g)); }

// Unit-mean spacing with the requested law. `custom` is a Gamma law of variance sigma2
// (degenerating to the constant 1 at sigma2 = 0).
inline double sample_spacing(std::mt19937_64& g, SpacingDist dist, double sigma2 = 1.0) {
  switch (dist) {
    case SpacingDist::poisson: return -std::log(1.0 - uniform01(g));
    case SpacingDist::wigner_dyson: return sample_wigner_dyson(g);
    case SpacingDist::custom: {
      if (sigma2 <= 0) return 1.0;
      std::gamma_distribution<double> gam(1.0 / sigma2, sigma2);
      return gam(g);
    }
  }
  return 1.0;
}

inline std::vector<double> sample_spacings(std::mt19937_64& g, SpacingDist dist, long n, double sigma2 = 1.0) {
  std::vector<double> s(n);
  for (auto& x : s) x = sample_spacing(g, dist, sigma2);
  return s;
}

// Spectrum E_0 = 0, E_{l+1} = E_l + s_l with unit-mean spacings.
inline std::vector<double> synthetic_spectrum(long d, SpacingDist dist, std::uint64_t seed, double sigma2 = 1.0) {
  auto g = make_engine(seed, 0x5bec);
  std::vector<double> e(d, 0.0);
  for (long l = 1; l < d; ++l) e[l] = e[l - 1] + sample_spacing(g, dist, sigma2);
  return e;
}

}  // namespace cens
