#pragma once

// C-ensemble partition function (volume), duality, cardinality, entropy estimates and
// counting bounds on complexity. Everything is evaluated in the log domain.

#include "cens/spectra.hpp"
#include "cens/tensor.hpp"

namespace cens {

struct LogValue {
  double log_magnitude = 0.0;
  int sign = 1;  // 0 means the value is zero and log_magnitude is meaningless
};

struct GateSetSpec {
  long gates = 2;
  int locality = 2;
  int qubits = 2;
};

// Neumaier summation; the Vandermonde double sums have O(d^2) terms of mixed size.
struct CompensatedSum {
  double sum = 0.0, c = 0.0;
  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      c += (sum - t) + x;
    else
      c += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + c; }
};

inline double log_factorial(long n) { return std::lgamma(static_cast<double>(n) + 1.0); }

// sum_{l=1}^{n} log l!
inline double log_superfactorial(long n) {
  CompensatedSum s;
  for (long l = 1; l <= n; ++l) s.add(log_factorial(l));
  return s.value();
}

inline double harmonic(long n) {
  CompensatedSum s;
  for (long k = 1; k <= n; ++k) s.add(1.0 / static_cast<double>(k));
  return s.value();
}

inline double choose2(long d) { return 0.5 * static_cast<double>(d) * static_cast<double>(d - 1); }

// log prod_{l<m} ((E_m - E_l) / unit)^2
inline double log_vandermonde2(const RVec& e, double unit = 1.0) {
  CompensatedSum s;
  for (long l = 0; l < e.size(); ++l)
    for (long m = l + 1; m < e.size(); ++m) s.add(2.0 * std::log(std::abs(e(m) - e(l)) / unit));
  return s.value();
}

// log Vol(U(d)) = (d + C(d,2)) log 2 pi - sum_{l=1}^{d-1} log l!
inline double log_unitary_volume(long d) {
  return (static_cast<double>(d) + choose2(d)) * std::log(2 * kPi) - log_superfactorial(d - 1);
}

// log((2 pi)^d d!)
inline double log_orbit_volume(long d) { return static_cast<double>(d) * std::log(2 * kPi) + log_factorial(d); }

enum class BallDimension { d_squared, pairs_plus_diagonal };

inline double ball_dimension(long d, BallDimension b) {
  return b == BallDimension::d_squared ? static_cast<double>(d) * d : 2 * choose2(d) + d;
}

// log of the volume of an n-ball of radius eps
inline double log_ball_volume(double n, double eps) {
  require(eps > 0, ErrorCode::invalid_argument, "ball volume: eps > 0 required");
  return 0.5 * n * std::log(kPi) + n * std::log(eps) - std::lgamma(0.5 * n + 1);
}

namespace detail {
inline void check_volume_spectrum(const EigenSystem& es, const char* who) {
  require(es.dim() >= 2, ErrorCode::invalid_argument, std::string(who) + ": d >= 2 required");
  for (long l = 0; l + 1 < es.dim(); ++l)
    require(es.values(l + 1) > es.values(l), ErrorCode::degenerate,
            std::string(who) + ": eigenvalue collision, volume diverges");
  require(!es.any_degenerate(), ErrorCode::degenerate, std::string(who) + ": degenerate spectrum refused");
}
}  // namespace detail

// Dimensionful: prod_{l=1}^d l! / pi^{C(d,2)} * Delta^{-2}. Normalised: in units of the mean
// spacing, scaled by 2^{C(d,2)} Vol(U(1)^d x S_d) / Vol(U(d)).
inline LogValue log_volume(const EigenSystem& es, bool normalized = false) {
  detail::check_volume_spectrum(es, "log_volume");
  long d = es.dim();
  double c = choose2(d);
  if (!normalized) return {log_superfactorial(d) - c * std::log(kPi) - log_vandermonde2(es.values), 1};
  double unit = es.mean_spacing;
  return {c * std::log(2.0) + log_orbit_volume(d) - log_unitary_volume(d) - log_vandermonde2(es.values, unit), 1};
}

inline double duality_check(const EigenSystem& es) {
  require(es.dim() >= 2 && es.values(0) > 0, ErrorCode::invalid_argument, "duality_check: positive spectrum required");
  std::vector<double> inv(es.dim());
  CompensatedSum logdet;
  for (long l = 0; l < es.dim(); ++l) {
    inv[l] = 1.0 / es.values(l);
    logdet.add(std::log(es.values(l)));
  }
  // the inverse spectrum may be closer than the degeneracy floor relative to its own
  // spacing; only exact collisions matter for the identity
  EigenSystem ei = spectrum_system(inv, 0.0);
  double lhs = log_volume(es).log_magnitude;
  double rhs = log_volume(ei).log_magnitude - 2.0 * (es.dim() - 1) * logdet.value();
  return std::abs(lhs - rhs);
}

// log |E_C|_eps = log Vol(U(d)) + log Vol_normalised(H) - log Vol(B_eps(n))
inline LogValue cardinality(const EigenSystem& es, double eps = 1.0, BallDimension ball = BallDimension::d_squared) {
  require(eps > 0, ErrorCode::invalid_argument, "cardinality: eps > 0 required");
  long d = es.dim();
  LogValue v = log_volume(es, true);
  return {log_unitary_volume(d) + v.log_magnitude - log_ball_volume(ball_dimension(d, ball), eps), 1};
}

inline LogValue haar_cardinality(long d, double eps = 1.0, BallDimension ball = BallDimension::d_squared) {
  return {log_unitary_volume(d) - log_ball_volume(ball_dimension(d, ball), eps), 1};
}

// log|E_C|_eps / log|U(d)|_eps
inline double cardinality_ratio(const EigenSystem& es, double eps = 1.0, BallDimension ball = BallDimension::d_squared) {
  return cardinality(es, eps, ball).log_magnitude / haar_cardinality(es.dim(), eps, ball).log_magnitude;
}

namespace detail {
inline double log_gate_count(const GateSetSpec& g) {
  require(g.gates >= 1 && g.locality >= 1 && g.qubits >= g.locality, ErrorCode::invalid_argument,
          "GateSetSpec: need |G| >= 1 and 1 <= q <= N");
  double lc = log_factorial(g.qubits) - log_factorial(g.locality) - log_factorial(g.qubits - g.locality);
  double x = std::log(static_cast<double>(g.gates)) + lc;
  require(x > 0, ErrorCode::invalid_argument, "GateSetSpec: |G| C(N,q) must exceed 1");
  return x;
}
}  // namespace detail

inline double complexity_bound(const LogValue& card, const GateSetSpec& g) {
  if (card.sign == 0) return 0.0;
  return card.log_magnitude / detail::log_gate_count(g);
}

// Permutation orbit only: log d! ~ d log d - d.
inline double complexity_bound_sd(long d, const GateSetSpec& g) {
  double dd = static_cast<double>(d);
  return (dd * std::log(dd) - dd) / detail::log_gate_count(g);
}

inline double complexity_bound_frame(double f2, long d, const GateSetSpec& g) {
  require(f2 > 0, ErrorCode::invalid_argument, "complexity_bound_frame: F2 > 0 required");
  return (4 * std::log(static_cast<double>(d)) - std::log(f2)) / detail::log_gate_count(g);
}

// CLT estimate of log Delta^2 for unit-mean spacings of variance sigma2.
inline double vandermonde_estimate(long d, double sigma2) {
  require(d >= 2 && sigma2 >= 0, ErrorCode::invalid_argument, "vandermonde_estimate: d >= 2 and sigma2 >= 0 required");
  double dd = static_cast<double>(d);
  return 2 * log_superfactorial(d - 1) - sigma2 * (dd * (harmonic(d - 1) - 1) + 1);
}

// C(d,2) log 2 + log|E_{U(1)^d x S_d}|_eps - 2 log prod l^{d-l} + sigma2 (d (H_{d-1} - 1) + 1)
inline double entropy_estimate(long d, double sigma2, double eps = 1.0, BallDimension ball = BallDimension::d_squared) {
  double orbit = log_orbit_volume(d) - log_ball_volume(ball_dimension(d, ball), eps);
  return choose2(d) * std::log(2.0) + orbit - vandermonde_estimate(d, sigma2);
}

// Direct sampling of sum_{l<m} log(sum_{k=l}^{m-1} s_k)^2 over i.i.d. unit-mean spacings.
inline EnsembleEstimate clt_log_vandermonde(SpacingDist dist, long d, long n_trials, std::uint64_t seed,
                                            double sigma2 = 1.0, int threads = 0) {
  require(n_trials >= 1 && d >= 2, ErrorCode::invalid_argument, "clt_log_vandermonde: positive trials and d >= 2");
  auto st = parallel_chunks<RunningStats>(n_trials, 16, resolve_threads(threads),
                                          [&](long c, long lo, long hi, RunningStats& a) {
                                            for (long i = lo; i < hi; ++i) {
                                              auto g = make_engine(seed, 0xc17000 + i);
                                              auto s = sample_spacings(g, dist, d - 1, sigma2);
                                              RVec e(d);
                                              e(0) = 0;
                                              CompensatedSum run;
                                              for (long k = 0; k + 1 < d; ++k) {
                                                run.add(s[k]);
                                                e(k + 1) = run.value();
                                              }
                                              a.add(log_vandermonde2(e));
                                            }
                                            (void)c;
                                          });
  return to_estimate(st, seed);
}

}  // namespace cens
