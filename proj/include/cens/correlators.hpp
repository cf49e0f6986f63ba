#pragma once

// Spectral form factors, C-ensemble and Haar two-point closed forms, level statistics.

#include "cens/censemble.hpp"

namespace cens {

struct FormFactorKind {
  enum Kind { infinite_t, finite_t, twofold_sym, twofold_antisym } kind = infinite_t;
  double beta = 0.0;

  static FormFactorKind infinite() { return {infinite_t, 0.0}; }
  static FormFactorKind finite(double b) { return {finite_t, b}; }
  static FormFactorKind sym() { return {twofold_sym, 0.0}; }
  static FormFactorKind antisym() { return {twofold_antisym, 0.0}; }
};

// Z(it) = sum_l e^{i t E_l}
inline cplx z_it(const EigenSystem& es, double t) {
  cplx z = 0;
  for (long l = 0; l < es.dim(); ++l) z += std::exp(kI * t * es.values(l));
  return z;
}

// |Z_{+-}(it)|^2 with Z_{+-} = (Z(it)^2 +- Z(2it)) / 2
inline double twofold_form_factor(const EigenSystem& es, double t, bool symmetric) {
  cplx z = z_it(es, t), z2 = z_it(es, 2 * t);
  double a = std::norm(z) * std::norm(z) + std::norm(z2);
  double b = 2.0 * std::real(z * z * std::conj(z2));
  return 0.25 * (symmetric ? a + b : a - b);
}

inline double form_factor(const EigenSystem& es, const FormFactorKind& k, double t) {
  switch (k.kind) {
    case FormFactorKind::infinite_t: return std::norm(z_it(es, t));
    case FormFactorKind::finite_t: {
      require(k.beta >= 0, ErrorCode::invalid_argument, "form_factor: beta >= 0 required");
      return std::norm(partition_function(es, cplx(0.5 * k.beta, -t)));
    }
    case FormFactorKind::twofold_sym: return twofold_form_factor(es, t, true);
    case FormFactorKind::twofold_antisym: return twofold_form_factor(es, t, false);
  }
  return 0.0;
}

// Trapezoidal mean over [t_min, t_max] with n_steps intervals.
inline double form_factor_time_average(const EigenSystem& es, const FormFactorKind& k, double t_max, long n_steps,
                                       double t_min = 0.0) {
  require(n_steps >= 1 && t_max > t_min, ErrorCode::invalid_argument, "form_factor_time_average: bad window");
  double h = (t_max - t_min) / n_steps, acc = 0;
  for (long i = 0; i <= n_steps; ++i) {
    double w = (i == 0 || i == n_steps) ? 0.5 : 1.0;
    acc += w * form_factor(es, k, t_min + i * h);
  }
  return acc / n_steps;
}

// Tr(G W (x) V) with G the exact plateau operator: sum_l <E_l|W|E_l><E_l|V|E_l>.
inline double plateau_contraction(const EigenSystem& es, const Mat& w, const Mat& v) {
  RVec a = eigen_diagonal(w, es), b = eigen_diagonal(v, es);
  return a.dot(b);
}

inline cplx plateau_contraction(const Mat& g, const Mat& w, const Mat& v) { return (g * kron(w, v)).trace(); }

// Shared closed form. `weight` is |Z(it)|^2/d (or its thermal analogue), `g` the plateau
// contraction and `m` = <WV>.
inline cplx two_point_closed(cplx g, double m, long d, cplx weight) {
  double dd = static_cast<double>(d);
  return (g - m) / (dd - 1) + weight / (dd - 1) * (m - g / dd);
}

namespace detail {
inline void check_pair(const HermitianOperator& w, const HermitianOperator& v, const EigenSystem& es) {
  require(w.dim() == es.dim() && v.dim() == es.dim(), ErrorCode::invalid_argument, "dimension mismatch");
  require(es.dim() >= 2, ErrorCode::invalid_argument, "two-point functions need d >= 2");
}
inline double mean_trace(const Mat& a, const Mat& b) { return (a * b).trace().real() / static_cast<double>(a.rows()); }
}  // namespace detail

inline double c_two_point(const HermitianOperator& W, const HermitianOperator& V, const EigenSystem& es, double t) {
  detail::check_pair(W, V, es);
  es.require_nondegenerate("c_two_point");
  double g = plateau_contraction(es, W, V);
  double m = detail::mean_trace(W, V);
  double weight = std::norm(z_it(es, t)) / static_cast<double>(es.dim());
  return two_point_closed(g, m, es.dim(), weight).real();
}

// Same closed form with an arbitrary plateau operator (e.g. the Haar one).
inline cplx c_two_point_with_plateau(const HermitianOperator& W, const HermitianOperator& V, const Mat& g,
                                     const EigenSystem& es, double t) {
  detail::check_pair(W, V, es);
  double weight = std::norm(z_it(es, t)) / static_cast<double>(es.dim());
  return two_point_closed(plateau_contraction(g, W, V), detail::mean_trace(W, V), es.dim(), weight);
}

inline cplx c_two_point_thermal(const HermitianOperator& W, const HermitianOperator& V, const EigenSystem& es,
                                double beta, double t, bool regulated = true) {
  detail::check_pair(W, V, es);
  require(beta >= 0, ErrorCode::invalid_argument, "beta >= 0 required");
  es.require_nondegenerate("c_two_point_thermal");
  double g = plateau_contraction(es, W, V);
  return two_point_closed(g, detail::mean_trace(W, V), es.dim(), thermal_weight(es, t, beta, regulated));
}

inline double c_two_point_regulated(const HermitianOperator& W, const HermitianOperator& V, const EigenSystem& es,
                                    double beta, double t) {
  require(beta > 0, ErrorCode::invalid_argument, "c_two_point_regulated: beta > 0 required");
  return c_two_point_thermal(W, V, es, beta, t, true).real();
}

namespace detail {
inline void check_state(const Mat& rho) {
  require(std::abs(rho.trace() - 1.0) <= 1e-10, ErrorCode::invalid_argument, "state must have unit trace");
  require(max_abs(rho - rho.adjoint()) <= 1e-10, ErrorCode::invalid_argument, "state must be Hermitian");
  require(min_eigenvalue(rho) >= -1e-10, ErrorCode::invalid_argument, "state must be positive semidefinite");
}
}  // namespace detail

// Ensemble average of Tr A(t) rho.
inline double out_eq_expectation(const HermitianOperator& A, const HermitianOperator& rho, const EigenSystem& es,
                                 double t, bool large_d = false) {
  detail::check_pair(A, rho, es);
  detail::check_state(rho);
  es.require_nondegenerate("out_eq_expectation");
  double dd = static_cast<double>(es.dim());
  double g = plateau_contraction(es, A, rho);
  double a = (A.matrix() * rho.matrix()).trace().real();
  double z2 = std::norm(z_it(es, t));
  if (large_d) return z2 / (dd * dd) * a + (1 - z2 / (dd * dd)) * g;
  return dd / (dd - 1) * (g - a / dd) + z2 / (dd * (dd - 1)) * (a - g);
}

inline double diagonal_ensemble(const HermitianOperator& A, const EigenSystem& es) {
  RVec a = eigen_diagonal(A, es);
  return a.squaredNorm() / static_cast<double>(es.dim());
}

// sum_l <E_l|A|E_l><E_l|rho|E_l>
inline double diagonal_ensemble(const HermitianOperator& A, const HermitianOperator& rho, const EigenSystem& es) {
  return eigen_diagonal(A, es).dot(eigen_diagonal(rho, es));
}

inline double eth_f2(const HermitianOperator& A, const EigenSystem& es) {
  return detail::mean_trace(A, A) - diagonal_ensemble(A, es);
}

// (1/d) sum_{l != m} |<E_l|A|E_m>|^2, the off-diagonal weight entering eth_f2.
inline double eth_offdiagonal_weight(const HermitianOperator& A, const EigenSystem& es) {
  Mat y = es.vectors.adjoint() * A.matrix() * es.vectors;
  y.diagonal().setZero();
  return y.cwiseAbs2().sum() / static_cast<double>(es.dim());
}

struct SpacingRatios {
  std::vector<double> ratios;
  double mean = 0.0;
};

inline SpacingRatios spacing_ratios(const EigenSystem& es) {
  require(es.dim() >= 3, ErrorCode::invalid_argument, "spacing_ratios: d >= 3 required");
  es.require_nondegenerate("spacing_ratios");
  SpacingRatios out;
  for (long l = 0; l + 2 < es.dim(); ++l) {
    double a = es.values(l + 1) - es.values(l), b = es.values(l + 2) - es.values(l + 1);
    out.ratios.push_back(std::min(a, b) / std::max(a, b));
  }
  double s = 0;
  for (double r : out.ratios) s += r;
  out.mean = s / static_cast<double>(out.ratios.size());
  return out;
}

// ---------------------------------------------------------------------------
// Monte-Carlo oracles

struct SeriesEstimate {
  std::vector<double> times;
  std::vector<EnsembleEstimate> values;
};

namespace detail {
// (1/d) sum_lm e^{i(E_l - E_m)t} W'_lm V'_ml  with W' = C W Cdag, V' = C V Cdag,
// optionally thermally weighted e^{-beta(E_l+E_m)/2} / Z(beta) (d factor absorbed).
inline double sampled_two_point(const Mat& wc, const Mat& vc, const RVec& e, double t, double beta) {
  long d = e.size();
  double e0 = e.minCoeff();
  cplx acc = 0;
  double zb = 0;
  for (long l = 0; l < d; ++l) zb += std::exp(-beta * (e(l) - e0));
  for (long l = 0; l < d; ++l)
    for (long m = 0; m < d; ++m) {
      double w = std::exp(-0.5 * beta * (e(l) - e0 + e(m) - e0));
      acc += w * std::exp(kI * t * (e(l) - e(m))) * wc(l, m) * vc(m, l);
    }
  return beta == 0 ? acc.real() / d : acc.real() / zb;
}
}  // namespace detail

// Normalised (1/d) Tr W(t) V per sample; beta > 0 switches to the thermal weight.
inline SeriesEstimate c_two_point_mc(const Mat& W, const Mat& V, const EigenSystem& es, const std::vector<double>& times,
                                     long samples, std::uint64_t seed, double beta = 0.0, int threads = 0) {
  Diagonalizer dz = build_diagonalizer(es);
  struct Acc {
    std::vector<RunningStats> s;
    void merge(const Acc& o) {
      if (s.empty()) s.resize(o.s.size());
      for (std::size_t i = 0; i < o.s.size(); ++i) s[i].merge(o.s[i]);
    }
  };
  Acc acc = parallel_chunks<Acc>(samples, 512, resolve_threads(threads), [&](long c, long lo, long hi, Acc& a) {
    a.s.resize(times.size());
    auto g = make_engine(seed, 4000 + c);
    for (long i = lo; i < hi; ++i) {
      Mat cc = sample_C(dz, g).C;
      Mat wc = cc * W * cc.adjoint(), vc = cc * V * cc.adjoint();
      for (std::size_t k = 0; k < times.size(); ++k) a.s[k].add(detail::sampled_two_point(wc, vc, es.values, times[k], beta));
    }
  });
  SeriesEstimate out{times, {}};
  for (auto& s : acc.s) out.values.push_back(to_estimate(s, seed));
  return out;
}

// Trapezoidal time average over [0, T] of the sampled two-point function; per sample the
// grid average of e^{i w t} is precomputed so the cost is O(d^2) per sample.
inline EnsembleEstimate c_two_point_mc_time_average(const Mat& W, const Mat& V, const EigenSystem& es, double T,
                                                    long n_steps, long samples, std::uint64_t seed, int threads = 0) {
  Diagonalizer dz = build_diagonalizer(es);
  long d = es.dim();
  Mat kernel(d, d);
  double h = T / n_steps;
  for (long l = 0; l < d; ++l)
    for (long m = 0; m < d; ++m) {
      double w = es.values(l) - es.values(m);
      cplx acc = 0;
      for (long i = 0; i <= n_steps; ++i) acc += ((i == 0 || i == n_steps) ? 0.5 : 1.0) * std::exp(kI * w * (i * h));
      kernel(l, m) = acc / static_cast<double>(n_steps);
    }
  auto st = parallel_chunks<RunningStats>(samples, 512, resolve_threads(threads),
                                          [&](long c, long lo, long hi, RunningStats& a) {
                                            auto g = make_engine(seed, 5000 + c);
                                            for (long i = lo; i < hi; ++i) {
                                              Mat cc = sample_C(dz, g).C;
                                              Mat wc = cc * W * cc.adjoint(), vc = cc * V * cc.adjoint();
                                              cplx x = kernel.cwiseProduct(wc).cwiseProduct(vc.transpose()).sum();
                                              a.add(x.real() / d);
                                            }
                                          });
  return to_estimate(st, seed);
}

}  // namespace cens
