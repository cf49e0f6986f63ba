#pragma once

// The C-ensemble: the U(1)^d x S_d orbit of a diagonalizer C0 of H.

#include "cens/haar.hpp"

namespace cens {

struct Diagonalizer {
  Mat C;           // row l is <E_l|
  EigenSystem es;

  long dim() const { return C.rows(); }
};

inline Diagonalizer build_diagonalizer(const EigenSystem& es) {
  es.require_nondegenerate("build_diagonalizer");
  return {es.vectors.adjoint(), es};
}

struct CEnsembleSample {
  std::vector<int> permutation;
  std::vector<double> phases;
  Mat C;
};

// diag(e^{i phi}) P_pi C
inline Mat apply_orbit(const Mat& c, const std::vector<int>& perm, const std::vector<double>& phases) {
  long d = c.rows();
  Mat out(d, c.cols());
  for (long l = 0; l < d; ++l) out.row(perm[l]) = c.row(l);
  for (long l = 0; l < d; ++l) out.row(l) *= std::exp(kI * phases[l]);
  return out;
}

inline CEnsembleSample sample_C(const Diagonalizer& dz, std::mt19937_64& g) {
  int d = static_cast<int>(dz.dim());
  CEnsembleSample s;
  s.permutation = random_permutation(g, d);
  s.phases.resize(d);
  for (auto& p : s.phases) p = 2.0 * kPi * uniform01(g);
  s.C = apply_orbit(dz.C, s.permutation, s.phases);
  return s;
}

inline CEnsembleSample sample_C(const Diagonalizer& dz, std::uint64_t seed) {
  auto g = make_engine(seed, 0xc5a);
  return sample_C(dz, g);
}

// Largest off-diagonal entry of C H C^dag.
inline double orbit_membership_residual(const Mat& c, const Mat& h) {
  Mat x = c * h * c.adjoint();
  x.diagonal().setZero();
  return max_abs(x);
}

inline std::vector<std::vector<int>> enumerate_orbit(const Diagonalizer& dz, int cap = kMaxEnumerationDim) {
  require(dz.dim() <= cap, ErrorCode::cap_exceeded, "enumerate_orbit: enumeration cap exceeded");
  return all_permutations(static_cast<int>(dz.dim()));
}

// Phase average of prod e^{i phi_a} prod e^{-i phi_b}: one iff the multisets agree.
inline bool phase_balanced(std::vector<long> unconj, std::vector<long> conj) {
  std::sort(unconj.begin(), unconj.end());
  std::sort(conj.begin(), conj.end());
  return unconj == conj;
}

namespace detail {
inline Mat permuted_rows(const Mat& c, const std::vector<int>& perm) {
  Mat out(c.rows(), c.cols());
  for (long l = 0; l < c.rows(); ++l) out.row(perm[l]) = c.row(l);
  return out;
}
}  // namespace detail

// E[C (x) Cdag], exact: permutations enumerated, phases integrated analytically.
inline Mat enumerate_two_moment(const Diagonalizer& dz) {
  long d = dz.dim();
  auto perms = enumerate_orbit(dz);
  Mat acc = Mat::Zero(d * d, d * d);
  for (const auto& p : perms) {
    Mat u = detail::permuted_rows(dz.C, p);
    for (long l = 0; l < d; ++l)
      for (long s = 0; s < d; ++s)
        for (long r = 0; r < d; ++r)
          for (long q = 0; q < d; ++q) {
            if (!phase_balanced({l}, {q})) continue;
            acc(l * d + s, r * d + q) += u(l, r) * std::conj(u(q, s));
          }
  }
  return acc / static_cast<double>(perms.size());
}

// E[C (x) C (x) Cdag (x) Cdag], exact. Layout as haar_moment.
inline Mat enumerate_four_moment(const Diagonalizer& dz) {
  long d = dz.dim();
  require(d * d * d * d <= kMaxFoldDim, ErrorCode::cap_exceeded, "enumerate_four_moment: cap exceeded");
  auto perms = enumerate_orbit(dz);
  Mat acc = Mat::Zero(d * d * d * d, d * d * d * d);
  for (const auto& p : perms) {
    Mat u = detail::permuted_rows(dz.C, p);
    for (long l1 = 0; l1 < d; ++l1)
      for (long l2 = 0; l2 < d; ++l2)
        for (long q1 = 0; q1 < d; ++q1)
          for (long q2 = 0; q2 < d; ++q2) {
            if (!phase_balanced({l1, l2}, {q1, q2})) continue;
            for (long s1 = 0; s1 < d; ++s1)
              for (long s2 = 0; s2 < d; ++s2) {
                long row = ((l1 * d + l2) * d + s1) * d + s2;
                for (long r1 = 0; r1 < d; ++r1)
                  for (long r2 = 0; r2 < d; ++r2)
                    acc(row, ((r1 * d + r2) * d + q1) * d + q2) +=
                        u(l1, r1) * u(l2, r2) * std::conj(u(q1, s1)) * std::conj(u(q2, s2));
              }
          }
  }
  return acc / static_cast<double>(perms.size());
}

// E[Cdag^{(x)2} X C^{(x)2}], exact.
inline Mat enumerate_twofold_average(const Diagonalizer& dz, const Mat& x) {
  long d = dz.dim();
  require(x.rows() == d * d && x.cols() == d * d, ErrorCode::invalid_argument,
          "enumerate_twofold_average: operator must act on d^2");
  Mat xt = Mat::Zero(d * d, d * d);
  for (long l1 = 0; l1 < d; ++l1)
    for (long l2 = 0; l2 < d; ++l2)
      for (long m1 = 0; m1 < d; ++m1)
        for (long m2 = 0; m2 < d; ++m2)
          if (phase_balanced({m1, m2}, {l1, l2})) xt(l1 * d + l2, m1 * d + m2) = x(l1 * d + l2, m1 * d + m2);
  auto perms = enumerate_orbit(dz);
  Mat acc = Mat::Zero(d * d, d * d);
  for (const auto& p : perms) {
    Mat u = detail::permuted_rows(dz.C, p);
    Mat uu = kron(u, u);
    acc += uu.adjoint() * xt * uu;
  }
  return acc / static_cast<double>(perms.size());
}

inline MatrixStats mc_two_moment(const Diagonalizer& dz, long samples, std::uint64_t seed, int threads = 0) {
  return parallel_chunks<MatrixStats>(samples, 4096, resolve_threads(threads),
                                      [&](long c, long lo, long hi, MatrixStats& acc) {
                                        auto g = make_engine(seed, 2000 + c);
                                        for (long i = lo; i < hi; ++i) {
                                          Mat cc = sample_C(dz, g).C;
                                          acc.add(kron(cc, cc.adjoint()));
                                        }
                                      });
}

// ---------------------------------------------------------------------------
// Plateau operator

struct PlateauOperator {
  Mat matrix;
  long d = 0;
};

inline PlateauOperator plateau_exact(const EigenSystem& es) {
  es.require_nondegenerate("plateau_exact");
  long d = es.dim();
  require(d * d <= kMaxFoldDim, ErrorCode::cap_exceeded, "plateau_exact: cap exceeded");
  Mat g = Mat::Zero(d * d, d * d);
  for (long l = 0; l < d; ++l) {
    CVec v = es.vectors.col(l);
    CVec vv(d * d);
    for (long a = 0; a < d; ++a)
      for (long b = 0; b < d; ++b) vv(a * d + b) = v(a) * v(b);
    g.noalias() += vv * vv.adjoint();
  }
  return {g, d};
}

struct PlateauChecks {
  double hermiticity = 0;
  double min_eigenvalue = 0;
  double trace_error = 0;
  double swap_left = 0;
  double swap_right = 0;
  double partial_trace_asymmetry = 0;
  double dephasing = 0;  // |Tr_1 G (H (x) I) - H|, only with H supplied
};

inline PlateauChecks check_plateau(const Mat& g, long d, const Mat* h = nullptr) {
  PlateauChecks c;
  Mat s = swap_op(d);
  c.hermiticity = max_abs(g - g.adjoint());
  c.min_eigenvalue = min_eigenvalue(g);
  c.trace_error = std::abs(g.trace() - static_cast<double>(d));
  c.swap_left = max_abs(s * g - g);
  c.swap_right = max_abs(g * s - g);
  c.partial_trace_asymmetry = max_abs(partial_trace(g, Side::first) - partial_trace(g, Side::second));
  if (h) c.dephasing = max_abs(partial_trace(g * kron(*h, identity(d)), Side::first) - *h);
  return c;
}

struct PlateauSplit {
  Mat haar_part;
  Mat non_universal;  // G[H]
};

inline PlateauSplit plateau_split(const PlateauOperator& g) {
  Mat h = haar_plateau(g.d);
  return {h, g.matrix - h};
}

inline double ipr_bar(const Diagonalizer& dz) {
  return dz.C.cwiseAbs2().cwiseAbs2().sum() / static_cast<double>(dz.dim());
}

inline double frame_potential2_from_ipr(double ipr, long d) {
  require(d >= 2, ErrorCode::invalid_argument, "frame_potential2: d >= 2 required");
  double dd = static_cast<double>(d);
  double x = (dd + 1) / (dd - 1) * (ipr - 2.0 / (dd + 1));
  return 2.0 + x * x;
}

inline double frame_potential2(const Diagonalizer& dz) { return frame_potential2_from_ipr(ipr_bar(dz), dz.dim()); }

// Brute force: every ordered pair of permutations; for fixed pair Tr(U^dag V) =
// sum_k e^{i theta_k} a_k with a_k = (P2 C0 C0^dag P1^dag)_kk, whose fourth absolute
// moment under uniform phases is 2 (sum |a|^2)^2 - sum |a|^4.
inline double frame_potential2_enumerated(const Diagonalizer& dz) {
  auto perms = enumerate_orbit(dz);
  double acc = 0;
  for (const auto& p1 : perms) {
    Mat u1 = detail::permuted_rows(dz.C, p1);
    for (const auto& p2 : perms) {
      Mat u2 = detail::permuted_rows(dz.C, p2);
      CVec a = (u2 * u1.adjoint()).diagonal();
      double s2 = a.cwiseAbs2().sum(), s4 = a.cwiseAbs2().cwiseAbs2().sum();
      acc += 2 * s2 * s2 - s4;
    }
  }
  return acc / static_cast<double>(perms.size() * perms.size());
}

inline EnsembleEstimate frame_potential2_mc(const Diagonalizer& dz, long pairs, std::uint64_t seed, int threads = 0) {
  auto st = parallel_chunks<RunningStats>(pairs, 1024, resolve_threads(threads),
                                          [&](long c, long lo, long hi, RunningStats& acc) {
                                            auto g = make_engine(seed, 3000 + c);
                                            for (long i = lo; i < hi; ++i) {
                                              Mat u = sample_C(dz, g).C;
                                              Mat v = sample_C(dz, g).C;
                                              double x = std::norm((u.adjoint() * v).trace());
                                              acc.add(x * x);
                                            }
                                          });
  return to_estimate(st, seed);
}

// ---------------------------------------------------------------------------
// U(1)^d x S_d reference ensemble (C0 = I)

inline MomentOperator u1sd_moment(int k, long d) {
  require(k == 1 || k == 2, ErrorCode::invalid_argument, "u1sd_moment: k must be 1 or 2");
  require(d >= 2, ErrorCode::invalid_argument, "u1sd_moment: d >= 2 required");
  if (k == 1) return {2, d, swap_op(d) / static_cast<double>(d)};
  long n = d * d * d * d;
  require(n <= kMaxFoldDim, ErrorCode::cap_exceeded, "u1sd_moment: cap exceeded");
  Mat m = Mat::Zero(n, n);
  double dd = static_cast<double>(d);
  // Averaging over sigma leaves (d-1)!/d! when both index pairs coincide and
  // (d-2)!/d! when both differ.
  auto w = [&](long a, long b, long x, long y) {
    if (a == b && x == y) return 1.0 / dd;
    if (a != b && x != y) return 1.0 / (dd * (dd - 1));
    return 0.0;
  };
  auto at = [&](long l1, long l2, long s1, long s2, long r1, long r2, long q1, long q2) -> cplx& {
    return m(((l1 * d + l2) * d + s1) * d + s2, ((r1 * d + r2) * d + q1) * d + q2);
  };
  for (long l = 0; l < d; ++l)
    for (long k2 = 0; k2 < d; ++k2)
      for (long r1 = 0; r1 < d; ++r1)
        for (long r2 = 0; r2 < d; ++r2) {
          double x = w(l, k2, r1, r2);
          if (x == 0) continue;
          at(l, k2, r1, r2, r1, r2, l, k2) += x;  // direct pairing
          at(l, k2, r2, r1, r1, r2, k2, l) += x;  // crossed pairing
        }
  // collision term: both pairings coincide when l = k
  for (long l = 0; l < d; ++l)
    for (long r = 0; r < d; ++r) at(l, l, r, r, r, r, l, l) -= 1.0 / dd;
  return {4, d, m};
}

}  // namespace cens
