#pragma once

// Haar reference quantities: Weingarten functions, moment operators, the twofold
// channel, the Haar plateau operator, Haar-averaged correlators and a sampler.

#include "cens/tensor.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace cens {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

struct CycleType {
  std::vector<int> parts;  // kept sorted, largest first

  CycleType() = default;
  CycleType(std::initializer_list<int> p) : parts(p) { normalize(); }
  explicit CycleType(std::vector<int> p) : parts(std::move(p)) { normalize(); }

  int n() const { return std::accumulate(parts.begin(), parts.end(), 0); }
  void normalize() {
    std::sort(parts.begin(), parts.end(), std::greater<int>());
    require(!parts.empty(), ErrorCode::invalid_argument, "cycle type: empty partition");
    for (int x : parts) require(x >= 1, ErrorCode::invalid_argument, "cycle type: parts must be positive");
  }
  bool operator==(const CycleType& o) const { return parts == o.parts; }
};

inline CycleType cycle_type(const std::vector<int>& perm) {
  require(is_permutation(perm), ErrorCode::invalid_argument, "cycle_type: invalid permutation");
  std::vector<bool> seen(perm.size(), false);
  std::vector<int> parts;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (std::size_t j = i; !seen[j]; j = perm[j]) {
      seen[j] = true;
      ++len;
    }
    parts.push_back(len);
  }
  return CycleType(parts);
}

inline int num_cycles(const std::vector<int>& perm) { return static_cast<int>(cycle_type(perm).parts.size()); }

// Exact unitary Weingarten function for n <= 4.
inline Rational weingarten_exact(const CycleType& c, long d) {
  int n = c.n();
  require(n <= 4, ErrorCode::invalid_argument, "weingarten: only n <= 4 supported");
  BigInt D = d;
  BigInt d2 = D * D;
  auto make = [&](BigInt num, BigInt den) {
    require(den != 0, ErrorCode::invalid_argument, "weingarten: pole at d = " + std::to_string(d));
    return Rational(num, den);
  };
  const auto& p = c.parts;
  if (n == 1) return make(1, D);
  if (n == 2) {
    if (p[0] == 2) return make(-1, D * (d2 - 1));
    return make(1, d2 - 1);
  }
  if (n == 3) {
    BigInt den = D * (d2 - 1) * (d2 - 4);
    if (p[0] == 3) return make(2, den);
    if (p[0] == 2) return make(-1, (d2 - 1) * (d2 - 4));
    return make(d2 - 2, den);
  }
  BigInt den = d2 * (d2 - 1) * (d2 - 4) * (d2 - 9);
  if (p[0] == 4) return make(-5 * D, den);
  if (p[0] == 3) return make(2 * d2 - 3, den);
  if (p[0] == 2 && p.size() == 2) return make(d2 + 6, den);
  if (p[0] == 2) return make(-D * d2 + 4 * D, den);
  return make(d2 * d2 - 8 * d2 + 6, den);
}

inline double weingarten(const CycleType& c, long d) {
  return static_cast<double>(weingarten_exact(c, d));
}

inline std::vector<std::vector<int>> all_permutations(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline std::vector<int> compose(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[b[i]];
  return c;
}

inline std::vector<int> inverse(const std::vector<int>& a) {
  std::vector<int> c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[a[i]] = static_cast<int>(i);
  return c;
}

struct MomentOperator {
  int order = 2;  // 2k
  long dim = 0;
  Mat matrix;
};

// Moment layout: E[U^{(x)k} (x) Udag^{(x)k}] with row (l_1..l_k, s_1..s_k) and column
// (r_1..r_k, q_1..q_k), entry E[prod U_{l r} prod Udag_{s q}].
inline MomentOperator haar_moment(int k, long d) {
  require(k == 1 || k == 2, ErrorCode::invalid_argument, "haar_moment: k must be 1 or 2");
  require(d >= 2, ErrorCode::invalid_argument, "haar_moment: d >= 2 required");
  long n = 1;
  for (int i = 0; i < 2 * k; ++i) n *= d;
  require(n <= kMaxFoldDim, ErrorCode::cap_exceeded, "haar_moment: dimension cap exceeded");
  MomentOperator m{2 * k, d, Mat::Zero(n, n)};
  if (k == 1) {
    m.matrix = swap_op(d) / static_cast<double>(d);
    return m;
  }
  auto perms = all_permutations(2);
  double wg[2][2];
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      wg[a][b] = weingarten(cycle_type(compose(perms[a], inverse(perms[b]))), d);
  for (long l1 = 0; l1 < d; ++l1)
    for (long l2 = 0; l2 < d; ++l2)
      for (long s1 = 0; s1 < d; ++s1)
        for (long s2 = 0; s2 < d; ++s2) {
          long row = ((l1 * d + l2) * d + s1) * d + s2;
          long l[2] = {l1, l2}, s[2] = {s1, s2};
          for (long r1 = 0; r1 < d; ++r1)
            for (long r2 = 0; r2 < d; ++r2)
              for (long q1 = 0; q1 < d; ++q1)
                for (long q2 = 0; q2 < d; ++q2) {
                  long r[2] = {r1, r2}, q[2] = {q1, q2};
                  double v = 0;
                  for (int a = 0; a < 2; ++a) {
                    const auto& sg = perms[a];
                    if (l[0] != q[sg[0]] || l[1] != q[sg[1]]) continue;
                    for (int b = 0; b < 2; ++b) {
                      const auto& tu = perms[b];
                      if (r[0] != s[tu[0]] || r[1] != s[tu[1]]) continue;
                      v += wg[a][b];
                    }
                  }
                  if (v != 0) m.matrix(row, ((r1 * d + r2) * d + q1) * d + q2) = v;
                }
        }
  return m;
}

// Pairs the last upper replica with the last lower one: sum over x, y of
// M[(l1,x,s1,y),(r1,y,q1,x)]. For any unitary ensemble this is d times the 2-moment.
inline Mat unitarity_contraction(const Mat& m4, long d) {
  Mat out = Mat::Zero(d * d, d * d);
  for (long l1 = 0; l1 < d; ++l1)
    for (long s1 = 0; s1 < d; ++s1)
      for (long r1 = 0; r1 < d; ++r1)
        for (long q1 = 0; q1 < d; ++q1) {
          cplx acc = 0;
          for (long x = 0; x < d; ++x)
            for (long y = 0; y < d; ++y)
              acc += m4(((l1 * d + x) * d + s1) * d + y, ((r1 * d + y) * d + q1) * d + x);
          out(l1 * d + s1, r1 * d + q1) = acc;
        }
  return out;
}

// Phi(A) = E[(U (x) U) A (U (x) U)^dag] computed by contracting a 4-moment tensor.
inline Mat contract_twofold(const Mat& m4, const Mat& a, long d) {
  Mat out = Mat::Zero(d * d, d * d);
  for (long a1 = 0; a1 < d; ++a1)
    for (long b1 = 0; b1 < d; ++b1)
      for (long k1 = 0; k1 < d; ++k1)
        for (long m1 = 0; m1 < d; ++m1) {
          long row = ((a1 * d + b1) * d + k1) * d + m1;
          for (long i = 0; i < d; ++i)
            for (long j = 0; j < d; ++j) {
              cplx x = a(i * d + j, k1 * d + m1);
              if (x == 0.0) continue;
              for (long c = 0; c < d; ++c)
                for (long e = 0; e < d; ++e)
                  out(a1 * d + b1, c * d + e) += m4(row, ((i * d + j) * d + c) * d + e) * x;
            }
        }
  return out;
}

inline Mat haar_twofold_channel(const Mat& a) {
  require(a.rows() == a.cols(), ErrorCode::invalid_argument, "haar_twofold_channel: not square");
  long d = exact_sqrt(a.rows());
  Mat s = swap_op(d);
  cplx ta = a.trace(), tsa = (s * a).trace();
  double dd = static_cast<double>(d);
  cplx alpha = (ta - tsa / dd) / (dd * dd - 1);
  cplx beta = (tsa - ta / dd) / (dd * dd - 1);
  return alpha * identity(d * d) + beta * s;
}

inline Mat haar_plateau(long d) {
  require(d >= 2, ErrorCode::invalid_argument, "haar_plateau: d >= 2 required");
  return (identity(d * d) + swap_op(d)) / static_cast<double>(d + 1);
}

// Z(x) = sum_l exp(-x E_l)
inline cplx partition_function(const EigenSystem& es, cplx x) {
  cplx z = 0;
  for (long l = 0; l < es.dim(); ++l) z += std::exp(-x * es.values(l));
  return z;
}

// Spectral weight entering finite-temperature two-point functions, normalised so that
// beta = 0 gives |Z(it)|^2 / d. Regulated: |Z(b/2 - it)|^2 / Z(b). Otherwise
// Z(b - it) Z(it) / Z(b). Energies are shifted by E_min, the ratio is shift invariant.
inline cplx thermal_weight(const EigenSystem& es, double t, double beta, bool regulated) {
  double e0 = es.values(0);
  cplx zr = 0, za = 0, zb = 0, zb2 = 0;
  for (long l = 0; l < es.dim(); ++l) {
    double e = es.values(l) - e0;
    double w = std::exp(-beta * e);
    zb += w;
    zr += std::exp(-0.5 * beta * e) * std::exp(kI * t * es.values(l));
    za += w * std::exp(kI * t * es.values(l));
    zb2 += std::exp(-kI * t * es.values(l));
  }
  if (regulated) return std::norm(zr) / zb;
  return za * zb2 / zb;
}

inline cplx haar_two_point(const HermitianOperator& W, const HermitianOperator& V, const EigenSystem& es,
                           double t, double beta = 0.0, bool regulated = true) {
  require(beta >= 0, ErrorCode::invalid_argument, "haar_two_point: beta >= 0 required");
  long d = es.dim();
  require(W.dim() == d && V.dim() == d, ErrorCode::invalid_argument, "haar_two_point: dimension mismatch");
  double dd = static_cast<double>(d);
  cplx w = W.matrix().trace() / dd, v = V.matrix().trace() / dd;
  cplx wv = (W.matrix() * V.matrix()).trace() / dd;
  cplx z2 = dd * thermal_weight(es, t, beta, regulated);  // |Z(it)|^2 at beta = 0
  return w * v + (z2 - 1.0) / (dd * dd - 1) * (wv - w * v);
}

// Ginibre + QR with the phase correction on diag(R).
inline Mat haar_sample(long d, std::mt19937_64& g) {
  require(d >= 1, ErrorCode::invalid_argument, "haar_sample: d >= 1 required");
  Mat z(d, d);
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) z(i, j) = cplx(std_normal(g), std_normal(g)) / std::sqrt(2.0);
  Eigen::HouseholderQR<Mat> qr(z);
  Mat q = qr.householderQ() * identity(d);
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (long j = 0; j < d; ++j) {
    cplx rj = r(j, j);
    double a = std::abs(rj);
    q.col(j) *= a > 0 ? rj / a : cplx(1.0);
  }
  return q;
}

inline Mat haar_sample(long d, std::uint64_t seed) {
  auto g = make_engine(seed, 0x4aa2);
  return haar_sample(d, g);
}

// Monte-Carlo moment E[U^{(x)k} (x) Udag^{(x)k}] (layout as haar_moment).
inline MatrixStats haar_moment_mc(int k, long d, long samples, std::uint64_t seed, int threads = 0) {
  require(k == 1 || k == 2, ErrorCode::invalid_argument, "haar_moment_mc: k must be 1 or 2");
  return parallel_chunks<MatrixStats>(samples, 2048, resolve_threads(threads),
                                      [&](long c, long lo, long hi, MatrixStats& acc) {
                                        auto g = make_engine(seed, 1000 + c);
                                        for (long i = lo; i < hi; ++i) {
                                          Mat u = haar_sample(d, g);
                                          Mat ud = u.adjoint();
                                          Mat x = k == 1 ? kron(u, ud)
                                                         : kron(kron(kron(u, u), ud), ud);
                                          acc.add(x);
                                        }
                                      });
}

}  // namespace cens
