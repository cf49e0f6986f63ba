#pragma once

// Out-of-time-order correlators through the replica Hamiltonian H (x) I +- I (x) H
// restricted to the symmetric and antisymmetric subspaces.

#include "cens/correlators.hpp"

namespace cens {

inline Mat replica_hamiltonian(const HermitianOperator& H, int sign) {
  require(sign == 1 || sign == -1, ErrorCode::invalid_argument, "replica_hamiltonian: sign must be +1 or -1");
  long d = H.dim();
  require(d * d <= kMaxFoldDim, ErrorCode::cap_exceeded, "replica_hamiltonian: cap exceeded");
  return kron(H, identity(d)) + static_cast<double>(sign) * kron(identity(d), H);
}

// B^dag M B with B the subspace isometry.
inline Mat project_subspace(const Mat& m, bool symmetric) {
  long d = exact_sqrt(m.rows());
  require(d > 0 && m.rows() == m.cols(), ErrorCode::invalid_argument, "project_subspace: operator on C^d (x) C^d expected");
  Mat b = subspace_isometry(d, symmetric);
  return b.adjoint() * m * b;
}

// Eigen-decomposition of the projected H (x) I + I (x) H, assembled from pairs of
// eigenvectors of H. Coordinates are those of subspace_isometry.
inline EigenSystem replica_subspace(const EigenSystem& es, bool symmetric) {
  long d = es.dim();
  require(d * d <= kMaxFoldDim, ErrorCode::cap_exceeded, "replica_subspace: cap exceeded");
  require(symmetric || d >= 2, ErrorCode::invalid_argument, "replica_subspace: empty antisymmetric subspace");
  Mat b = subspace_isometry(d, symmetric);
  long D = b.cols();
  std::vector<std::pair<double, CVec>> items;
  items.reserve(D);
  const double r = 1.0 / std::sqrt(2.0);
  for (long i = 0; i < d; ++i)
    for (long j = i; j < d; ++j) {
      if (i == j && !symmetric) continue;
      CVec vi = es.vectors.col(i), vj = es.vectors.col(j);
      CVec psi(d * d);
      for (long a = 0; a < d; ++a)
        for (long c = 0; c < d; ++c) {
          cplx x = vi(a) * vj(c);
          if (i != j) x = r * (x + (symmetric ? 1.0 : -1.0) * vj(a) * vi(c));
          psi(a * d + c) = x;
        }
      items.push_back({es.values(i) + es.values(j), b.adjoint() * psi});
    }
  std::stable_sort(items.begin(), items.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  EigenSystem out;
  out.values.resize(D);
  out.vectors.resize(D, D);
  for (long k = 0; k < D; ++k) {
    out.values(k) = items[k].first;
    out.vectors.col(k) = items[k].second;
  }
  fix_phases(out.vectors);
  double scale = es.mean_spacing > 0 ? es.mean_spacing : 1.0;
  double ms = D > 1 ? (out.values(D - 1) - out.values(0)) / (D - 1) : 0.0;
  fill_spectral_stats(out, kDegeneracyTol * scale / std::max(ms, 1e-300));
  return out;
}

struct ReplicaOperators {
  Mat w_hat;  // B^dag (W (x) W) B
  Mat x_hat;  // +- B^dag (V (x) V) B
};

inline ReplicaOperators replica_operators(const Mat& w, const Mat& v, bool symmetric) {
  double s = symmetric ? 1.0 : -1.0;
  return {project_subspace(kron(w, w), symmetric), s * project_subspace(kron(v, v), symmetric)};
}

struct OtocTerms {
  double sym = 0;
  double antisym = 0;
  double total() const { return sym + antisym; }
};

namespace detail {
// D g - T over D-1 plus |Z|^2 (T - g) / (D (D-1)), with g = sum_p W_pp X_pp in the
// pair eigenbasis and T = Tr(W X) = (Tr WVWV +- (Tr WV)^2) / 2.
inline double otoc_sector(const Mat& wt, const Mat& vt, double z2, double wvwv, double wv, bool symmetric) {
  long d = wt.rows();
  double s = symmetric ? 1.0 : -1.0;
  double D = symmetric ? d * (d + 1) / 2.0 : d * (d - 1) / 2.0;
  double g = 0;
  for (long i = 0; i < d; ++i)
    for (long j = i; j < d; ++j) {
      if (i == j) {
        if (symmetric) g += (wt(i, i) * wt(i, i) * vt(i, i) * vt(i, i)).real();
        continue;
      }
      double ww = (wt(i, i) * wt(j, j)).real() + s * std::norm(wt(i, j));
      double vv = (vt(i, i) * vt(j, j)).real() + s * std::norm(vt(i, j));
      g += ww * s * vv;
    }
  double T = 0.5 * (wvwv + s * wv * wv);
  return (D * g - T) / (D - 1) + z2 * (T - g) / (D * (D - 1));
}
}  // namespace detail

// Ensemble average of Tr(W(t) V W(t) V), not divided by d.
inline OtocTerms otoc_terms(const HermitianOperator& W, const HermitianOperator& V, const EigenSystem& es, double t) {
  detail::check_pair(W, V, es);
  require(es.dim() >= 3, ErrorCode::invalid_argument,
          "otoc_closed_form: d >= 3 required (antisymmetric subspace is one-dimensional at d = 2); use otoc_direct");
  es.require_nondegenerate("otoc_closed_form");
  replica_subspace(es, true).require_nondegenerate("otoc_closed_form (symmetric replica spectrum)");
  replica_subspace(es, false).require_nondegenerate("otoc_closed_form (antisymmetric replica spectrum)");
  Mat wt = es.vectors.adjoint() * W.matrix() * es.vectors;
  Mat vt = es.vectors.adjoint() * V.matrix() * es.vectors;
  Mat wv = W.matrix() * V.matrix();
  double wvwv = (wv * wv).trace().real(), trwv = wv.trace().real();
  OtocTerms out;
  out.sym = detail::otoc_sector(wt, vt, twofold_form_factor(es, t, true), wvwv, trwv, true);
  out.antisym = detail::otoc_sector(wt, vt, twofold_form_factor(es, t, false), wvwv, trwv, false);
  return out;
}

inline double otoc_closed_form(const HermitianOperator& W, const HermitianOperator& V, const EigenSystem& es,
                               double t) {
  return otoc_terms(W, V, es, t).total();
}

// Divided by d, so W = V = I gives 1.
inline double otoc_closed_form_normalized(const HermitianOperator& W, const HermitianOperator& V,
                                          const EigenSystem& es, double t) {
  return otoc_closed_form(W, V, es, t) / static_cast<double>(es.dim());
}

// Coefficient multiplying the disconnected piece (Tr WV)^2 at late times.
inline double otoc_disconnected_coefficient(const EigenSystem& es, double t) {
  long d = es.dim();
  require(d >= 3, ErrorCode::invalid_argument, "otoc_disconnected_coefficient: d >= 3 required");
  double dp = d * (d + 1) / 2.0, dm = d * (d - 1) / 2.0;
  double zp = twofold_form_factor(es, t, true), zm = twofold_form_factor(es, t, false);
  double cp = zp / (dp * (dp - 1)) - 1 / (dp - 1);
  double cm = zm / (dm * (dm - 1)) - 1 / (dm - 1);
  return 0.5 * (cp - cm);
}

namespace detail {
inline Mat heisenberg(const Mat& xt, const RVec& e, double t) {
  Mat out = xt;
  for (long l = 0; l < e.size(); ++l)
    for (long m = 0; m < e.size(); ++m) out(l, m) *= std::exp(kI * t * (e(l) - e(m)));
  return out;
}
}  // namespace detail

// (1/d) Tr(W(t) V W(t) V) for the given H.
inline double otoc_direct(const HermitianOperator& W, const HermitianOperator& V, const EigenSystem& es, double t) {
  detail::check_pair(W, V, es);
  Mat wt = detail::heisenberg(es.vectors.adjoint() * W.matrix() * es.vectors, es.values, t);
  Mat vt = es.vectors.adjoint() * V.matrix() * es.vectors;
  Mat x = wt * vt;
  return (x * x).trace().real() / static_cast<double>(es.dim());
}

enum class SquareCommutatorMethod { direct, ensemble };

// -(1/d) Tr([W(t), V]^2) = 2<W^2(t) V^2> - 2<W(t) V W(t) V>.
inline double square_commutator(const HermitianOperator& W, const HermitianOperator& V, const EigenSystem& es,
                                double t, SquareCommutatorMethod method = SquareCommutatorMethod::direct) {
  Mat w2 = W.matrix() * W.matrix(), v2 = V.matrix() * V.matrix();
  HermitianOperator W2(0.5 * (w2 + w2.adjoint()), 1e-8), V2(0.5 * (v2 + v2.adjoint()), 1e-8);
  if (method == SquareCommutatorMethod::ensemble)
    return 2 * c_two_point(W2, V2, es, t) - 2 * otoc_closed_form_normalized(W, V, es, t);
  Mat w2t = detail::heisenberg(es.vectors.adjoint() * W2.matrix() * es.vectors, es.values, t);
  Mat v2t = es.vectors.adjoint() * V2.matrix() * es.vectors;
  double two = (w2t * v2t).trace().real() / static_cast<double>(es.dim());
  return 2 * two - 2 * otoc_direct(W, V, es, t);
}

// Monte-Carlo over the two subspace C-ensembles: sum over sectors of
// Tr(e^{iEt} C W C^dag e^{-iEt} C X C^dag) with C drawn from the orbit of each sector's
// diagonalizer.
inline OtocTerms otoc_subspace_mc(const HermitianOperator& W, const HermitianOperator& V, const EigenSystem& es,
                                  double t, long samples, std::uint64_t seed, OtocTerms* stderrs = nullptr,
                                  int threads = 0) {
  detail::check_pair(W, V, es);
  OtocTerms mean, se;
  for (int sec = 0; sec < 2; ++sec) {
    bool sym = sec == 0;
    EigenSystem rs = replica_subspace(es, sym);
    Diagonalizer dz = build_diagonalizer(rs);
    ReplicaOperators ops = replica_operators(W, V, sym);
    auto st = parallel_chunks<RunningStats>(samples, 512, resolve_threads(threads),
                                            [&](long c, long lo, long hi, RunningStats& a) {
                                              auto g = make_engine(seed, (sym ? 6000 : 7000) + c);
                                              for (long i = lo; i < hi; ++i) {
                                                Mat cc = sample_C(dz, g).C;
                                                Mat wc = cc * ops.w_hat * cc.adjoint();
                                                Mat xc = cc * ops.x_hat * cc.adjoint();
                                                // sampled_two_point divides by D; undo it
                                                a.add(detail::sampled_two_point(wc, xc, rs.values, t, 0.0) * rs.dim());
                                              }
                                            });
    (sym ? mean.sym : mean.antisym) = st.mean;
    (sym ? se.sym : se.antisym) = st.stderr_();
  }
  if (stderrs) *stderrs = se;
  return mean;
}

}  // namespace cens
