#pragma once

// Hamiltonian builders used as inputs and test beds.

#include "cens/tensor.hpp"

#include <map>

namespace cens {

enum class Parity { none, even, odd };
enum class Boundary { open, periodic };

struct BoseHubbardParams {
  int L = 5;
  int N = 5;
  double J = 1.0;
  double U = 1.0;
  double theta = 0.0;
  Parity parity = Parity::none;
  Boundary boundary = Boundary::open;
};

inline long binomial(long n, long k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (long i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > (1L << 40)) return r;  // saturate; only compared against caps
  }
  return r;
}

// Occupation vectors with sum N, ascending lexicographic order.
inline std::vector<std::vector<int>> fock_basis(int L, int N) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(L, 0);
  std::function<void(int, int)> rec = [&](int site, int left) {
    if (site == L - 1) {
      cur[site] = left;
      out.push_back(cur);
      return;
    }
    for (int n = 0; n <= left; ++n) {
      cur[site] = n;
      rec(site + 1, left - n);
    }
  };
  rec(0, N);
  return out;
}

namespace detail {
inline void check_bh(const BoseHubbardParams& p) {
  require(p.L >= 2 && p.N >= 1, ErrorCode::invalid_argument, "bose_hubbard: need L >= 2 and N >= 1");
  require(p.theta >= 0 && p.theta <= kPi / 2 + 1e-12, ErrorCode::invalid_argument,
          "bose_hubbard: theta must lie in [0, pi/2]");
  require(binomial(p.N + p.L - 1, p.N) <= kMaxSingleDim, ErrorCode::cap_exceeded,
          "bose_hubbard: dimension cap exceeded");
}
}  // namespace detail

// Full Fock-space matrix, no symmetry reduction.
inline Mat bose_hubbard_full(const BoseHubbardParams& p) {
  detail::check_bh(p);
  auto basis = fock_basis(p.L, p.N);
  std::map<std::vector<int>, long> index;
  for (long i = 0; i < static_cast<long>(basis.size()); ++i) index[basis[i]] = i;
  long d = static_cast<long>(basis.size());
  Mat h = Mat::Zero(d, d);
  std::vector<std::pair<int, int>> bonds;
  for (int l = 0; l + 1 < p.L; ++l) bonds.push_back({l, l + 1});
  if (p.boundary == Boundary::periodic && p.L > 2) bonds.push_back({p.L - 1, 0});
  cplx hop = -0.5 * p.J * std::exp(kI * p.theta);
  for (long i = 0; i < d; ++i) {
    const auto& b = basis[i];
    double inter = 0.0;
    for (int n : b) inter += n * (n - 1);
    h(i, i) += 0.5 * p.U * inter;
    // a^dag_{m} a_{l} with m = l + 1 (mod L on a ring)
    for (auto [l, m] : bonds) {
      if (b[l] == 0) continue;
      auto nb = b;
      double amp = std::sqrt(static_cast<double>(b[l]) * (b[m] + 1));
      nb[l] -= 1;
      nb[m] += 1;
      long j = index.at(nb);
      h(j, i) += hop * amp;
      h(i, j) += std::conj(hop) * amp;
    }
  }
  return h;
}

// Reflection l -> L-1-l. On the open chain the hopping phase is a pure gauge, so the
// reflection is dressed by G = exp(i theta sum_l l n_l) to commute with H.
inline Mat bose_hubbard_parity_operator(const BoseHubbardParams& p) {
  detail::check_bh(p);
  auto basis = fock_basis(p.L, p.N);
  std::map<std::vector<int>, long> index;
  for (long i = 0; i < static_cast<long>(basis.size()); ++i) index[basis[i]] = i;
  long d = static_cast<long>(basis.size());
  auto gauge = [&](const std::vector<int>& b) {
    if (p.boundary == Boundary::periodic) return cplx(1.0);
    double s = 0;
    for (int l = 0; l < p.L; ++l) s += l * b[l];
    return std::exp(kI * p.theta * s);
  };
  Mat r = Mat::Zero(d, d);
  for (long i = 0; i < d; ++i) {
    auto rb = basis[i];
    std::reverse(rb.begin(), rb.end());
    long j = index.at(rb);
    r(j, i) = gauge(rb) * std::conj(gauge(basis[i]));
  }
  return r;
}

inline HermitianOperator bose_hubbard(const BoseHubbardParams& p) {
  Mat h = bose_hubbard_full(p);
  if (p.parity == Parity::none) return HermitianOperator(h, 1e-12);
  Mat r = bose_hubbard_parity_operator(p);
  double comm = max_abs(r * h - h * r);
  require(comm <= 1e-10, ErrorCode::invalid_argument,
          "bose_hubbard: reflection does not commute with H for these parameters (" + std::to_string(comm) + ")");
  // Sector basis from orbits {b, Rb}: deterministic and exactly orthonormal.
  long d = h.rows();
  double sgn = p.parity == Parity::even ? 1.0 : -1.0;
  std::vector<CVec> cols;
  for (long i = 0; i < d; ++i) {
    long j = 0;
    r.col(i).cwiseAbs().maxCoeff(&j);
    cplx ph = r(j, i);
    if (j == i) {
      if (std::abs(ph - sgn) < 1e-9) {
        CVec v = CVec::Zero(d);
        v(i) = 1.0;
        cols.push_back(v);
      }
    } else if (i < j) {
      CVec v = CVec::Zero(d);
      v(i) = 1.0 / std::sqrt(2.0);
      v(j) = sgn * ph / std::sqrt(2.0);
      cols.push_back(v);
    }
  }
  Mat b(d, static_cast<long>(cols.size()));
  for (long c = 0; c < b.cols(); ++c) b.col(c) = cols[c];
  Mat hs = b.adjoint() * h * b;
  return HermitianOperator(0.5 * (hs + hs.adjoint()), 1e-12);
}

// Entries Gaussian, <|H_lm|^2> = 1/d.
inline HermitianOperator gue_sample(long d, std::uint64_t seed) {
  require(d >= 2, ErrorCode::invalid_argument, "gue_sample: d >= 2 required");
  require(d <= kMaxSingleDim, ErrorCode::cap_exceeded, "gue_sample: dimension cap exceeded");
  auto g = make_engine(seed, 0x906e);
  Mat h = Mat::Zero(d, d);
  double sd = 1.0 / std::sqrt(static_cast<double>(d));
  double so = 1.0 / std::sqrt(2.0 * d);
  for (long l = 0; l < d; ++l) {
    h(l, l) = sd * std_normal(g);
    for (long m = l + 1; m < d; ++m) {
      double re = std_normal(g), im = std_normal(g);
      h(l, m) = so * cplx(re, im);
      h(m, l) = std::conj(h(l, m));
    }
  }
  return HermitianOperator(h, 0.0);
}

inline HermitianOperator equally_spaced(long d, double dE) {
  require(d >= 2 && dE > 0, ErrorCode::invalid_argument, "equally_spaced: d >= 2 and dE > 0 required");
  Mat h = Mat::Zero(d, d);
  for (long l = 0; l < d; ++l) h(l, l) = dE * l;
  return HermitianOperator(h, 0.0);
}

// All Pauli strings of weight 1..k. Without `imaginary_coupling` only strings with an
// even number of Y factors enter, so H is real symmetric.
inline HermitianOperator klocal_qubit(int nq, int k, double scale, std::uint64_t seed,
                                      bool imaginary_coupling = false) {
  require(nq >= 1 && k >= 1 && k <= nq, ErrorCode::invalid_argument, "klocal_qubit: need 1 <= k <= Nq");
  require(nq < 31 && (1L << nq) <= kMaxSingleDim, ErrorCode::cap_exceeded, "klocal_qubit: dimension cap exceeded");
  long d = 1L << nq;
  auto g = make_engine(seed, 0x9a011);
  Mat h = Mat::Zero(d, d);
  std::vector<int> sites;
  // qubit 0 is the most significant bit (slow tensor index)
  auto bit = [nq](int q) { return 1L << (nq - 1 - q); };
  std::function<void(int, int)> choose = [&](int start, int left) {
    if (left == 0) {
      int w = static_cast<int>(sites.size());
      long combos = 1;
      for (int i = 0; i < w; ++i) combos *= 3;
      for (long c = 0; c < combos; ++c) {
        long xmask = 0, zmask = 0;
        int ny = 0;
        long cc = c;
        for (int i = 0; i < w; ++i) {
          int t = cc % 3;  // 0:X 1:Y 2:Z
          cc /= 3;
          if (t == 0) xmask |= bit(sites[i]);
          if (t == 1) {
            xmask |= bit(sites[i]);
            zmask |= bit(sites[i]);
            ++ny;
          }
          if (t == 2) zmask |= bit(sites[i]);
        }
        if (!imaginary_coupling && ny % 2 == 1) continue;
        double coef = scale * std_normal(g);
        cplx iy = std::pow(kI, ny);
        for (long x = 0; x < d; ++x) {
          double s = (__builtin_popcountl(x & zmask) % 2) ? -1.0 : 1.0;
          h(x ^ xmask, x) += coef * iy * s;
        }
      }
      return;
    }
    for (int q = start; q <= nq - left; ++q) {
      sites.push_back(q);
      choose(q + 1, left - 1);
      sites.pop_back();
    }
  };
  for (int w = 1; w <= k; ++w) choose(0, w);
  return HermitianOperator(0.5 * (h + h.adjoint()), 1e-12);
}

inline HermitianOperator diagonal_plus_perturbation(const std::vector<double>& e0, double strength,
                                                    std::uint64_t seed) {
  require(strength >= 0, ErrorCode::invalid_argument, "diagonal_plus_perturbation: strength >= 0 required");
  long d = static_cast<long>(e0.size());
  require(d >= 1, ErrorCode::invalid_argument, "diagonal_plus_perturbation: empty spectrum");
  Mat h = Mat::Zero(d, d);
  for (long l = 0; l < d; ++l) h(l, l) = e0[l];
  if (strength > 0 && d >= 2) h += strength * gue_sample(d, splitmix64(seed ^ 0xd1a9)).matrix();
  return HermitianOperator(h, 1e-12);
}

// ---------------------------------------------------------------------------

enum class ModelKind { bose_hubbard, gue, equally_spaced, klocal_qubit, diagonal_plus_perturbation };

struct ModelSpec {
  ModelKind kind = ModelKind::gue;
  std::uint64_t seed = 0;
  long d = 8;
  double dE = 1.0;
  BoseHubbardParams bh;
  int nq = 3;
  int k = 2;
  double coupling_scale = 1.0;
  bool imaginary_coupling = false;
  std::vector<double> e0;
  double strength = 0.0;
};

inline HermitianOperator build_model(const ModelSpec& s) {
  switch (s.kind) {
    case ModelKind::bose_hubbard: return bose_hubbard(s.bh);
    case ModelKind::gue: return gue_sample(s.d, s.seed);
    case ModelKind::equally_spaced: return equally_spaced(s.d, s.dE);
    case ModelKind::klocal_qubit: return klocal_qubit(s.nq, s.k, s.coupling_scale, s.seed, s.imaginary_coupling);
    case ModelKind::diagonal_plus_perturbation: return diagonal_plus_perturbation(s.e0, s.strength, s.seed);
  }
  fail(ErrorCode::config, "unknown model kind");
}

}  // namespace cens
