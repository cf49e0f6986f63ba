#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace cens {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

// Dimension caps. Only one knob each; callers may pass their own.
inline constexpr long kMaxSingleDim = 4096;
inline constexpr long kMaxFoldDim = 4096;
inline constexpr int kMaxEnumerationDim = 8;

enum class ErrorCode {
  config = 2,
  degenerate = 3,
  cap_exceeded = 4,
  not_converged = 5,
  invalid_argument = 6,
  io = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode c, const std::string& msg) { throw Error(c, msg); }

inline void require(bool ok, ErrorCode c, const std::string& msg) {
  if (!ok) fail(c, msg);
}

inline double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline Mat identity(long n) { return Mat::Identity(n, n); }

// ---------------------------------------------------------------------------
// Seeds and streams

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent engine for (seed, stream). Streams never collide for distinct pairs
// in practice since both words are mixed before seeding.
inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream = 0) {
  std::uint64_t a = splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
  std::uint64_t b = splitmix64(a + stream);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

// Standard normal from raw 64-bit draws (Box-Muller). Avoids library-specific
// normal_distribution so fixed seeds give identical matrices everywhere.
inline double std_normal(std::mt19937_64& g) {
  constexpr double scale = 1.0 / 9007199254740992.0;  // 2^-53
  double u1 = (static_cast<double>(g() >> 11) + 0.5) * scale;
  double u2 = static_cast<double>(g() >> 11) * scale;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

inline double uniform01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * (1.0 / 9007199254740992.0);
}

// Uniform integer in [0, n) by rejection.
inline std::uint64_t uniform_index(std::mt19937_64& g, std::uint64_t n) {
  std::uint64_t lim = (~0ULL) - (~0ULL) % n;
  std::uint64_t x;
  do {
    x = g();
  } while (x >= lim);
  return x % n;
}

inline std::vector<int> random_permutation(std::mt19937_64& g, int d) {
  std::vector<int> p(d);
  for (int i = 0; i < d; ++i) p[i] = i;
  for (int i = d - 1; i > 0; --i) std::swap(p[i], p[uniform_index(g, i + 1)]);
  return p;
}

// ---------------------------------------------------------------------------
// Streaming statistics (Welford with Chan merge)

struct RunningStats {
  long n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    double delta = x - mean;
    mean += delta / n;
    m2 += delta * (x - mean);
  }
  void merge(const RunningStats& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    long nn = n + o.n;
    double delta = o.mean - mean;
    mean += delta * o.n / nn;
    m2 += o.m2 + delta * delta * (static_cast<double>(n) * o.n / nn);
    n = nn;
  }
  double variance() const { return n > 1 ? m2 / (n - 1) : 0.0; }
  double stderr_() const { return n > 1 ? std::sqrt(variance() / n) : 0.0; }
};

// Entrywise version for complex matrices; real and imaginary parts tracked separately.
// Plain power sums: cheap per sample, and entries here are O(1).
struct MatrixStats {
  long n = 0;
  Eigen::MatrixXd sre, sim, qre, qim;

  void add(const Mat& x) {
    if (n == 0) {
      sre = Eigen::MatrixXd::Zero(x.rows(), x.cols());
      sim = sre;
      qre = sre;
      qim = sre;
    }
    ++n;
    sre += x.real();
    sim += x.imag();
    qre += x.real().cwiseAbs2();
    qim += x.imag().cwiseAbs2();
  }
  void merge(const MatrixStats& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    n += o.n;
    sre += o.sre;
    sim += o.sim;
    qre += o.qre;
    qim += o.qim;
  }
  Mat mean() const {
    Mat m(sre.rows(), sre.cols());
    m.real() = sre / n;
    m.imag() = sim / n;
    return m;
  }
  static Eigen::MatrixXd stderr_of(const Eigen::MatrixXd& s, const Eigen::MatrixXd& q, long n) {
    Eigen::MatrixXd mu = s / n;
    Eigen::MatrixXd var = ((q / n - mu.cwiseAbs2()) * (static_cast<double>(n) / std::max<long>(n - 1, 1)))
                              .cwiseMax(0.0);
    return (var / n).cwiseSqrt();
  }
  Eigen::MatrixXd stderr_re() const { return stderr_of(sre, qre, n); }
  Eigen::MatrixXd stderr_im() const { return stderr_of(sim, qim, n); }

  // Largest |mean - ref| / stderr over entries and parts; entries with zero spread
  // must match to `abs_floor`.
  double max_z(const Mat& ref, double abs_floor = 1e-12) const {
    Eigen::MatrixXd sr = stderr_re(), si = stderr_im();
    Mat mu = mean();
    double z = 0.0;
    auto one = [&](double m, double r, double s) {
      double diff = std::abs(m - r);
      if (diff <= abs_floor) return 0.0;
      if (s > 1e-14) return diff / s;
      return std::numeric_limits<double>::infinity();
    };
    for (long i = 0; i < mu.rows(); ++i)
      for (long j = 0; j < mu.cols(); ++j) {
        z = std::max(z, one(mu(i, j).real(), ref(i, j).real(), sr(i, j)));
        z = std::max(z, one(mu(i, j).imag(), ref(i, j).imag(), si(i, j)));
      }
    return z;
  }
};

struct EnsembleEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  long samples = 0;
  std::uint64_t seed = 0;

  // Differences at round-off level count as agreement, so samples that are
  // deterministic up to rounding do not produce spurious z-scores.
  double z(double ref) const {
    double diff = std::abs(mean - ref);
    if (diff <= 1e-12 * std::max(1.0, std::abs(ref))) return 0.0;
    if (stderr_ > 0) return diff / stderr_;
    return std::numeric_limits<double>::infinity();
  }
};

inline EnsembleEstimate to_estimate(const RunningStats& s, std::uint64_t seed) {
  return {s.mean, s.stderr_(), s.n, seed};
}

// ---------------------------------------------------------------------------
// Threads

inline int resolve_threads(int requested = 0) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CENS_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Splits [0, n) into fixed-size chunks. Chunk c always draws from stream c and results
// are merged in chunk order, so output does not depend on the thread count.
template <class Acc, class Body>
Acc parallel_chunks(long n, long chunk, int threads, Body body) {
  long nchunks = (n + chunk - 1) / chunk;
  std::vector<Acc> parts(nchunks);
  auto run = [&](long c) {
    long lo = c * chunk, hi = std::min(n, lo + chunk);
    body(c, lo, hi, parts[c]);
  };
  threads = std::max(1, std::min<int>(threads, static_cast<int>(nchunks)));
  if (threads == 1) {
    for (long c = 0; c < nchunks; ++c) run(c);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (long c = t; c < nchunks; c += threads) run(c);
      });
    for (auto& th : pool) th.join();
  }
  Acc out{};
  for (auto& p : parts) out.merge(p);
  return out;
}

}  // namespace cens
