#pragma once

// Serialization: model specs as JSON (version 1), matrices as binary or CSV, series as CSV,
// and the meta block embedded in every output.

#include "cens/models.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace cens {

using json = nlohmann::json;

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

// ---------------------------------------------------------------------------
// Enum names

inline const char* to_string(ModelKind k) {
  switch (k) {
    case ModelKind::bose_hubbard: return "bose-hubbard";
    case ModelKind::gue: return "gue";
    case ModelKind::equally_spaced: return "equally-spaced";
    case ModelKind::klocal_qubit: return "klocal-qubit";
    case ModelKind::diagonal_plus_perturbation: return "diagonal-plus-perturbation";
  }
  return "?";
}

inline ModelKind model_kind_from_string(const std::string& s) {
  for (auto k : {ModelKind::bose_hubbard, ModelKind::gue, ModelKind::equally_spaced, ModelKind::klocal_qubit,
                 ModelKind::diagonal_plus_perturbation})
    if (s == to_string(k)) return k;
  fail(ErrorCode::config, "unknown model kind '" + s + "'");
}

inline const char* to_string(Parity p) { return p == Parity::none ? "none" : p == Parity::even ? "even" : "odd"; }

inline Parity parity_from_string(const std::string& s) {
  if (s == "none") return Parity::none;
  if (s == "even") return Parity::even;
  if (s == "odd") return Parity::odd;
  fail(ErrorCode::config, "unknown parity '" + s + "'");
}

inline const char* to_string(Boundary b) { return b == Boundary::open ? "open" : "periodic"; }

inline Boundary boundary_from_string(const std::string& s) {
  if (s == "open") return Boundary::open;
  if (s == "periodic") return Boundary::periodic;
  fail(ErrorCode::config, "unknown boundary '" + s + "'");
}

// ---------------------------------------------------------------------------
// ModelSpec <-> JSON

inline json to_json(const ModelSpec& s) {
  json j;
  j["version"] = kSchemaVersion;
  j["kind"] = to_string(s.kind);
  j["seed"] = s.seed;
  switch (s.kind) {
    case ModelKind::gue: j["d"] = s.d; break;
    case ModelKind::equally_spaced:
      j["d"] = s.d;
      j["dE"] = s.dE;
      break;
    case ModelKind::bose_hubbard:
      j["L"] = s.bh.L;
      j["N"] = s.bh.N;
      j["J"] = s.bh.J;
      j["U"] = s.bh.U;
      j["theta"] = s.bh.theta;
      j["parity"] = to_string(s.bh.parity);
      j["boundary"] = to_string(s.bh.boundary);
      break;
    case ModelKind::klocal_qubit:
      j["nq"] = s.nq;
      j["k"] = s.k;
      j["coupling_scale"] = s.coupling_scale;
      j["imaginary_coupling"] = s.imaginary_coupling;
      break;
    case ModelKind::diagonal_plus_perturbation:
      j["e0"] = s.e0;
      j["strength"] = s.strength;
      break;
  }
  return j;
}

inline ModelSpec model_spec_from_json(const json& j) {
  try {
    require(j.is_object(), ErrorCode::config, "model spec must be a JSON object");
    int v = j.value("version", kSchemaVersion);
    require(v == kSchemaVersion, ErrorCode::config, "unsupported model spec version " + std::to_string(v));
    ModelSpec s;
    require(j.contains("kind"), ErrorCode::config, "model spec: missing 'kind'");
    s.kind = model_kind_from_string(j.at("kind").get<std::string>());
    s.seed = j.value("seed", std::uint64_t{0});
    s.d = j.value("d", s.d);
    s.dE = j.value("dE", s.dE);
    s.bh.L = j.value("L", s.bh.L);
    s.bh.N = j.value("N", s.bh.N);
    s.bh.J = j.value("J", s.bh.J);
    s.bh.U = j.value("U", s.bh.U);
    s.bh.theta = j.value("theta", s.bh.theta);
    s.bh.parity = parity_from_string(j.value("parity", std::string("none")));
    s.bh.boundary = boundary_from_string(j.value("boundary", std::string("open")));
    s.nq = j.value("nq", s.nq);
    s.k = j.value("k", s.k);
    s.coupling_scale = j.value("coupling_scale", s.coupling_scale);
    s.imaginary_coupling = j.value("imaginary_coupling", s.imaginary_coupling);
    if (j.contains("e0")) s.e0 = j.at("e0").get<std::vector<double>>();
    s.strength = j.value("strength", s.strength);
    return s;
  } catch (const json::exception& e) {
    fail(ErrorCode::config, std::string("model spec: ") + e.what());
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::io, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::config, "'" + path + "': " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Hashing

// 64-bit FNV-1a.
inline std::uint64_t fnv1a64(const std::string& bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

inline std::string content_hash(const json& config) { return "fnv1a64:" + hex64(fnv1a64(config.dump())); }

inline json meta_block(const std::string& formula, const json& config, std::uint64_t seed) {
  json m;
  m["schema_version"] = kSchemaVersion;
  m["tool"] = "cens";
  m["tool_version"] = kToolVersion;
  m["formula"] = formula;
  m["config"] = config;
  m["seed"] = seed;
  m["input_hash"] = content_hash(config);
  return m;
}

// ---------------------------------------------------------------------------
// Binary matrix: "CENSMAT1", uint64 rows, uint64 cols, then row-major (re, im) doubles,
// all little-endian.

inline constexpr char kMatrixMagic[9] = "CENSMAT1";

namespace detail {
inline bool host_little_endian() {
  std::uint16_t x = 1;
  unsigned char b;
  std::memcpy(&b, &x, 1);
  return b == 1;
}
template <class T>
void put_le(std::ostream& out, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if (!host_little_endian()) std::reverse(b, b + sizeof(T));
  out.write(reinterpret_cast<const char*>(b), sizeof(T));
}
template <class T>
T get_le(std::istream& in) {
  unsigned char b[sizeof(T)];
  in.read(reinterpret_cast<char*>(b), sizeof(T));
  require(in.gcount() == static_cast<std::streamsize>(sizeof(T)), ErrorCode::io, "matrix file truncated");
  if (!host_little_endian()) std::reverse(b, b + sizeof(T));
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}
}  // namespace detail

inline void write_matrix_binary(std::ostream& out, const Mat& m) {
  out.write(kMatrixMagic, 8);
  detail::put_le<std::uint64_t>(out, static_cast<std::uint64_t>(m.rows()));
  detail::put_le<std::uint64_t>(out, static_cast<std::uint64_t>(m.cols()));
  for (long i = 0; i < m.rows(); ++i)
    for (long j = 0; j < m.cols(); ++j) {
      detail::put_le<double>(out, m(i, j).real());
      detail::put_le<double>(out, m(i, j).imag());
    }
}

inline Mat read_matrix_binary(std::istream& in) {
  char magic[8];
  in.read(magic, 8);
  require(in.gcount() == 8 && std::memcmp(magic, kMatrixMagic, 8) == 0, ErrorCode::io, "bad matrix magic");
  auto rows = detail::get_le<std::uint64_t>(in), cols = detail::get_le<std::uint64_t>(in);
  require(rows <= static_cast<std::uint64_t>(kMaxSingleDim * kMaxSingleDim) &&
              cols <= static_cast<std::uint64_t>(kMaxSingleDim * kMaxSingleDim) && rows * cols <= (1ULL << 28),
          ErrorCode::cap_exceeded, "matrix file dimensions exceed caps");
  Mat m(static_cast<long>(rows), static_cast<long>(cols));
  for (long i = 0; i < m.rows(); ++i)
    for (long j = 0; j < m.cols(); ++j) {
      double re = detail::get_le<double>(in);
      double im = detail::get_le<double>(in);
      m(i, j) = cplx(re, im);
    }
  return m;
}

inline std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// CSV: header "row,col,re,im", one line per entry, row-major.
inline void write_matrix_csv(std::ostream& out, const Mat& m) {
  out << "row,col,re,im\n";
  for (long i = 0; i < m.rows(); ++i)
    for (long j = 0; j < m.cols(); ++j)
      out << i << ',' << j << ',' << fmt_double(m(i, j).real()) << ',' << fmt_double(m(i, j).imag()) << '\n';
}

inline Mat read_matrix_csv(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)) && line.rfind("row,col,re,im", 0) == 0, ErrorCode::io,
          "matrix CSV: missing header");
  std::vector<std::tuple<long, long, double, double>> rows;
  long nr = 0, nc = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    long i, j;
    double re, im;
    require(std::sscanf(line.c_str(), "%ld,%ld,%lf,%lf", &i, &j, &re, &im) == 4 && i >= 0 && j >= 0, ErrorCode::io,
            "matrix CSV: malformed line '" + line + "'");
    rows.emplace_back(i, j, re, im);
    nr = std::max(nr, i + 1);
    nc = std::max(nc, j + 1);
  }
  require(nr * nc == static_cast<long>(rows.size()), ErrorCode::io, "matrix CSV: entries missing or duplicated");
  Mat m = Mat::Constant(nr, nc, cplx(NAN, NAN));
  for (auto& [i, j, re, im] : rows) m(i, j) = cplx(re, im);
  require(m.allFinite(), ErrorCode::io, "matrix CSV: entries missing or duplicated");
  return m;
}

inline void write_matrix_file(const std::string& path, const Mat& m) {
  bool csv = path.size() >= 4 && path.substr(path.size() - 4) == ".csv";
  std::ofstream out(path, csv ? std::ios::out : std::ios::binary);
  require(out.good(), ErrorCode::io, "cannot write '" + path + "'");
  if (csv)
    write_matrix_csv(out, m);
  else
    write_matrix_binary(out, m);
  require(out.good(), ErrorCode::io, "write failed for '" + path + "'");
}

inline Mat read_matrix_file(const std::string& path) {
  bool csv = path.size() >= 4 && path.substr(path.size() - 4) == ".csv";
  std::ifstream in(path, csv ? std::ios::in : std::ios::binary);
  require(in.good(), ErrorCode::io, "cannot open '" + path + "'");
  return csv ? read_matrix_csv(in) : read_matrix_binary(in);
}

// ---------------------------------------------------------------------------
// Series

struct CorrelatorSeries {
  std::string formula;
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> stderrs;  // empty when exact
};

// Meta lines are '#'-prefixed JSON so the table itself stays plain.
inline void write_series_csv(std::ostream& out, const CorrelatorSeries& s, const json* meta = nullptr) {
  if (meta) out << "# " << meta->dump() << '\n';
  bool se = !s.stderrs.empty();
  out << (se ? "time,value,stderr\n" : "time,value\n");
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    out << fmt_double(s.times[i]) << ',' << fmt_double(s.values[i]);
    if (se) out << ',' << fmt_double(s.stderrs[i]);
    out << '\n';
  }
}

inline CorrelatorSeries read_series_csv(std::istream& in) {
  CorrelatorSeries s;
  std::string line;
  bool header = false, se = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      require(line == "time,value" || line == "time,value,stderr", ErrorCode::io, "series CSV: bad header");
      se = line.size() > 10;
      header = true;
      continue;
    }
    double t, v, e = 0;
    int n = std::sscanf(line.c_str(), "%lf,%lf,%lf", &t, &v, &e);
    require(n == (se ? 3 : 2), ErrorCode::io, "series CSV: malformed line '" + line + "'");
    s.times.push_back(t);
    s.values.push_back(v);
    if (se) s.stderrs.push_back(e);
  }
  require(header, ErrorCode::io, "series CSV: missing header");
  return s;
}

inline json to_json(const CorrelatorSeries& s) {
  json j;
  j["formula"] = s.formula;
  j["time"] = s.times;
  j["value"] = s.values;
  if (!s.stderrs.empty()) j["stderr"] = s.stderrs;
  return j;
}

}  // namespace cens
