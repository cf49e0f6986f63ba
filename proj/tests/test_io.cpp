#include "helpers.hpp"

#include <cstdio>
#include <filesystem>
#include <sstream>

using namespace cens;
using namespace th;

namespace {
ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return static_cast<ErrorCode>(0);
}
}  // namespace

TEST(ModelJson, RoundTripAllKinds) {
  ModelSpec s;
  s.seed = 99;
  s.d = 7;
  s.dE = 0.25;
  s.bh.L = 4;
  s.bh.N = 3;
  s.bh.theta = 0.5;
  s.bh.parity = Parity::odd;
  s.nq = 3;
  s.k = 2;
  s.coupling_scale = 0.5;
  s.imaginary_coupling = true;
  s.e0 = {0.0, 0.5, 2.0};
  s.strength = 0.1;
  for (ModelKind k : {ModelKind::gue, ModelKind::equally_spaced, ModelKind::bose_hubbard, ModelKind::klocal_qubit,
                      ModelKind::diagonal_plus_perturbation}) {
    s.kind = k;
    json j = to_json(s);
    EXPECT_EQ(j["version"], 1);
    ModelSpec r = model_spec_from_json(json::parse(j.dump()));
    EXPECT_EQ(max_abs(build_model(r).matrix() - build_model(s).matrix()), 0.0) << to_string(k);
    EXPECT_EQ(to_json(r), j);
  }
}

TEST(ModelJson, ConfigErrors) {
  EXPECT_EQ(code_of([] { model_spec_from_json(json::parse(R"({"d": 3})")); }), ErrorCode::config);
  EXPECT_EQ(code_of([] { model_spec_from_json(json::parse(R"({"kind": "nope"})")); }), ErrorCode::config);
  EXPECT_EQ(code_of([] { model_spec_from_json(json::parse(R"({"kind": "gue", "version": 2})")); }), ErrorCode::config);
  EXPECT_EQ(code_of([] { model_spec_from_json(json::parse(R"({"kind": "gue", "d": "x"})")); }), ErrorCode::config);
  EXPECT_EQ(code_of([] { model_spec_from_json(json::parse("[1]")); }), ErrorCode::config);
  EXPECT_EQ(code_of([] { read_json_file("/nonexistent/file.json"); }), ErrorCode::io);
}

TEST(MatrixIo, BinaryRoundTripIsBitExact) {
  Mat m = random_matrix(5, 3, 1);
  std::stringstream ss;
  write_matrix_binary(ss, m);
  EXPECT_EQ(ss.str().size(), 8u + 16u + 15u * 16u);
  EXPECT_EQ(ss.str().substr(0, 8), "CENSMAT1");
  Mat r = read_matrix_binary(ss);
  EXPECT_EQ(max_abs(r - m), 0.0);
}

TEST(MatrixIo, BinaryBadMagicAndTruncation) {
  std::stringstream bad("NOTAMAT1........");
  EXPECT_EQ(code_of([&] { read_matrix_binary(bad); }), ErrorCode::io);
  std::stringstream ss;
  write_matrix_binary(ss, random_matrix(2, 2, 2));
  std::string s = ss.str();
  std::stringstream cut(s.substr(0, s.size() - 5));
  EXPECT_EQ(code_of([&] { read_matrix_binary(cut); }), ErrorCode::io);
}

TEST(MatrixIo, CsvRoundTripIsBitExact) {
  Mat m = random_matrix(4, 4, 3);
  m(1, 2) = cplx(1e-300, -3.5e200);
  std::stringstream ss;
  write_matrix_csv(ss, m);
  Mat r = read_matrix_csv(ss);
  EXPECT_EQ(max_abs(r - m), 0.0);
}

TEST(MatrixIo, CsvErrors) {
  std::stringstream noheader("0,0,1,0\n");
  EXPECT_EQ(code_of([&] { read_matrix_csv(noheader); }), ErrorCode::io);
  std::stringstream missing("row,col,re,im\n0,0,1,0\n1,1,1,0\n");
  EXPECT_EQ(code_of([&] { read_matrix_csv(missing); }), ErrorCode::io);
  std::stringstream junk("row,col,re,im\n0,0,abc\n");
  EXPECT_EQ(code_of([&] { read_matrix_csv(junk); }), ErrorCode::io);
}

TEST(MatrixIo, FilesChooseFormatByExtension) {
  auto dir = std::filesystem::temp_directory_path() / "cens_io_test";
  std::filesystem::create_directories(dir);
  Mat m = random_matrix(3, 3, 4);
  for (const char* name : {"m.bin", "m.csv"}) {
    std::string p = (dir / name).string();
    write_matrix_file(p, m);
    EXPECT_EQ(max_abs(read_matrix_file(p) - m), 0.0);
  }
  std::ifstream csv((dir / "m.csv").string());
  std::string first;
  std::getline(csv, first);
  EXPECT_EQ(first, "row,col,re,im");
  EXPECT_EQ(code_of([&] { read_matrix_file((dir / "absent.bin").string()); }), ErrorCode::io);
  std::filesystem::remove_all(dir);
}

TEST(SeriesIo, RoundTripWithAndWithoutStderr) {
  CorrelatorSeries s{"c2", {0.0, 0.5, 1.0}, {1.0, 0.25, -0.125}, {}};
  json meta = meta_block("c2", json{{"d", 4}}, 7);
  for (bool se : {false, true}) {
    if (se) s.stderrs = {0.0, 0.01, 0.02};
    std::stringstream ss;
    write_series_csv(ss, s, &meta);
    EXPECT_EQ(ss.str().rfind("# ", 0), 0u);
    CorrelatorSeries r = read_series_csv(ss);
    EXPECT_EQ(r.times, s.times);
    EXPECT_EQ(r.values, s.values);
    EXPECT_EQ(r.stderrs, s.stderrs);
  }
  std::stringstream bad("t,v\n");
  EXPECT_EQ(code_of([&] { read_series_csv(bad); }), ErrorCode::io);
}

TEST(Meta, HashDeterministicAndSensitive) {
  json a{{"d", 4}, {"seed", 1}}, b{{"seed", 1}, {"d", 4}}, c{{"d", 5}, {"seed", 1}};
  EXPECT_EQ(content_hash(a), content_hash(b));  // object keys are sorted on dump
  EXPECT_NE(content_hash(a), content_hash(c));
  EXPECT_EQ(content_hash(a).rfind("fnv1a64:", 0), 0u);
  // FNV-1a reference values
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  json m = meta_block("sff", a, 3);
  EXPECT_EQ(m["tool_version"], "1.0.0");
  EXPECT_EQ(m["schema_version"], 1);
  EXPECT_EQ(m["input_hash"], content_hash(a));
}
