// cens: command-line front end. Builds models, evaluates ensemble quantities, runs the
// Monte-Carlo cross-checks and writes figure tables.

#include "cens/cens.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

using namespace cens;

namespace {

struct TimeGrid {
  double start = 0.0, stop = 10.0;
  long steps = 100;

  std::vector<double> points() const {
    require(steps >= 1, ErrorCode::invalid_argument, "times: steps >= 1 required");
    require(stop > start, ErrorCode::invalid_argument, "times: stop > start required");
    std::vector<double> t(steps + 1);
    for (long i = 0; i <= steps; ++i) t[i] = start + (stop - start) * static_cast<double>(i) / steps;
    return t;
  }
};

struct RunConfig {
  std::string command;
  ModelSpec model;
  TimeGrid times;
  double beta = 0.0;
  std::vector<std::uint64_t> seeds{1};
  std::string output;  // empty: stdout
  std::string format = "json";
  int threads = 0;

  std::uint64_t seed() const { return seeds.empty() ? 1 : seeds.front(); }
};

json to_json(const RunConfig& c) {
  json j;
  j["version"] = kSchemaVersion;
  j["command"] = c.command;
  j["model"] = to_json(c.model);
  j["times"] = {{"start", c.times.start}, {"stop", c.times.stop}, {"steps", c.times.steps}};
  j["beta"] = c.beta;
  j["seeds"] = c.seeds;
  j["format"] = c.format;
  return j;
}

// Options shared by every subcommand that needs a Hamiltonian.
struct ModelFlags {
  std::string file, kind = "gue", parity = "none", boundary = "open";
  ModelSpec s;
  CLI::Option* kind_opt = nullptr;
  std::vector<CLI::Option*> opts;

  void attach(CLI::App* app) {
    opts.push_back(app->add_option("--model", file, "model spec JSON file"));
    kind_opt = app->add_option("--kind", kind, "bose-hubbard|gue|equally-spaced|klocal-qubit|diagonal-plus-perturbation");
    opts.push_back(kind_opt);
    opts.push_back(app->add_option("--d", s.d, "dimension (gue, equally-spaced)"));
    opts.push_back(app->add_option("--dE", s.dE, "level spacing (equally-spaced)"));
    opts.push_back(app->add_option("--L", s.bh.L, "sites (bose-hubbard)"));
    opts.push_back(app->add_option("--N", s.bh.N, "bosons (bose-hubbard)"));
    opts.push_back(app->add_option("--J", s.bh.J, "hopping (bose-hubbard)"));
    opts.push_back(app->add_option("--U", s.bh.U, "interaction (bose-hubbard)"));
    opts.push_back(app->add_option("--theta", s.bh.theta, "hopping phase in [0, pi/2] (bose-hubbard)"));
    opts.push_back(app->add_option("--parity", parity, "none|even|odd (bose-hubbard)"));
    opts.push_back(app->add_option("--boundary", boundary, "open|periodic (bose-hubbard)"));
    opts.push_back(app->add_option("--nq", s.nq, "qubits (klocal-qubit)"));
    opts.push_back(app->add_option("--k", s.k, "locality (klocal-qubit)"));
    opts.push_back(app->add_option("--scale", s.coupling_scale, "coupling scale (klocal-qubit)"));
    opts.push_back(app->add_flag("--imaginary", s.imaginary_coupling, "include odd-Y Pauli strings (klocal-qubit)"));
    opts.push_back(app->add_option("--e0", s.e0, "diagonal energies (diagonal-plus-perturbation)"));
    opts.push_back(app->add_option("--strength", s.strength, "perturbation strength (diagonal-plus-perturbation)"));
  }
  bool any_given() const {
    for (auto* o : opts)
      if (o->count() > 0) return true;
    return false;
  }
  ModelSpec resolve(std::uint64_t seed) {
    if (!file.empty()) return model_spec_from_json(read_json_file(file));
    ModelSpec m = s;
    m.kind = model_kind_from_string(kind);
    m.bh.parity = parity_from_string(parity);
    m.bh.boundary = boundary_from_string(boundary);
    m.seed = seed;
    return m;
  }
};

struct Common {
  std::string config_file, output, format = "json";
  int threads = 0;
  std::vector<std::uint64_t> seeds;
  double beta = 0.0;
  TimeGrid times;
  CLI::Option *o_out = nullptr, *o_fmt = nullptr, *o_thr = nullptr, *o_seed = nullptr, *o_beta = nullptr,
              *o_t0 = nullptr, *o_t1 = nullptr, *o_steps = nullptr;
  ModelFlags model;

  void attach(CLI::App* app, bool with_times) {
    app->add_option("--config", config_file, "run config JSON (version 1); flags override");
    o_out = app->add_option("-o,--output", output, "output path (default stdout)");
    o_fmt = app->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    o_thr = app->add_option("--threads", threads, "worker threads (default: CENS_THREADS, then hardware)");
    o_seed = app->add_option("--seed", seeds, "master seed(s)");
    o_beta = app->add_option("--beta", beta, "inverse temperature");
    if (with_times) {
      o_t0 = app->add_option("--tmin", times.start, "first time");
      o_t1 = app->add_option("--tmax", times.stop, "last time");
      o_steps = app->add_option("--steps", times.steps, "number of time intervals");
    }
    model.attach(app);
  }

  RunConfig resolve(const std::string& command) {
    RunConfig c;
    c.command = command;
    json cfg;
    if (!config_file.empty()) {
      cfg = read_json_file(config_file);
      require(cfg.is_object(), ErrorCode::config, "config must be a JSON object");
      require(cfg.value("version", kSchemaVersion) == kSchemaVersion, ErrorCode::config, "unsupported config version");
      if (cfg.contains("command"))
        require(cfg.at("command").get<std::string>() == command, ErrorCode::config,
                "config is for command '" + cfg.at("command").get<std::string>() + "'");
    }
    auto given = [](CLI::Option* o) { return o && o->count() > 0; };
    try {
      c.output = given(o_out) || !cfg.contains("output") ? output : cfg.at("output").get<std::string>();
      c.format = given(o_fmt) || !cfg.contains("format") ? format : cfg.at("format").get<std::string>();
      c.threads = given(o_thr) || !cfg.contains("threads") ? threads : cfg.at("threads").get<int>();
      c.beta = given(o_beta) || !cfg.contains("beta") ? beta : cfg.at("beta").get<double>();
      if (given(o_seed))
        c.seeds = seeds;
      else if (cfg.contains("seeds"))
        c.seeds = cfg.at("seeds").get<std::vector<std::uint64_t>>();
      c.times = times;
      if (cfg.contains("times")) {
        const json& t = cfg.at("times");
        if (!given(o_t0)) c.times.start = t.value("start", times.start);
        if (!given(o_t1)) c.times.stop = t.value("stop", times.stop);
        if (!given(o_steps)) c.times.steps = t.value("steps", times.steps);
      }
      if (cfg.contains("model") && !model.any_given())
        c.model = model_spec_from_json(cfg.at("model"));
      else
        c.model = model.resolve(c.seed());
    } catch (const json::exception& e) {
      fail(ErrorCode::config, std::string("config: ") + e.what());
    }
    require(c.format == "json" || c.format == "csv", ErrorCode::config, "format must be json or csv");
    require(!c.seeds.empty(), ErrorCode::config, "at least one seed required");
    return c;
  }
};

// Output sink: file or stdout, written once.
void emit(const RunConfig& c, const std::string& text) {
  if (c.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.output, std::ios::binary);
  require(out.good(), ErrorCode::io, "cannot write '" + c.output + "'");
  out << text;
  require(out.good(), ErrorCode::io, "write failed for '" + c.output + "'");
}

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

std::string series_text(const RunConfig& c, const CorrelatorSeries& s, const json& meta, json extra = json::object()) {
  if (c.format == "csv") {
    std::ostringstream os;
    write_series_csv(os, s, &meta);
    return os.str();
  }
  json j = extra;
  j["meta"] = meta;
  j["series"] = to_json(s);
  return json_text(j);
}

struct Built {
  HermitianOperator H;
  EigenSystem es;
};

Built build(const RunConfig& c) {
  HermitianOperator h = build_model(c.model);
  return {h, eigh(h)};
}

json spectrum_summary(const EigenSystem& es) {
  json j;
  j["dimension"] = es.dim();
  j["e_min"] = es.values(0);
  j["e_max"] = es.values(es.dim() - 1);
  j["mean_spacing"] = es.mean_spacing;
  RunningStats s;
  long degenerate = 0;
  for (std::size_t i = 0; i < es.spacings.size(); ++i) {
    s.add(es.spacings[i]);
    degenerate += es.degenerate[i] ? 1 : 0;
  }
  j["spacing_mean"] = s.mean;
  j["spacing_variance"] = s.n > 1 ? s.m2 / s.n : 0.0;
  j["degenerate_gaps"] = degenerate;
  if (es.dim() >= 3 && degenerate == 0)
    j["mean_spacing_ratio"] = spacing_ratios(es).mean;
  else
    j["mean_spacing_ratio"] = nullptr;
  return j;
}

// Observables: from matrix files when given, otherwise independent GUE draws.
HermitianOperator observable(const std::string& path, long d, std::uint64_t seed) {
  if (!path.empty()) {
    HermitianOperator x(read_matrix_file(path), 1e-10);
    require(x.dim() == d, ErrorCode::invalid_argument, "observable '" + path + "' has the wrong dimension");
    return x;
  }
  return gue_sample(d, seed);
}

// ---------------------------------------------------------------------------

int cmd_model(const RunConfig& c, const std::string& matrix_path) {
  Built b = build(c);
  if (!matrix_path.empty()) write_matrix_file(matrix_path, b.H.matrix());
  json j;
  j["meta"] = meta_block("model", to_json(c), c.seed());
  j["summary"] = spectrum_summary(b.es);
  j["matrix_file"] = matrix_path;
  j["eigenvalues"] = std::vector<double>(b.es.values.data(), b.es.values.data() + b.es.dim());
  emit(c, json_text(j));
  return 0;
}

int cmd_sff(const RunConfig& c, const std::string& kind) {
  Built b = build(c);
  FormFactorKind k;
  if (kind == "infinite")
    k = FormFactorKind::infinite();
  else if (kind == "finite")
    k = FormFactorKind::finite(c.beta);
  else if (kind == "sym")
    k = FormFactorKind::sym();
  else if (kind == "antisym")
    k = FormFactorKind::antisym();
  else
    fail(ErrorCode::config, "sff: unknown kind '" + kind + "'");
  CorrelatorSeries s{"form_factor:" + kind, c.times.points(), {}, {}};
  for (double t : s.times) s.values.push_back(form_factor(b.es, k, t));
  // mean over the second half of the grid
  double late = 0;
  std::size_t n0 = s.values.size() / 2;
  for (std::size_t i = n0; i < s.values.size(); ++i) late += s.values[i];
  late /= static_cast<double>(s.values.size() - n0);
  json extra;
  extra["late_time_mean"] = late;
  extra["dimension"] = b.es.dim();
  emit(c, series_text(c, s, meta_block(s.formula, to_json(c), c.seed()), extra));
  return 0;
}

struct ObsFlags {
  std::string w, v;
  bool check_mc = false;
  long samples = 10000;
};

int cmd_twopoint(const RunConfig& c, const ObsFlags& f) {
  Built b = build(c);
  long d = b.es.dim();
  HermitianOperator W = observable(f.w, d, splitmix64(c.seed() ^ 0x57)), V = observable(f.v, d, splitmix64(c.seed() ^ 0x56));
  auto times = c.times.points();
  CorrelatorSeries s{c.beta > 0 ? "c_two_point_regulated" : "c_two_point", times, {}, {}};
  for (double t : times)
    s.values.push_back(c.beta > 0 ? c_two_point_regulated(W, V, b.es, c.beta, t) : c_two_point(W, V, b.es, t));
  json extra = json::object();
  if (f.check_mc) {
    SeriesEstimate mc = c_two_point_mc(W, V, b.es, times, f.samples, c.seed(), c.beta, c.threads);
    json rows = json::array();
    double zmax = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      double z = mc.values[i].z(s.values[i]);
      zmax = std::max(zmax, z);
      rows.push_back({{"time", times[i]}, {"closed_form", s.values[i]}, {"mc_mean", mc.values[i].mean},
                      {"mc_stderr", mc.values[i].stderr_}, {"z", z}});
    }
    extra["mc_check"] = {{"samples", f.samples}, {"rows", rows}, {"max_abs_z", zmax}, {"pass", zmax <= 5.0}};
    if (c.format == "csv") {
      // the report is JSON-only; CSV carries the closed form with MC errors
      for (auto& m : mc.values) s.stderrs.push_back(m.stderr_);
    }
  }
  emit(c, series_text(c, s, meta_block(s.formula, to_json(c), c.seed()), extra));
  return 0;
}

int cmd_otoc(const RunConfig& c, const ObsFlags& f, bool square) {
  Built b = build(c);
  long d = b.es.dim();
  HermitianOperator W = observable(f.w, d, splitmix64(c.seed() ^ 0x57)), V = observable(f.v, d, splitmix64(c.seed() ^ 0x56));
  auto times = c.times.points();
  CorrelatorSeries s{square ? "square_commutator:ensemble" : "otoc_closed_form_normalized", times, {}, {}};
  for (double t : times)
    s.values.push_back(square ? square_commutator(W, V, b.es, t, SquareCommutatorMethod::ensemble)
                              : otoc_closed_form_normalized(W, V, b.es, t));
  json extra = json::object();
  if (f.check_mc && !square) {
    json rows = json::array();
    double zmax = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      OtocTerms se;
      OtocTerms m = otoc_subspace_mc(W, V, b.es, times[i], f.samples, c.seed() + i, &se, c.threads);
      double mean = m.total() / d, err = std::hypot(se.sym, se.antisym) / d;
      double z = err > 0 ? std::abs(mean - s.values[i]) / err : 0.0;
      zmax = std::max(zmax, z);
      rows.push_back({{"time", times[i]}, {"closed_form", s.values[i]}, {"mc_mean", mean}, {"mc_stderr", err}, {"z", z}});
    }
    extra["mc_check"] = {{"samples", f.samples}, {"rows", rows}, {"max_abs_z", zmax}, {"pass", zmax <= 5.0}};
  }
  emit(c, series_text(c, s, meta_block(s.formula, to_json(c), c.seed()), extra));
  return 0;
}

int cmd_plateau(const RunConfig& c, bool solve, int max_iter, double tol) {
  Built b = build(c);
  long d = b.es.dim();
  PlateauOperator g = plateau_exact(b.es);
  PlateauChecks chk = check_plateau(g.matrix, d, &b.H.matrix());
  json j;
  j["meta"] = meta_block(solve ? "solve_newton" : "plateau_exact", to_json(c), c.seed());
  j["checks"] = {{"hermiticity", chk.hermiticity},   {"min_eigenvalue", chk.min_eigenvalue},
                 {"trace_error", chk.trace_error},   {"swap_left", chk.swap_left},
                 {"swap_right", chk.swap_right},     {"partial_trace_asymmetry", chk.partial_trace_asymmetry},
                 {"dephasing", chk.dephasing}};
  int rc = 0;
  if (solve) {
    json r;
    PhiOperator phi;
    if (d == 2) {
      phi = solve_qubit(b.H);
      r["method"] = "solve_qubit";
      r["converged"] = true;
      r["residual"] = plateau_residual(phi, HermitianOperator(detail::centered(b.H.matrix()), 1e-8));
    } else {
      PlateauSolveReport rep = solve_newton(b.H, max_iter, tol, 32, c.seed());
      phi = rep.phi;
      r["method"] = "solve_newton";
      r["converged"] = rep.converged;
      r["residual"] = rep.residual;
      r["init_residual"] = rep.init_residual;
      r["iterations"] = rep.iterations;
      r["restarts"] = rep.restarts;
      r["residual_history"] = rep.residual_history;
      r["alpha"] = rep.alpha;
      r["dh_scale"] = rep.dh_scale;
      if (!rep.converged) rc = static_cast<int>(ErrorCode::not_converged);
    }
    r["reconstruction_error"] = max_abs(bootstrap_form(phi, d).matrix - g.matrix);
    j["solve"] = r;
  }
  emit(c, json_text(j));
  if (rc) std::cerr << "cens: solver did not converge (best residual reported)\n";
  return rc;
}

int cmd_frame(const RunConfig& c, long pairs, bool enumerate) {
  Built b = build(c);
  Diagonalizer dz = build_diagonalizer(b.es);
  json j;
  j["meta"] = meta_block("frame_potential2", to_json(c), c.seed());
  double ipr = ipr_bar(dz);
  j["ipr_bar"] = ipr;
  j["critical_ipr"] = 2.0 / (dz.dim() + 1);
  j["closed_form"] = frame_potential2(dz);
  if (enumerate) j["enumerated"] = frame_potential2_enumerated(dz);
  if (pairs > 0) {
    EnsembleEstimate e = frame_potential2_mc(dz, pairs, c.seed(), c.threads);
    j["mc"] = {{"pairs", pairs}, {"mean", e.mean}, {"stderr", e.stderr_}, {"z_vs_closed_form", e.z(frame_potential2(dz))}};
  }
  emit(c, json_text(j));
  return 0;
}

struct VolumeFlags {
  double eps = 1.0, sigma2 = -1.0;
  std::string ball = "d2";
  long gates = 2;
  int locality = 2, qubits = 0;
};

BallDimension ball_of(const std::string& s) {
  if (s == "d2") return BallDimension::d_squared;
  if (s == "pairs") return BallDimension::pairs_plus_diagonal;
  fail(ErrorCode::config, "ball dimension must be d2 or pairs");
}

int cmd_volume(const RunConfig& c, const VolumeFlags& f) {
  Built b = build(c);
  long d = b.es.dim();
  BallDimension ball = ball_of(f.ball);
  json j;
  j["meta"] = meta_block("volume", to_json(c), c.seed());
  j["log_volume"] = log_volume(b.es, false).log_magnitude;
  j["log_volume_normalized"] = log_volume(b.es, true).log_magnitude;
  if (b.es.values(0) > 0) j["duality_residual"] = duality_check(b.es);
  LogValue card = cardinality(b.es, f.eps, ball);
  j["cardinality_log"] = card.log_magnitude;
  j["haar_cardinality_log"] = haar_cardinality(d, f.eps, ball).log_magnitude;
  j["cardinality_ratio"] = cardinality_ratio(b.es, f.eps, ball);
  RunningStats sp;
  for (double s : b.es.spacings) sp.add(s);
  double s2 = f.sigma2 >= 0 ? f.sigma2 : (sp.n > 1 ? sp.m2 / sp.n : 0.0);
  j["sigma2"] = s2;
  j["entropy_estimate"] = entropy_estimate(d, s2, f.eps, ball);
  int nq = f.qubits > 0 ? f.qubits : std::max(f.locality, static_cast<int>(std::ceil(std::log2(static_cast<double>(d)))));
  GateSetSpec gs{f.gates, f.locality, nq};
  j["gate_set"] = {{"gates", gs.gates}, {"locality", gs.locality}, {"qubits", gs.qubits}};
  j["bound"] = complexity_bound(card, gs);
  j["bound_sd"] = complexity_bound_sd(d, gs);
  j["bound_frame"] = complexity_bound_frame(frame_potential2(build_diagonalizer(b.es)), d, gs);
  emit(c, json_text(j));
  return 0;
}

int cmd_figures(const RunConfig& c, const std::string& which, long trials) {
  json j;
  j["meta"] = meta_block("figures:" + which, to_json(c), c.seed());
  json rows = json::array();
  if (which == "formfactor") {
    // infinite and finite temperature form factors for the configured model
    Built b = build(c);
    for (double t : c.times.points()) {
      rows.push_back({{"x", t}, {"y", form_factor(b.es, FormFactorKind::infinite(), t)}, {"series", "infinite"}});
      if (c.beta > 0)
        rows.push_back({{"x", t}, {"y", form_factor(b.es, FormFactorKind::finite(c.beta), t)}, {"series", "beta"}});
    }
    j["dimension"] = b.es.dim();
  } else if (which == "framepotential") {
    // F2 - 2 against IPR along the closed form, plus sampled GUE points
    long d = c.model.d;
    for (int i = 0; i <= 200; ++i) {
      double ipr = 1.0 / d + (1.0 - 1.0 / d) * i / 200.0;
      rows.push_back({{"x", ipr}, {"y", frame_potential2_from_ipr(ipr, d) - 2}, {"series", "closed_form"}});
    }
    for (auto s : c.seeds) {
      Diagonalizer dz = build_diagonalizer(eigh(gue_sample(d, s)));
      rows.push_back({{"x", ipr_bar(dz)}, {"y", frame_potential2(dz) - 2}, {"series", "gue"}});
    }
    j["critical_ipr"] = 2.0 / (d + 1);
  } else if (which == "entropy") {
    for (long d : {8L, 16L, 32L, 64L, 128L}) {
      EigenSystem es = eigh(equally_spaced(d, 1.0));
      for (double s2 : {0.0, 0.1781, 1.0}) {
        json r = {{"d", d}, {"sigma2", s2}, {"entropy", entropy_estimate(d, s2)}, {"series", "estimate"}};
        if (s2 == 0.0) {
          r["cardinality_log"] = cardinality(es).log_magnitude;
          r["ratio"] = cardinality_ratio(es);
          r["bound"] = complexity_bound(cardinality(es), GateSetSpec{2, 2, std::max(2, static_cast<int>(std::log2(d)))});
        }
        if (trials > 0 && s2 > 0 && d <= 64) {
          EnsembleEstimate e = clt_log_vandermonde(s2 == 1.0 ? SpacingDist::poisson : SpacingDist::wigner_dyson, d,
                                                   trials, c.seed(), s2, c.threads);
          r["clt_log_vandermonde"] = e.mean;
          r["clt_stderr"] = e.stderr_;
        }
        rows.push_back(r);
      }
    }
  } else {
    fail(ErrorCode::config, "figures: which must be formfactor, framepotential or entropy");
  }
  j["rows"] = rows;
  if (c.format == "csv") {
    std::ostringstream os;
    os << "# " << j["meta"].dump() << "\n";
    if (which == "entropy") {
      os << "d,sigma2,entropy\n";
      for (auto& r : rows) os << r["d"] << ',' << fmt_double(r["sigma2"]) << ',' << fmt_double(r["entropy"]) << '\n';
    } else {
      os << "x,y,series\n";
      for (auto& r : rows)
        os << fmt_double(r["x"]) << ',' << fmt_double(r["y"]) << ',' << r["series"].get<std::string>() << '\n';
    }
    emit(c, os.str());
  } else {
    emit(c, json_text(j));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cens: C-ensemble numerics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::map<std::string, Common> common;
  auto sub = [&](const std::string& name, const std::string& help, bool times) {
    CLI::App* s = app.add_subcommand(name, help);
    common[name].attach(s, times);
    return s;
  };

  std::string matrix_path;
  CLI::App* s_model = sub("model", "build a Hamiltonian, write its matrix and a spectrum summary", false);
  s_model->add_option("--matrix", matrix_path, "matrix output (.bin binary, .csv text)");

  std::string sff_kind = "infinite";
  CLI::App* s_sff = sub("sff", "spectral form factor series", true);
  s_sff->add_option("--sff-kind", sff_kind, "infinite|finite|sym|antisym");

  ObsFlags obs;
  CLI::App* s_tp = sub("twopoint", "ensemble two-point function series", true);
  for (CLI::App* s : {s_tp}) {
    s->add_option("--W", obs.w, "W matrix file");
    s->add_option("--V", obs.v, "V matrix file");
    s->add_flag("--check-mc", obs.check_mc, "compare against the Monte-Carlo ensemble average");
    s->add_option("--samples", obs.samples, "Monte-Carlo samples");
  }
  bool square = false;
  CLI::App* s_otoc = sub("otoc", "ensemble OTOC series (normalised by d)", true);
  s_otoc->add_option("--W", obs.w, "W matrix file");
  s_otoc->add_option("--V", obs.v, "V matrix file");
  s_otoc->add_flag("--check-mc", obs.check_mc, "compare against the two-subspace Monte-Carlo average");
  s_otoc->add_option("--samples", obs.samples, "Monte-Carlo samples per subspace and time");
  s_otoc->add_flag("--square-commutator", square, "emit -(1/d)Tr([W(t),V]^2) instead");

  bool solve = false;
  int max_iter = 100;
  double tol = 1e-10;
  CLI::App* s_pl = sub("plateau", "exact plateau operator checks and the plateau-equation solver", false);
  s_pl->add_flag("--solve", solve, "solve the plateau equation");
  s_pl->add_option("--max-iter", max_iter, "Newton iterations per start");
  s_pl->add_option("--tol", tol, "residual tolerance");

  long pairs = 0;
  bool enumerate = false;
  CLI::App* s_fr = sub("frame", "two-frame potential", false);
  s_fr->add_option("--pairs", pairs, "Monte-Carlo pairs (0: skip)");
  s_fr->add_flag("--enumerate", enumerate, "exact enumeration over the orbit (d <= 8)");

  VolumeFlags vf;
  CLI::App* s_vol = sub("volume", "volume, cardinality, entropy and complexity bounds", false);
  s_vol->add_option("--eps", vf.eps, "ball radius");
  s_vol->add_option("--sigma2", vf.sigma2, "spacing variance for the entropy estimate (default: empirical)");
  s_vol->add_option("--ball", vf.ball, "ball dimension convention: d2|pairs");
  s_vol->add_option("--gates", vf.gates, "gate-set cardinality |G|");
  s_vol->add_option("--locality", vf.locality, "gate locality q");
  s_vol->add_option("--qubits", vf.qubits, "qubit count N (default ceil(log2 d))");

  std::string which;
  long trials = 0;
  CLI::App* s_fig = sub("figures", "figure data tables", true);
  s_fig->add_option("which", which, "formfactor|framepotential|entropy")->required();
  s_fig->add_option("--trials", trials, "CLT Monte-Carlo trials for the entropy table (0: skip)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ErrorCode::config);
  }

  try {
    for (auto& [name, com] : common) {
      CLI::App* s = app.get_subcommand(name);
      if (!s->parsed()) continue;
      RunConfig c = com.resolve(name);
      if (name == "model") return cmd_model(c, matrix_path);
      if (name == "sff") return cmd_sff(c, sff_kind);
      if (name == "twopoint") return cmd_twopoint(c, obs);
      if (name == "otoc") return cmd_otoc(c, obs, square);
      if (name == "plateau") return cmd_plateau(c, solve, max_iter, tol);
      if (name == "frame") return cmd_frame(c, pairs, enumerate);
      if (name == "volume") return cmd_volume(c, vf);
      if (name == "figures") return cmd_figures(c, which, trials);
    }
  } catch (const Error& e) {
    std::cerr << "cens: error[" << static_cast<int>(e.code()) << "]: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "cens: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
