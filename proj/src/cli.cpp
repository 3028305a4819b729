#include "pdtls/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "pdtls/bench.hpp"
#include "pdtls/errors.hpp"
#include "pdtls/linalg.hpp"
#include "pdtls/matrix_io.hpp"
#include "pdtls/model.hpp"
#include "pdtls/probgen.hpp"
#include "pdtls/solver_fullrank.hpp"
#include "pdtls/solver_rankdef.hpp"

namespace pdtls::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

io::MatrixFormat format_for(const fs::path& path, const std::string& override_name) {
  return override_name.empty() ? io::format_from_path(path) : io::parse_format(override_name);
}

Matrix read(const fs::path& path, const std::string& fmt) { return io::read_matrix(path, format_for(path, fmt)); }

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidInputError("bad number '" + item + "' in list");
    }
  }
  return out;
}

void emit(const json& report, const std::string& report_path, std::ostream& out) {
  if (report_path.empty()) {
    out << report.dump(2) << '\n';
    return;
  }
  std::ofstream f(report_path, std::ios::trunc);
  if (!f) throw InvalidInputError("cannot write report '" + report_path + "'");
  f << report.dump(2) << '\n';
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json consistency_json(const ConsistencyReport& r) {
  json j;
  j["consistent"] = r.consistent;
  j["f_norm"] = number(r.f_norm);
  j["delta"] = r.delta;
  j["b_rr_condition"] = number(r.b_rr_condition);
  j["rank_r"] = r.rank;
  j["target_rank"] = r.target_rank;
  return j;
}

// ---------------------------------------------------------------------------
// solve

struct SolveFlags {
  std::string data;
  std::string target;
  std::string out;
  std::string report;
  std::string format;
  std::string method = "auto";
  std::string l_free;
  std::optional<double> delta;
  std::optional<double> rank_tol;
};

int cmd_solve(const SolveFlags& f, std::ostream& out) {
  const ProblemInstance p(read(f.data, f.format), read(f.target, f.format));
  const double rank_tol = f.rank_tol.value_or(linalg::default_rank_tol(p.m(), p.n()));
  const GramPair g = gram_pair(p);
  const double delta = f.delta.value_or(default_delta(g.b));

  std::string method = f.method;
  if (method == "auto") {
    method = has_full_rank(p, rank_tol) ? "qr" : "rankdef-spectral";
  }

  json report;
  std::optional<SpdSolution> solution;
  int code = kSuccess;
  if (method == "qr" || method == "spectral") {
    solution = method == "qr" ? solve_qr(p) : solve_spectral(p);
    report["method"] = std::string(method_name(solution->method));
    report["rank_r"] = p.n();
    report["consistent"] = true;
    report["f_norm"] = 0.0;
    report["delta"] = delta;
  } else if (method == "rankdef-spectral" || method == "rankdef-cod") {
    RankDefOptions opt;
    opt.route = method == "rankdef-spectral" ? RankDefRoute::spectral : RankDefRoute::cod;
    opt.delta = delta;
    opt.rank_tol = rank_tol;
    if (!f.l_free.empty()) opt.choice.l_free = read(f.l_free, f.format);
    try {
      auto rd = solve_rankdef(p, opt);
      report["method"] = std::string(method_name(rd.solution.method));
      report["rank_r"] = rd.consistency.rank;
      report["consistent"] = true;
      report["f_norm"] = number(rd.consistency.f_norm);
      report["delta"] = rd.consistency.delta;
      report["block_residual_rr"] = rd.residuals.rr;
      report["block_residual_rn"] = rd.residuals.rn;
      solution = std::move(rd.solution);
    } catch (const InconsistentInstanceError& e) {
      const auto& c = e.report();
      report["method"] = method == "rankdef-spectral" ? "rankdef_spectral" : "rankdef_cod";
      report["status"] = "no_solution";
      report["message"] = e.what();
      report["rank_r"] = c.rank;
      report["target_rank"] = c.target_rank;
      report["consistent"] = false;
      report["f_norm"] = number(c.f_norm);
      report["delta"] = c.delta;
      report["b_rr_condition"] = number(c.b_rr_condition);
      code = kNoSolution;
    }
  } else {
    throw InvalidInputError("unknown method '" + method + "'");
  }

  if (solution) {
    report["status"] = "ok";
    report["E"] = solution->error_value;
    report["kkt_residual"] = solution->kkt_residual;
    report["min_eigenvalue"] = solution->min_eigenvalue;
    if (!f.out.empty()) {
      io::write_matrix(f.out, solution->x, format_for(f.out, f.format));
    } else {
      report["x"] = matrix_json(solution->x);
    }
  }
  emit(report, f.report, out);
  return code;
}

// ---------------------------------------------------------------------------
// generate

struct GenerateFlags {
  std::size_t m = 0;
  std::size_t n = 0;
  std::optional<std::size_t> rank;
  std::uint64_t seed = 0;
  double noise = 0.0;
  std::string spectrum_a;
  std::string spectrum_b;
  std::string out_dir = ".";
  std::string prefix;
  std::string format = "mtx";
};

int cmd_generate(const GenerateFlags& f, std::ostream& out) {
  const std::size_t r = f.rank.value_or(f.n);
  probgen::GeneratorSpec spec = probgen::make_spec(f.m, f.n, r, f.seed, f.noise);
  if (!f.spectrum_a.empty()) spec.spectrum_a = parse_list(f.spectrum_a);
  if (!f.spectrum_b.empty()) spec.spectrum_b = parse_list(f.spectrum_b);
  const auto gen = probgen::generate(spec);

  const auto fmt = io::parse_format(f.format);
  const std::string ext = "." + f.format;
  fs::create_directories(f.out_dir);
  const fs::path dir(f.out_dir);
  json files;
  const fs::path d_path = dir / (f.prefix + "D" + ext);
  const fs::path t_path = dir / (f.prefix + "T" + ext);
  io::write_matrix(d_path, gen.problem.d(), fmt);
  io::write_matrix(t_path, gen.problem.t(), fmt);
  files["data"] = d_path.string();
  files["target"] = t_path.string();
  if (gen.x0) {
    const fs::path x_path = dir / (f.prefix + "X0" + ext);
    io::write_matrix(x_path, *gen.x0, fmt);
    files["x0"] = x_path.string();
  }
  json report;
  report["m"] = spec.m;
  report["n"] = spec.n;
  report["rank"] = spec.r;
  report["seed"] = spec.seed;
  report["noise"] = spec.noise_level;
  report["files"] = files;
  out << report.dump(2) << '\n';
  return kSuccess;
}

// ---------------------------------------------------------------------------
// check

struct CheckFlags {
  std::string data;
  std::string target;
  std::string format;
  std::string route = "spectral";
  std::string report;
  std::optional<double> delta;
  std::optional<double> rank_tol;
};

int cmd_check(const CheckFlags& f, std::ostream& out) {
  const ProblemInstance p(read(f.data, f.format), read(f.target, f.format));
  const double rank_tol = f.rank_tol.value_or(linalg::default_rank_tol(p.m(), p.n()));
  if (f.route != "spectral" && f.route != "cod") throw InvalidInputError("route must be spectral or cod");
  const BlockPartition bp = f.route == "spectral" ? partition_spectral(p, rank_tol) : partition_cod(p, rank_tol);
  const GramPair g = gram_pair(p);
  const auto rep = check_consistency(bp, g.b, f.delta.value_or(default_delta(g.b)));
  emit(consistency_json(rep), f.report, out);
  return rep.consistent ? kSuccess : kNoSolution;
}

// ---------------------------------------------------------------------------
// bench / profile

struct BenchFlags {
  std::string suite_dir;
  std::string format;
  std::size_t count = 0;
  std::size_t m = 0;
  std::size_t n = 0;
  std::optional<std::size_t> rank;
  std::uint64_t seed = 0;
  double noise = 0.0;
  std::string solvers = "qr,spectral,baseline-ols";
  std::size_t repetitions = 3;
  std::size_t threads = 1;
  std::string records;
  std::string profile;
  std::string metric = "time";
};

std::vector<bench::NamedProblem> load_suite_dir(const fs::path& dir, const std::string& fmt) {
  if (!fs::is_directory(dir)) throw InvalidInputError("suite directory '" + dir.string() + "' not found");
  // <id>D.<ext> pairs with <id>T.<ext>; a trailing '_' or '.' of <id> is dropped.
  std::map<std::string, std::pair<fs::path, fs::path>> found;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string stem = entry.path().stem().string();
    const std::string ext = entry.path().extension().string();
    if (ext != ".mtx" && ext != ".csv") continue;
    if (stem.empty() || (stem.back() != 'D' && stem.back() != 'T')) continue;
    std::string id = stem.substr(0, stem.size() - 1);
    if (!id.empty() && (id.back() == '_' || id.back() == '.')) id.pop_back();
    if (id.empty()) id = "problem";
    (stem.back() == 'D' ? found[id].first : found[id].second) = entry.path();
  }
  std::vector<bench::NamedProblem> out;
  for (const auto& [id, paths] : found) {
    if (paths.first.empty() || paths.second.empty()) continue;
    out.push_back({id, ProblemInstance(read(paths.first, fmt), read(paths.second, fmt))});
  }
  return out;
}

std::vector<std::string> split_ids(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void write_profile(const bench::PerformanceProfile& prof, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    bench::write_profile_csv(out, prof);
    return;
  }
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw InvalidInputError("cannot write '" + path + "'");
  bench::write_profile_csv(f, prof);
}

int cmd_bench(const BenchFlags& f, std::ostream& out) {
  std::vector<bench::NamedProblem> problems;
  if (!f.suite_dir.empty()) {
    problems = load_suite_dir(f.suite_dir, f.format);
  } else {
    const std::size_t r = f.rank.value_or(f.n);
    for (std::size_t i = 0; i < f.count; ++i) {
      const auto spec = probgen::make_spec(f.m, f.n, r, probgen::derive_seed(f.seed, i), f.noise);
      char id[32];
      std::snprintf(id, sizeof id, "p%04zu", i);
      problems.push_back({id, probgen::generate(spec).problem});
    }
  }
  if (problems.empty()) throw InvalidInputError("empty suite");

  std::vector<bench::Solver> solvers;
  for (const auto& id : split_ids(f.solvers)) solvers.push_back(bench::builtin_solver(id));
  if (solvers.empty()) throw InvalidInputError("no solvers selected");

  const auto records = bench::run_suite(problems, solvers, {f.repetitions, f.threads});
  if (f.records.empty()) {
    bench::write_records_csv(out, records);
  } else {
    std::ofstream rf(f.records, std::ios::trunc);
    if (!rf) throw InvalidInputError("cannot write '" + f.records + "'");
    bench::write_records_csv(rf, records);
  }
  if (!f.profile.empty()) {
    write_profile(bench::dolan_more_profile(records, bench::parse_metric(f.metric)), f.profile, out);
  }
  return kSuccess;
}

struct ProfileFlags {
  std::string records;
  std::string metric = "time";
  std::string out;
};

int cmd_profile(const ProfileFlags& f, std::ostream& out) {
  std::ifstream in(f.records);
  if (!in) throw InvalidInputError("cannot open '" + f.records + "'");
  const auto records = bench::read_records_csv(in);
  if (records.empty()) throw InvalidInputError("records file has no rows");
  write_profile(bench::dolan_more_profile(records, bench::parse_metric(f.metric)), f.out, out);
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Positive definite solutions of DX ~ T under an error-in-variables model"};
  app.name("pdtls");
  app.require_subcommand(1);

  SolveFlags solve;
  auto* s = app.add_subcommand("solve", "Compute the SPD minimizer for data/target files");
  s->add_option("--data", solve.data, "Data matrix D (m x n)")->required();
  s->add_option("--target", solve.target, "Target matrix T (m x n)")->required();
  s->add_option("--out", solve.out, "Write X here; otherwise X is embedded in the report");
  s->add_option("--report", solve.report, "Write the JSON report here instead of stdout");
  s->add_option("--method", solve.method, "auto | qr | spectral | rankdef-spectral | rankdef-cod")
      ->check(CLI::IsMember({"auto", "qr", "spectral", "rankdef-spectral", "rankdef-cod"}));
  s->add_option("--l-free", solve.l_free, "Free lower-triangular completion block (n-r x n-r)");
  s->add_option("--delta", solve.delta, "Consistency threshold (default 1e-8*max(1,||B||_F))");
  s->add_option("--rank-tol", solve.rank_tol, "Relative rank tolerance (default 1e-10*max(m,n))");
  s->add_option("--format", solve.format, "Force matrix format: mtx | csv");

  GenerateFlags gen;
  auto* g = app.add_subcommand("generate", "Write a seeded test instance");
  g->add_option("--m", gen.m, "Rows")->required();
  g->add_option("--n", gen.n, "Columns")->required();
  g->add_option("--rank", gen.rank, "Rank of D (default n)");
  g->add_option("--seed", gen.seed, "Seed");
  g->add_option("--noise", gen.noise, "Relative noise level");
  g->add_option("--spectrum-a", gen.spectrum_a, "Comma-separated nonzero eigenvalues of D^T D");
  g->add_option("--spectrum-b", gen.spectrum_b, "Comma-separated eigenvalues of B (rank-deficient) or X0");
  g->add_option("--out-dir", gen.out_dir, "Output directory");
  g->add_option("--prefix", gen.prefix, "File name prefix");
  g->add_option("--format", gen.format, "mtx | csv")->check(CLI::IsMember({"mtx", "csv"}));

  CheckFlags check;
  auto* c = app.add_subcommand("check", "Run the consistency test for a rank-deficient instance");
  c->add_option("--data", check.data, "Data matrix D")->required();
  c->add_option("--target", check.target, "Target matrix T")->required();
  c->add_option("--route", check.route, "spectral | cod");
  c->add_option("--delta", check.delta, "Consistency threshold");
  c->add_option("--rank-tol", check.rank_tol, "Relative rank tolerance");
  c->add_option("--report", check.report, "Write the JSON report here instead of stdout");
  c->add_option("--format", check.format, "Force matrix format: mtx | csv");

  BenchFlags bf;
  auto* b = app.add_subcommand("bench", "Run solvers over a suite and write run records");
  b->add_option("--suite-dir", bf.suite_dir, "Directory of <id>D/<id>T matrix pairs");
  b->add_option("--count", bf.count, "Generate this many instances instead of reading a directory");
  b->add_option("--m", bf.m, "Rows of generated instances");
  b->add_option("--n", bf.n, "Columns of generated instances");
  b->add_option("--rank", bf.rank, "Rank of generated D (default n)");
  b->add_option("--seed", bf.seed, "Base seed; instance i uses derive_seed(seed, i)");
  b->add_option("--noise", bf.noise, "Relative noise level of generated instances");
  b->add_option("--solvers", bf.solvers, "Comma list: auto,qr,spectral,rankdef-spectral,rankdef-cod,baseline-ols");
  b->add_option("--repetitions", bf.repetitions, "Timing repetitions (minimum is kept)");
  b->add_option("--threads", bf.threads, "Worker threads");
  b->add_option("--records", bf.records, "Run-record CSV path (default stdout)");
  b->add_option("--profile", bf.profile, "Also write a performance-profile CSV here");
  b->add_option("--metric", bf.metric, "Profile metric: time | error")->check(CLI::IsMember({"time", "error"}));
  b->add_option("--format", bf.format, "Force matrix format of suite files");

  ProfileFlags pf;
  auto* pr = app.add_subcommand("profile", "Dolan-More performance profile from a run-record CSV");
  pr->add_option("--records", pf.records, "Run-record CSV")->required();
  pr->add_option("--metric", pf.metric, "time | error")->check(CLI::IsMember({"time", "error"}));
  pr->add_option("--out", pf.out, "Profile CSV path (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kSuccess : kInvalidInput;
  }

  try {
    if (s->parsed()) return cmd_solve(solve, out);
    if (g->parsed()) return cmd_generate(gen, out);
    if (c->parsed()) return cmd_check(check, out);
    if (b->parsed()) return cmd_bench(bf, out);
    if (pr->parsed()) return cmd_profile(pf, out);
  } catch (const NoSolutionError& e) {
    err << "pdtls: " << e.what() << '\n';
    return kNoSolution;
  } catch (const NotPositiveDefiniteError& e) {
    err << "pdtls: " << e.what() << '\n';
    return kNoSolution;
  } catch (const Error& e) {
    err << "pdtls: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const fs::filesystem_error& e) {
    err << "pdtls: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << "pdtls: internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kInternalError;
}

}  // namespace pdtls::cli
