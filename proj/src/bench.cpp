#include "pdtls/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "pdtls/errors.hpp"
#include "pdtls/linalg.hpp"
#include "pdtls/matrix_io.hpp"
#include "pdtls/solver_fullrank.hpp"
#include "pdtls/solver_rankdef.hpp"

namespace pdtls::bench {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

RunRecord run_one(const NamedProblem& np, const Solver& solver, std::size_t repetitions) {
  RunRecord rec;
  rec.problem_id = np.id;
  rec.solver_id = solver.id;
  double best = kInf;
  std::optional<SpdSolution> solution;
  for (std::size_t rep = 0; rep < std::max<std::size_t>(1, repetitions); ++rep) {
    const auto start = std::chrono::steady_clock::now();
    try {
      SpdSolution s = solver.run(np.problem);
      const auto stop = std::chrono::steady_clock::now();
      best = std::min(best, std::chrono::duration<double>(stop - start).count());
      if (!solution) solution = std::move(s);
    } catch (const Error&) {
      const auto stop = std::chrono::steady_clock::now();
      best = std::min(best, std::chrono::duration<double>(stop - start).count());
      solution.reset();
      break;
    }
  }
  rec.wall_time = best;
  if (!solution) {
    rec.status = RunStatus::failed;
    rec.error_value = rec.kkt_residual = rec.min_eigenvalue = rec.error_entry_std = kNaN;
    rec.effective_rank = 0;
    return rec;
  }
  rec.status = RunStatus::ok;
  rec.error_value = solution->error_value;
  rec.kkt_residual = solution->kkt_residual;
  rec.min_eigenvalue = solution->min_eigenvalue;
  rec.effective_rank = effective_rank(solution->x);
  rec.error_entry_std = error_entry_std(np.problem, solution->x);
  return rec;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_field(const std::string& s) {
  if (s.empty()) return kNaN;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InvalidInputError("records csv: bad number '" + s + "'");
  }
  if (used != s.size()) throw InvalidInputError("records csv: bad number '" + s + "'");
  return v;
}

std::string field(double v) { return std::isnan(v) ? std::string() : io::format_double(v); }

}  // namespace

double PerformanceProfile::rho_at(std::size_t solver, double tau) const {
  const auto& r = ratios.at(solver);
  if (r.empty()) return 0.0;
  const auto hits = std::count_if(r.begin(), r.end(), [tau](double x) { return x <= tau; });
  return static_cast<double>(hits) / static_cast<double>(r.size());
}

std::size_t effective_rank(const Matrix& x) {
  const auto ev = linalg::spectral_decompose(x).eigenvalues;
  if (ev.empty() || !(ev.front() > 0.0)) return 0;
  const double cutoff = kEffectiveRankTol * ev.front();
  return static_cast<std::size_t>(std::count_if(ev.begin(), ev.end(), [cutoff](double v) { return v > cutoff; }));
}

double error_entry_std(const ProblemInstance& p, const Matrix& x) {
  const Matrix e = matmul(p.d(), x) - p.t();
  const double count = static_cast<double>(e.size());
  double mean = 0.0;
  for (double v : e.values()) mean += v;
  mean /= count;
  double var = 0.0;
  for (double v : e.values()) var += (v - mean) * (v - mean);
  return std::sqrt(var / count);
}

SpdSolution baseline_ols_projection(const ProblemInstance& p) {
  const std::size_t n = p.n();
  if (linalg::numeric_rank(p.d(), linalg::default_rank_tol(p.m(), n)) < n) {
    throw RankDeficientError("baseline: D^T D is singular");
  }
  // Least squares through QR: X = R⁻¹·(QᵀT)[0:n, :].
  const auto qr = linalg::qr_decompose(p.d());
  const Matrix qt_t = matmul_tn(qr.q, p.t()).block(0, 0, n, n);
  const Matrix x_ls = linalg::solve_triangular(qr.leading_block(), qt_t,
                                               {linalg::Uplo::upper, linalg::Side::left, linalg::Op::none});
  auto spec = linalg::spectral_decompose(symmetrized(x_ls));
  const double top = std::max(std::abs(spec.eigenvalues.front()), std::abs(spec.eigenvalues.back()));
  const double clip = kEffectiveRankTol * (spec.eigenvalues.front() > 0.0 ? spec.eigenvalues.front() : top);
  Matrix scaled = spec.u;
  for (std::size_t j = 0; j < n; ++j) {
    const double lambda = std::max(spec.eigenvalues[j], clip);
    for (std::size_t i = 0; i < n; ++i) scaled(i, j) *= lambda;
  }
  const Matrix x = symmetrized(matmul_nt(scaled, spec.u));

  SpdSolution s;
  const GramPair g = gram_pair(p);
  s.x = x;
  s.method = MethodTag::baseline_ols;
  s.error_value = error_trace(p, x);
  s.kkt_residual = kkt_residual(g, x);
  s.min_eigenvalue = linalg::min_eigenvalue(x);
  return s;
}

std::vector<std::string> builtin_solver_ids() {
  return {"auto", "qr", "spectral", "rankdef-spectral", "rankdef-cod", "baseline-ols"};
}

Solver builtin_solver(const std::string& id) {
  if (id == "auto") return {id, [](const ProblemInstance& p) { return solve_auto(p); }};
  if (id == "qr") return {id, [](const ProblemInstance& p) { return solve_qr(p); }};
  if (id == "spectral") return {id, [](const ProblemInstance& p) { return solve_spectral(p); }};
  if (id == "rankdef-spectral") {
    return {id, [](const ProblemInstance& p) {
              return solve_rankdef(p, {RankDefRoute::spectral, {}, {}, {}}).solution;
            }};
  }
  if (id == "rankdef-cod") {
    return {id, [](const ProblemInstance& p) {
              return solve_rankdef(p, {RankDefRoute::cod, {}, {}, {}}).solution;
            }};
  }
  if (id == "baseline-ols") return {id, [](const ProblemInstance& p) { return baseline_ols_projection(p); }};
  throw InvalidInputError("unknown solver '" + id + "'");
}

std::vector<RunRecord> run_suite(const std::vector<NamedProblem>& problems,
                                 const std::vector<Solver>& solvers, const SuiteOptions& options) {
  if (problems.empty()) throw InvalidInputError("run_suite: no problems");
  if (solvers.empty()) throw InvalidInputError("run_suite: no solvers");
  const std::size_t jobs = problems.size() * solvers.size();
  std::vector<RunRecord> records(jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t job = next++; job < jobs; job = next++) {
      records[job] = run_one(problems[job / solvers.size()], solvers[job % solvers.size()],
                             options.repetitions);
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(options.threads, 1, jobs);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  std::sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
    return std::tie(a.problem_id, a.solver_id) < std::tie(b.problem_id, b.solver_id);
  });
  return records;
}

PerformanceProfile dolan_more_profile(const std::vector<RunRecord>& records, Metric metric) {
  if (records.empty()) throw InvalidInputError("dolan_more_profile: no records");
  std::set<std::string> problem_set;
  std::set<std::string> solver_set;
  for (const auto& r : records) {
    problem_set.insert(r.problem_id);
    solver_set.insert(r.solver_id);
  }
  PerformanceProfile prof;
  prof.problem_ids.assign(problem_set.begin(), problem_set.end());
  prof.solver_ids.assign(solver_set.begin(), solver_set.end());
  const std::size_t np = prof.problem_ids.size();
  const std::size_t ns = prof.solver_ids.size();

  std::map<std::string, std::size_t> pidx;
  std::map<std::string, std::size_t> sidx;
  for (std::size_t i = 0; i < np; ++i) pidx[prof.problem_ids[i]] = i;
  for (std::size_t i = 0; i < ns; ++i) sidx[prof.solver_ids[i]] = i;

  // Missing and failed runs count as +inf.
  std::vector<std::vector<double>> perf(ns, std::vector<double>(np, kInf));
  for (const auto& r : records) {
    if (r.status != RunStatus::ok) continue;
    const double raw = metric == Metric::time ? r.wall_time : r.error_value;
    if (!std::isfinite(raw)) continue;
    const double v = std::max(raw, metric == Metric::time ? kTimeFloor : kErrorFloor);
    auto& slot = perf[sidx[r.solver_id]][pidx[r.problem_id]];
    slot = std::min(slot, v);
  }

  prof.ratios.assign(ns, std::vector<double>(np, kInf));
  std::set<double> breakpoints{1.0};
  for (std::size_t p = 0; p < np; ++p) {
    double best = kInf;
    for (std::size_t s = 0; s < ns; ++s) best = std::min(best, perf[s][p]);
    if (!std::isfinite(best)) continue;
    for (std::size_t s = 0; s < ns; ++s) {
      if (std::isfinite(perf[s][p])) {
        prof.ratios[s][p] = perf[s][p] / best;
        breakpoints.insert(prof.ratios[s][p]);
      }
    }
  }
  prof.taus.assign(breakpoints.begin(), breakpoints.end());
  prof.rho.assign(ns, std::vector<double>(prof.taus.size(), 0.0));
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t k = 0; k < prof.taus.size(); ++k) prof.rho[s][k] = prof.rho_at(s, prof.taus[k]);
  }
  return prof;
}

Metric parse_metric(const std::string& name) {
  if (name == "time") return Metric::time;
  if (name == "error") return Metric::error;
  throw InvalidInputError("unknown metric '" + name + "' (time or error)");
}

void write_records_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << "problem_id,solver_id,status,wall_time,error_value,kkt_residual,min_eigenvalue,"
         "effective_rank,error_entry_std\n";
  for (const auto& r : records) {
    const bool ok = r.status == RunStatus::ok;
    out << r.problem_id << ',' << r.solver_id << ',' << (ok ? "ok" : "failed") << ','
        << io::format_double(r.wall_time) << ',' << field(r.error_value) << ','
        << field(r.kkt_residual) << ',' << field(r.min_eigenvalue) << ','
        << (ok ? std::to_string(r.effective_rank) : std::string()) << ','
        << field(r.error_entry_std) << '\n';
  }
}

std::vector<RunRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidInputError("records csv: empty input");
  const auto header = split_csv(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* required : {"problem_id", "solver_id"}) {
    if (!col.count(required)) throw InvalidInputError(std::string("records csv: missing column ") + required);
  }
  auto get = [&](const std::vector<std::string>& f, const char* name) -> std::string {
    const auto it = col.find(name);
    return it == col.end() || it->second >= f.size() ? std::string() : f[it->second];
  };

  std::vector<RunRecord> out;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv(line);
    RunRecord r;
    r.problem_id = get(f, "problem_id");
    r.solver_id = get(f, "solver_id");
    const std::string status = get(f, "status");
    if (status.empty() || status == "ok") {
      r.status = RunStatus::ok;
    } else if (status == "failed") {
      r.status = RunStatus::failed;
    } else {
      throw InvalidInputError("records csv: bad status '" + status + "'");
    }
    r.wall_time = parse_field(get(f, "wall_time"));
    r.error_value = parse_field(get(f, "error_value"));
    r.kkt_residual = parse_field(get(f, "kkt_residual"));
    r.min_eigenvalue = parse_field(get(f, "min_eigenvalue"));
    const double rank = parse_field(get(f, "effective_rank"));
    r.effective_rank = std::isnan(rank) ? 0 : static_cast<std::size_t>(rank);
    r.error_entry_std = parse_field(get(f, "error_entry_std"));
    out.push_back(std::move(r));
  }
  return out;
}

void write_profile_csv(std::ostream& out, const PerformanceProfile& profile) {
  out << "tau";
  for (const auto& s : profile.solver_ids) out << ',' << s;
  out << '\n';
  for (std::size_t k = 0; k < profile.taus.size(); ++k) {
    out << (std::isinf(profile.taus[k]) ? std::string("inf") : io::format_double(profile.taus[k]));
    for (std::size_t s = 0; s < profile.solver_ids.size(); ++s) out << ',' << io::format_double(profile.rho[s][k]);
    out << '\n';
  }
}

}  // namespace pdtls::bench
