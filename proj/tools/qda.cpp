// qda: generate test pencils, solve split eigenspace problems, run the
// comparison experiments and evaluate residuals.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "qda/errors.hpp"
#include "qda/experiments.hpp"
#include "qda/io.hpp"

namespace fs = std::filesystem;
using namespace qda;
using io::json;

namespace {

struct SolveFlags {
  std::string algorithm = "qda";
  std::optional<double> gamma;
  double rtol = 1e-14;
  std::string stop = "kahan";
  double tau = 0.0;
  int idea = 3;
  std::string variant = "afirst";
  std::uint64_t seed = 1;
  std::size_t maxIter = 50;
  std::string out = ".";
};

void add_solver_flags(CLI::App* cmd, SolveFlags& f) {
  cmd->add_option("--algorithm", f.algorithm, "qda, sdasf1 or sdasf2")
      ->check(CLI::IsMember({"qda", "sdasf1", "sdasf2"}));
  cmd->add_option("--gamma", f.gamma, "Cayley parameter (< 0); omit for disk-split input");
  cmd->add_option("--rtol", f.rtol, "relative stopping tolerance");
  cmd->add_option("--stop", f.stop, "plain or kahan")->check(CLI::IsMember({"plain", "kahan"}));
  cmd->add_option("--tau", f.tau, "entry bound for X and Y (default max(1e3, 10 sqrt(nm+1)))");
  cmd->add_option("--idea", f.idea, "initialization idea")->check(CLI::Range(1, 3));
  cmd->add_option("--variant", f.variant, "afirst or bfirst")
      ->check(CLI::IsMember({"afirst", "bfirst"}));
  cmd->add_option("--max-iter", f.maxIter, "iteration limit")->check(CLI::PositiveNumber);
}

QdaConfig make_config(const SolveFlags& f) {
  QdaConfig c;
  c.rtol = f.rtol;
  c.maxIter = f.maxIter;
  c.stopMode = f.stop == "plain" ? StopMode::Plain : StopMode::Kahan;
  c.guard.tau = f.tau;
  c.initIdea = f.idea == 1 ? InitIdea::Idea1 : f.idea == 2 ? InitIdea::Idea2 : InitIdea::Idea3;
  c.initVariant = f.variant == "bfirst" ? InitVariant::BFirst : InitVariant::AFirst;
  c.guard.reinitIdea = c.initIdea;
  c.validate();
  return c;
}

json config_json(const SolveFlags& f) {
  json j{{"algorithm", f.algorithm}, {"rtol", f.rtol},   {"stop", f.stop},
         {"tau", f.tau},             {"idea", f.idea},   {"variant", f.variant},
         {"seed", f.seed},           {"maxIter", f.maxIter}};
  j["gamma"] = f.gamma ? json(*f.gamma) : json(nullptr);
  return j;
}

json manifest(const std::string& command, json parameters, std::uint64_t seed,
              const std::vector<std::string>& argv) {
  return {{"command", command},       {"parameters", std::move(parameters)},
          {"seed", seed},             {"toolVersion", io::kToolVersion},
          {"timestamps", {{"created", io::utc_timestamp()}}},
          {"argv", argv}};
}

int exit_code(Status s) {
  switch (s) {
    case Status::Converged: return 0;
    case Status::MaxIter: return 2;
    case Status::Breakdown: return 3;
  }
  return 1;
}

json eigs_json(const std::vector<cplx>& v) {
  json a = json::array();
  for (const cplx& z : v) a.push_back({z.real(), z.imag()});
  return a;
}

bool is_identity_matrix(const ComplexMatrix& b) {
  return b.rows() == b.cols() && b == ComplexMatrix::identity(b.rows());
}

// "size" or "size:angle_degrees"
CriticalBlock parse_block(const std::string& s) {
  CriticalBlock b;
  const auto colon = s.find(':');
  b.size = std::stoul(s.substr(0, colon));
  double deg = colon == std::string::npos ? 0.0 : std::stod(s.substr(colon + 1));
  // Exact values at the quarter turns keep |omega| = 1 bit-exact.
  if (deg == 0.0) b.omega = {1.0, 0.0};
  else if (deg == 90.0) b.omega = {0.0, 1.0};
  else if (deg == 180.0) b.omega = {-1.0, 0.0};
  else if (deg == 270.0) b.omega = {0.0, -1.0};
  else b.omega = std::polar(1.0, deg * std::numbers::pi / 180.0);
  return b;
}

struct GenFlags {
  std::string family = "split";
  std::size_t m = 20, n = 25;
  double alpha = 8.0, eta = 1.0;
  double gap = 2.0, coupling = 1.0;
  std::size_t mPrime = 3, nPrime = 3;
  std::vector<std::string> blocks{"2:0"};
  double rhoStable = 0.3, rhoAnti = 0.3;
};

void add_family_flags(CLI::App* cmd, GenFlags& g) {
  cmd->add_option("--m", g.m, "stable dimension (split)");
  cmd->add_option("--n", g.n, "anti-stable dimension (split, bse)");
  cmd->add_option("--alpha", g.alpha, "split: spectral offset (> 2)");
  cmd->add_option("--eta", g.eta, "split: scale of the top block of U");
  cmd->add_option("--gap", g.gap, "bse: gap scale");
  cmd->add_option("--coupling", g.coupling, "bse: coupling grading (1 = plain)");
  cmd->add_option("--mprime", g.mPrime, "critical: m'");
  cmd->add_option("--nprime", g.nPrime, "critical: n'");
  cmd->add_option("--block", g.blocks, "critical: circle block SIZE[:ANGLE_DEG], repeatable");
  cmd->add_option("--rho-stable", g.rhoStable, "critical: spectral radius of the stable part");
  cmd->add_option("--rho-anti", g.rhoAnti, "critical: spectral radius of the reciprocal part");
}

CriticalSpec critical_spec(const GenFlags& g) {
  CriticalSpec s;
  s.mPrime = g.mPrime;
  s.nPrime = g.nPrime;
  for (const auto& b : g.blocks) s.blocks.push_back(parse_block(b));
  s.rhoStable = g.rhoStable;
  s.rhoAnti = g.rhoAnti;
  s.validate();
  return s;
}

ProblemInstance generate(const GenFlags& g, std::uint64_t seed) {
  if (g.family == "split") return gen_random_split(g.m, g.n, g.alpha, g.eta, seed);
  if (g.family == "bse") return gen_bse_like(g.n, g.gap, seed, g.coupling);
  return gen_critical(critical_spec(g), seed);
}

int cmd_gen(const GenFlags& g, std::uint64_t seed, const fs::path& out,
            const std::vector<std::string>& argv) {
  const ProblemInstance inst = generate(g, seed);
  io::write_matrix(out / "A.json", inst.pencil.A);
  io::write_matrix(out / "B.json", inst.pencil.B);
  json files{{"A", "A.json"}, {"B", "B.json"}};
  if (inst.trueBasisStable) {
    io::write_matrix(out / "Z.json", *inst.trueBasisStable);
    files["Z"] = "Z.json";
  }
  if (inst.trueM) {
    io::write_matrix(out / "M.json", *inst.trueM);
    files["M"] = "M.json";
  }
  json params{{"family", inst.family}, {"m", inst.pencil.m}, {"n", inst.pencil.n}};
  for (const auto& [k, v] : inst.params) params[k] = v;
  if (g.family == "critical") params["blocks"] = g.blocks;
  json man = manifest("gen", params, seed, argv);
  man["files"] = files;
  man["groundTruth"] = {{"stableEigs", eigs_json(inst.stableEigs)},
                        {"antiStableEigs", eigs_json(inst.antiStableEigs)},
                        {"circleEigs", eigs_json(inst.circleEigs)}};
  io::write_json(out / "manifest.json", man);
  std::cout << "wrote " << inst.family << " instance (m=" << inst.pencil.m
            << ", n=" << inst.pencil.n << ") to " << out.string() << "\n";
  return 0;
}

int cmd_solve(const std::string& aPath, const std::string& bPath, std::size_t m, std::size_t n,
              const SolveFlags& f, const std::vector<std::string>& argv) {
  GeneralPencil h;
  h.A = io::read_matrix(aPath);
  h.B = bPath.empty() ? ComplexMatrix::identity(h.A.rows()) : io::read_matrix(bPath);
  h.m = m;
  h.n = n;
  h.validate();
  const QdaConfig cfg = make_config(f);
  const GeneralPencil g = f.gamma ? cayley(h, {*f.gamma}) : h;

  QdaResult r;
  if (f.algorithm == "qda") {
    r = run_qda(g, cfg);
  } else {
    QdaConfig c = cfg;
    c.residualSafeguard = false;
    r = f.algorithm == "sdasf1" ? run_sdasf1(sf1_initial(g), c) : run_sdasf2(sf2_initial(g), c);
  }

  const fs::path out = f.out;
  json summary{{"status", to_string(r.status)},
               {"message", r.message},
               {"iterations", r.iterations()},
               {"algorithm", f.algorithm}};
  if (!r.phi.empty()) {
    io::write_json(out / "Q1.json", io::perm_to_json(r.Q1));
    io::write_json(out / "Q2.json", io::perm_to_json(r.Q2));
    io::write_matrix(out / "X.json", r.phi);
    io::write_matrix(out / "Y.json", r.psi);
    const double xf = fro_norm(r.phi);
    summary["normXFro"] = xf;
    summary["maxAbsX"] = r.phi.max_abs();
    summary["maxAbsY"] = r.psi.max_abs();
    const ComplexMatrix z = stable_basis(r.Q1, r.phi);
    try {
      if (is_identity_matrix(h.B)) {
        summary["NRes1"] = nres1(h, z, xf);
        summary["NRes2"] = nres2(h, z);
      } else {
        summary["subspaceResidual"] = subspace_residual(h, z);
      }
    } catch (const std::exception& e) {
      summary["residualError"] = e.what();
    }
  }
  io::write_text_atomic(out / "history.csv", io::history_csv(r));
  io::write_json(out / "summary.json", summary);
  json params = config_json(f);
  params["A"] = aPath;
  params["B"] = bPath;
  params["m"] = m;
  params["n"] = n;
  io::write_json(out / "manifest.json", manifest("solve", params, f.seed, argv));
  std::cout << summary.dump() << "\n";
  return exit_code(r.status);
}

void write_runs(const fs::path& out, const std::vector<AlgoRun>& runs) {
  io::write_text_atomic(out / "table.csv", table_csv(runs));
  for (const auto& r : runs) {
    std::string name = r.caseLabel + "_" + to_string(r.algorithm);
    for (char& c : name)
      if (c == ' ' || c == '=') c = '_';
    io::write_text_atomic(out / "history" / (name + ".csv"), io::history_csv(r.result));
  }
  std::cout << table_csv(runs);
}

int cmd_experiment(const std::string& name, const GenFlags& g, std::size_t count,
                   const std::vector<double>& etas, const SolveFlags& f,
                   const std::vector<std::string>& argv) {
  const fs::path out = f.out;
  QdaConfig cfg = make_config(f);
  const double gamma = f.gamma.value_or(-1.0);
  // --algorithm names the baseline run next to QDA; qda alone skips it.
  std::optional<Algorithm> baseline = Algorithm::SDASF1;
  if (f.algorithm == "qda") baseline.reset();
  else if (f.algorithm == "sdasf2") baseline = Algorithm::SDASF2;
  std::vector<std::uint64_t> seeds;
  for (std::size_t k = 0; k < count; ++k) seeds.push_back(f.seed + k);
  json params = config_json(f);
  params["experiment"] = name;
  params["seeds"] = seeds;

  if (name == "eta_sweep") {
    EtaSweepConfig c;
    c.m = g.m;
    c.n = g.n;
    c.alpha = g.alpha;
    if (!etas.empty()) c.etas = etas;
    c.seeds = seeds;
    c.gamma = gamma;
    c.baseline = baseline;
    c.cfg = cfg;
    params.update({{"m", c.m}, {"n", c.n}, {"alpha", c.alpha}, {"etas", c.etas}});
    write_runs(out, eta_sweep(c));
  } else if (name == "bse_like") {
    BseConfig c;
    c.n = g.n;
    c.gapScale = g.gap;
    c.couplingScale = g.coupling;
    c.seeds = seeds;
    c.gamma = gamma;
    c.baseline = baseline;
    c.cfg = cfg;
    params.update({{"n", c.n}, {"gapScale", c.gapScale}, {"couplingScale", c.couplingScale}});
    write_runs(out, bse_like(c));
  } else {
    const CriticalSpec spec = critical_spec(g);
    params.update({{"mPrime", spec.mPrime}, {"nPrime", spec.nPrime}, {"blocks", g.blocks},
                   {"rhoStable", spec.rhoStable}, {"rhoAnti", spec.rhoAnti}});
    std::ostringstream sum;
    sum << "seed,status,iterations,windowLength,minRatio,maxRatio,firstMinPivot,lastMinPivot\n";
    for (std::uint64_t s : seeds) {
      const ConvergenceTrace t = trace_against_truth(gen_critical(spec, s), cfg);
      io::write_text_atomic(out / ("trace_seed" + std::to_string(s) + ".csv"), trace_csv(t));
      const WindowSummary w = summarize_window(t);
      sum << s << ',' << to_string(t.status) << ',' << t.rows.size() << ',' << w.longest << ','
          << io::fmt(w.minRatio) << ',' << io::fmt(w.maxRatio) << ','
          << (t.rows.empty() ? std::string() : io::fmt(t.rows.front().wMinPivot)) << ','
          << (t.rows.empty() ? std::string() : io::fmt(t.rows.back().wMinPivot)) << '\n';
    }
    io::write_text_atomic(out / "summary.csv", sum.str());
    std::cout << sum.str();
  }
  io::write_json(out / "manifest.json", manifest("experiment", params, f.seed, argv));
  return 0;
}

int cmd_residual(const std::string& aPath, const std::string& bPath, const std::string& zPath,
                 const std::string& xPath, const std::string& outPath) {
  GeneralPencil h;
  h.A = io::read_matrix(aPath);
  h.B = bPath.empty() ? ComplexMatrix::identity(h.A.rows()) : io::read_matrix(bPath);
  const ComplexMatrix z = io::read_matrix(zPath);
  if (z.rows() != h.A.rows() || z.cols() == 0 || z.cols() > z.rows())
    throw ContractViolation("Z must have as many rows as A and at most as many columns");
  h.m = z.cols();
  h.n = z.rows() - z.cols();
  json j;
  if (is_identity_matrix(h.B)) {
    std::optional<double> xn;
    if (!xPath.empty()) xn = fro_norm(io::read_matrix(xPath));
    j["NRes1"] = nres1(h, z, xn);
    j["NRes2"] = nres2(h, z);
  } else {
    j["subspaceResidual"] = subspace_residual(h, z);
  }
  if (!outPath.empty()) io::write_json(outPath, j);
  std::cout << j.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Q-doubling solver for split eigenspaces of matrix pencils"};
  app.require_subcommand(1);
  const std::vector<std::string> args(argv, argv + argc);

  GenFlags gen;
  SolveFlags solve;
  std::uint64_t seed = 1;
  std::string out = ".";

  auto* g = app.add_subcommand("gen", "generate a test pencil with ground truth");
  g->add_option("--family", gen.family, "split, bse or critical")
      ->check(CLI::IsMember({"split", "bse", "critical"}));
  add_family_flags(g, gen);
  g->add_option("--seed", seed, "random seed");
  g->add_option("--out", out, "output directory");

  std::string aPath, bPath, zPath, xPath;
  std::size_t m = 0, n = 0;
  auto* s = app.add_subcommand("solve", "compute the split eigenspaces of A - lambda B");
  s->add_option("--A", aPath, "matrix file for A")->required();
  s->add_option("--B", bPath, "matrix file for B (identity if omitted)");
  s->add_option("--m", m, "number of eigenvalues inside (or left of) the split")->required();
  s->add_option("--n", n, "number outside")->required();
  add_solver_flags(s, solve);
  s->add_option("--seed", solve.seed, "recorded in the manifest");
  s->add_option("--out", solve.out, "output directory");

  std::string expName;
  std::size_t count = 3;
  std::vector<double> etas;
  auto* e = app.add_subcommand("experiment", "run a comparison experiment");
  e->add_option("name", expName, "eta_sweep, bse_like or critical_rate")
      ->required()
      ->check(CLI::IsMember({"eta_sweep", "bse_like", "critical_rate"}));
  add_family_flags(e, gen);
  add_solver_flags(e, solve);
  e->add_option("--etas", etas, "eta values for eta_sweep")->delimiter(',');
  e->add_option("--seed", solve.seed, "first seed");
  e->add_option("--count", count, "number of consecutive seeds");
  e->add_option("--out", solve.out, "output directory");

  std::string resOut;
  auto* r = app.add_subcommand("residual", "normalized residuals of a basis Z");
  r->add_option("--A", aPath, "matrix file for A")->required();
  r->add_option("--B", bPath, "matrix file for B (identity if omitted)");
  r->add_option("--Z", zPath, "basis matrix file")->required();
  r->add_option("--X", xPath, "X whose norm scales NRes1 (default ||Z||_F)");
  r->add_option("--out", resOut, "write the result JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (g->parsed()) return cmd_gen(gen, seed, out, args);
    if (s->parsed()) return cmd_solve(aPath, bPath, m, n, solve, args);
    if (e->parsed()) {
      // Experiment defaults differ from gen's: desk-scale sweep, n = 64 BSE,
      // and SDASF1 as the baseline.
      if (e->count("--algorithm") == 0) solve.algorithm = "sdasf1";
      if (expName == "eta_sweep") {
        if (e->count("--m") == 0) gen.m = 50;
        if (e->count("--n") == 0) gen.n = 60;
      } else if (expName == "bse_like" && e->count("--n") == 0) {
        gen.n = 64;
      } else if (expName == "critical_rate" && e->count("--max-iter") == 0) {
        solve.maxIter = 60;
      }
      return cmd_experiment(expName, gen, count, etas, solve, args);
    }
    if (r->parsed()) return cmd_residual(aPath, bPath, zPath, xPath, resOut);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 1;
}
