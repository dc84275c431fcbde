#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "singspec/errors.hpp"
#include "singspec/harness/harness.hpp"
#include "singspec/solvers/solvers.hpp"
#include "singspec/spectral/spectral.hpp"

using namespace singspec;
namespace fs = std::filesystem;

namespace {

constexpr int kFail = 1;
constexpr int kUsage = 2;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// One value per line; blank lines and '#' comments skipped.
Eigen::VectorXd read_column(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::vector<double> vals;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    double v;
    std::string rest;
    if (!(ss >> v) || (ss >> rest)) throw UsageError(path + ":" + std::to_string(lineno) + ": expected one number");
    vals.push_back(v);
  }
  if (vals.empty()) throw UsageError(path + " holds no samples");
  return Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

Eigen::MatrixXd read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    for (auto& ch : line)
      if (ch == ',') ch = ' ';
    std::istringstream ss(line);
    std::vector<double> row;
    double v;
    while (ss >> v) row.push_back(v);
    if (!rows.empty() && row.size() != rows[0].size()) throw UsageError(path + ": ragged matrix");
    rows.push_back(row);
  }
  if (rows.empty()) throw UsageError(path + " holds no rows");
  Eigen::MatrixXd M(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[0].size(); ++j) M(i, j) = rows[i][j];
  return M;
}

void write_column(const fs::path& path, const Signal& s) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(17);
  for (int i = 0; i < s.size(); ++i) out << s[i] << "\n";
}

Regularizer parse_reg(const std::string& name) {
  try {
    return regularizer_from_name(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

std::pair<int, int> parse_shape(const std::string& s) {
  const auto x = s.find('x');
  if (x == std::string::npos) throw UsageError("--shape must look like ROWSxCOLS");
  return {std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1))};
}

// Space the unknown lives on, from the functional and the sample count.
Space domain_for(const Regularizer& J, int size, const std::string& shape) {
  switch (J.kind()) {
    case RegKind::TV1D:
    case RegKind::TVStar1D:
    case RegKind::QuadraticNorm:
      return Space::grid1d(size);
    case RegKind::AnisoTV2D: {
      const int n = static_cast<int>(std::lround(std::sqrt(double(size))));
      if (n * n != size) throw UsageError("tv2d input needs n*n samples");
      return Space::grid2d(n);
    }
    case RegKind::Nuclear: {
      if (shape.empty()) throw UsageError("nuclear needs --shape ROWSxCOLS");
      const auto [r, c] = parse_shape(shape);
      if (r * c != size) throw UsageError("--shape does not match the number of unknowns");
      return Space::matrix(r, c);
    }
    default:
      return Space::coordinate(size);
  }
}

struct Problem {
  LinearOperator K;
  Regularizer J;
};

// "identity" or "matrix:FILE"; n_unknowns used for the identity.
Problem build_problem(const std::string& op, const Regularizer& J, int data_size, const std::string& shape,
                      bool data_in_range) {
  if (op == "identity") return {LinearOperator::identity(domain_for(J, data_size, shape)), J};
  if (op.rfind("matrix:", 0) == 0) {
    const Eigen::MatrixXd M = read_matrix(op.substr(7));
    if (data_in_range && M.rows() != data_size) throw UsageError("data length does not match matrix rows");
    const Space dom = domain_for(J, static_cast<int>(M.cols()), shape);
    const Space ran = dom.is_grid() ? Space::grid1d(static_cast<int>(M.rows())) : Space::coordinate(static_cast<int>(M.rows()));
    return {LinearOperator::dense(M, dom, ran), J};
  }
  throw UsageError("--op must be 'identity' or 'matrix:FILE'");
}

void print_certificate(const Certificate& c) {
  for (const auto& [k, v] : c.diagnostics) std::cout << "  " << k << " = " << v << "\n";
  if (!c.reason.empty()) std::cout << "  reason: " << c.reason << "\n";
}

void print_report(const ExperimentReport& r, bool verbose) {
  std::cout << (r.pass() ? "PASS " : "FAIL ") << r.id << "  (" << r.seconds << " s)\n";
  for (const auto& s : r.summary) std::cout << "  " << s << "\n";
  for (const auto& row : r.rows)
    if (verbose || !row.pass)
      std::cout << "  [" << (row.pass ? "ok" : "FAIL") << "] " << row.assertion << ": lhs=" << row.lhs
                << " rhs=" << row.rhs << " tol=" << row.tol << "  -- " << row.anchor << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "singspec: one-homogeneous regularization, nonlinear singular vectors and inverse scale space.\n"
      "Signal files hold one float per line; grid samples are cell-centered, sample i at x = (i + 1/2)/n."};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "minimize 1/2 ||Ku - f||^2 + alpha J(u)");
  std::string op = "identity", reg, input, out, shape;
  double alpha = 0;
  solve->add_option("--op", op, "identity | matrix:FILE")->capture_default_str();
  solve->add_option("--reg", reg, "tv | tvstar | tv2d | l1 | group:2,3,.. | nuclear | quad")->required();
  solve->add_option("--input", input, "data f")->required();
  solve->add_option("--alpha", alpha, "regularization weight")->required()->check(CLI::PositiveNumber);
  solve->add_option("--out", out, "output directory for solution.txt");
  solve->add_option("--shape", shape, "ROWSxCOLS for nuclear");

  // verify
  auto* verify = app.add_subcommand("verify", "test whether u is a singular vector");
  std::string vop = "identity";
  double vtol = 1e-9;
  verify->add_option("--reg", reg, "functional")->required();
  verify->add_option("--input", input, "candidate u")->required();
  verify->add_option("--operator,--op", vop, "identity | matrix:FILE")->capture_default_str();
  verify->add_option("--tol", vtol, "certificate tolerance")->capture_default_str();
  verify->add_option("--shape", shape, "ROWSxCOLS for nuclear");

  // ground-state
  auto* gs = app.add_subcommand("ground-state", "heuristic ground state search");
  int gn = 256;
  SearchOptions sopt;
  std::string gop = "identity";
  gs->add_option("--reg", reg, "functional")->required();
  gs->add_option("--n", gn, "grid size for the identity operator")->capture_default_str();
  gs->add_option("--op", gop, "identity | matrix:FILE")->capture_default_str();
  gs->add_option("--restarts", sopt.restarts)->capture_default_str();
  gs->add_option("--steps", sopt.steps)->capture_default_str();
  gs->add_option("--shape", shape, "ROWSxCOLS for nuclear");
  gs->add_option("--out", out, "output directory for ground_state.txt");
  std::optional<std::uint64_t> seed;
  gs->add_option("--seed", seed, "master seed (default SINGSPEC_SEED or 42)");

  // iss
  auto* iss = app.add_subcommand("iss", "inverse scale space flow");
  double t_max = 3, dt = 1e-2;
  iss->add_option("--op", op, "identity | matrix:FILE")->capture_default_str();
  iss->add_option("--reg", reg, "functional")->required();
  iss->add_option("--input", input, "data f")->required();
  iss->add_option("--t-max", t_max)->capture_default_str()->check(CLI::PositiveNumber);
  iss->add_option("--dt", dt)->capture_default_str()->check(CLI::PositiveNumber);
  iss->add_option("--shape", shape, "ROWSxCOLS for nuclear");
  iss->add_option("--out", out, "output directory for trajectory.dat and final.txt");

  // scale-estimate
  auto* se = app.add_subcommand("scale-estimate", "check |int_a^b (u - u~)| against its bound (TV, identity)");
  std::string truth, noise_file;
  double a = 0, b = 0.5;
  se->add_option("--truth", truth, "clean signal u~")->required();
  se->add_option("--noise", noise_file, "noise samples (default zero)");
  se->add_option("--alpha", alpha)->required()->check(CLI::PositiveNumber);
  se->add_option("--a", a)->capture_default_str();
  se->add_option("--b", b)->capture_default_str();

  // reproduce
  auto* rep = app.add_subcommand("reproduce", "run a registered experiment (or 'all')");
  std::string id, config, rout = "results";
  std::vector<std::string> kv;
  rep->add_option("id", id, "experiment id or 'all'")->required();
  rep->add_option("--param", kv, "override k=v (repeatable)");
  rep->add_option("--config", config, "JSON file of parameters");
  rep->add_option("--out", rout, "output root; each experiment writes to OUT/ID")->capture_default_str();
  rep->add_option("--seed", seed, "master seed (default SINGSPEC_SEED or 42)");
  bool verbose = false;
  rep->add_flag("-v,--verbose", verbose, "print every assertion");

  auto* list = app.add_subcommand("list", "print the experiment registry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*solve) {
      const Regularizer J = parse_reg(reg);
      const Eigen::VectorXd f = read_column(input);
      const Problem P = build_problem(op, J, static_cast<int>(f.size()), shape, true);
      const SolveResult r = solve_variational(P.K, P.J, Signal(P.K.range(), f), alpha);
      std::cout << "objective " << r.objective << "\nresidual " << r.residual << "\niterations " << r.iterations
                << "\ncertificate " << (r.certificate.accepted ? "accepted" : "rejected") << "\n";
      if (!out.empty()) {
        fs::create_directories(out);
        write_column(fs::path(out) / "solution.txt", r.u);
      }
      return 0;
    }
    if (*verify) {
      const Regularizer J = parse_reg(reg);
      const Eigen::VectorXd u = read_column(input);
      Problem P = build_problem(vop, J, static_cast<int>(u.size()), shape, false);
      if (P.K.domain().size() != u.size()) throw UsageError("candidate length does not match the operator");
      const VerifyOutcome v = verify_singular_vector(P.K, P.J, Signal(P.K.domain(), u), vtol);
      std::cout.precision(12);
      if (v.pair) {
        std::cout << "singular vector, lambda = " << v.lambda << "\n";
        return 0;
      }
      std::cout << "rejected (lambda candidate " << v.lambda << ")\n";
      print_certificate(v.certificate);
      return kFail;
    }
    if (*gs) {
      const Regularizer J = parse_reg(reg);
      sopt.seed = seed ? *seed : default_seed();
      LinearOperator K = LinearOperator::identity(domain_for(J, gn, shape));
      if (gop != "identity") K = build_problem(gop, J, 0, shape, false).K;
      const GroundState g = ground_state_search(K, J, sopt);
      std::cout.precision(12);
      std::cout << "lambda0 = " << g.lambda0 << " (heuristic search, kernel residual " << g.kernel_residual << ")\n";
      if (!out.empty()) {
        fs::create_directories(out);
        write_column(fs::path(out) / "ground_state.txt", g.pair.u);
      }
      return 0;
    }
    if (*iss) {
      const Regularizer J = parse_reg(reg);
      const Eigen::VectorXd f = read_column(input);
      const Problem P = build_problem(op, J, static_cast<int>(f.size()), shape, true);
      const Trajectory tr = inverse_scale_space(P.K, P.J, Signal(P.K.range(), f), t_max, dt);
      std::cout << "states " << tr.size() << "\n";
      for (double t : tr.jump_times) std::cout << "jump at t = " << t << "\n";
      if (!out.empty()) {
        fs::create_directories(out);
        std::ofstream dat(fs::path(out) / "trajectory.dat");
        dat.precision(17);
        for (std::size_t k = 0; k < tr.size(); ++k) dat << tr.times[k] << " " << tr.u[k].norm() << "\n";
        write_column(fs::path(out) / "final.txt", tr.u.back());
      }
      return 0;
    }
    if (*se) {
      const Eigen::VectorXd ut = read_column(truth);
      const Space g = Space::grid1d(static_cast<int>(ut.size()));
      const Signal truth_s(g, ut);
      const Signal noise = noise_file.empty() ? Signal::zeros(g) : Signal(g, read_column(noise_file));
      const Signal u = solve_variational(LinearOperator::identity(g), Regularizer::tv1d(), truth_s + noise, alpha).u;
      const ScaleEstimate e = scale_estimate_check(u, truth_s, noise, alpha, a, b);
      std::cout << "interval [" << e.a << ", " << e.b << "]  lhs = " << e.lhs << "  rhs = " << e.rhs << "  "
                << (e.pass ? "holds" : "VIOLATED") << "\n";
      return e.pass ? 0 : kFail;
    }
    if (*list) {
      for (const auto& e : experiment_registry()) {
        std::cout << e.id << "\n    " << e.anchor << "\n";
        if (!e.defaults.empty()) {
          std::cout << "    defaults:";
          for (const auto& [k, v] : e.defaults) std::cout << " " << k << "=" << v;
          std::cout << "\n";
        }
      }
      return 0;
    }
    if (*rep) {
      std::vector<std::string> ids;
      if (id == "all") {
        for (const auto& e : experiment_registry()) ids.push_back(e.id);
        if (!kv.empty()) throw UsageError("--param cannot be combined with 'all'");
      } else {
        ids.push_back(id);
      }
      auto make_spec = [&](const std::string& which) {
        ExperimentSpec spec;
        spec.id = which;
        spec.seed = default_seed();
        for (const auto& p : kv) {
          const auto eq = p.find('=');
          if (eq == std::string::npos || eq == 0) throw UsageError("--param expects k=v, got " + p);
          spec.params[p.substr(0, eq)] = p.substr(eq + 1);
        }
        if (!config.empty()) merge_config_file(spec, config);
        if (seed) spec.seed = *seed;
        spec.output_dir = fs::path(rout) / which;
        return spec;
      };
      std::vector<ExperimentSpec> specs;
      for (const auto& which : ids) specs.push_back(make_spec(which));
      // experiments are independent and write to separate directories
      std::vector<std::future<ExperimentReport>> jobs;
      for (const auto& s : specs) jobs.push_back(std::async(std::launch::async, [s] { return run_experiment(s); }));
      bool all_pass = true;
      for (auto& j : jobs) {
        const ExperimentReport r = j.get();
        print_report(r, verbose);
        all_pass = all_pass && r.pass();
      }
      return all_pass ? 0 : kFail;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const UnknownExperiment& e) {
    std::cerr << e.what() << " (see 'singspec list')\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
