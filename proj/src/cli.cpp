#include "qce/cli.hpp"

#include "qce/harness.hpp"
#include "qce/state_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace qce {

namespace {

using nlohmann::json;

class BadInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(10) << (x == 0.0 ? 0.0 : x);
  return s.str();
}

std::string triple(double a, double b, double c) {
  return "(" + fmt(a) + ", " + fmt(b) + ", " + fmt(c) + ")";
}

Method parse_method(const std::string& m) {
  if (m == "auto") return Method::automatic;
  if (m == "fixed-point") return Method::fixed_point;
  if (m == "brute") return Method::brute_force;
  if (m == "closed-form") return Method::closed_form;
  throw BadInput("unknown method: " + m);
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("QCE_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw BadInput("QCE_SEED is not an unsigned integer");
    }
  }
  return kDefaultSeed;
}

std::pair<int, int> parse_dims(const std::string& s) {
  const auto x = s.find('x');
  if (x == std::string::npos) throw BadInput("dims must look like 2x2");
  try {
    return {std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1))};
  } catch (const std::exception&) {
    throw BadInput("dims must look like 2x2");
  }
}

json report_json(const PropertyReport& r) {
  return {{"suite", r.suite},         {"trials", r.trials},       {"failures", r.failures},
          {"max_violation", r.max_violation}, {"tolerance", r.tolerance}, {"pass", r.pass},
          {"seed", r.seed}};
}

struct Triple {
  double alpha = 0.0, z = 0.0, lambda = 0.0;
  void add_to(CLI::App* app) {
    app->add_option("--alpha", alpha, "Renyi order alpha")->required();
    app->add_option("--z", z, "sandwiching parameter z")->required();
    app->add_option("--lambda", lambda, "interpolation parameter lambda")->required();
  }
};

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
  try {
    const auto c1 = spec.find(':');
    if (c1 == std::string::npos) {
      std::size_t used = 0;
      const double v = std::stod(spec, &used);
      if (used != spec.size()) throw BadInput("bad number: " + spec);
      return {v};
    }
    const auto c2 = spec.find(':', c1 + 1);
    if (c2 == std::string::npos) throw BadInput("grid must be a0:a1:n");
    const double a0 = std::stod(spec.substr(0, c1));
    const double a1 = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
    const int n = std::stoi(spec.substr(c2 + 1));
    if (n < 1) throw BadInput("grid needs n >= 1");
    if (n == 1) return {a0};
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = a0 + (a1 - a0) * i / (n - 1);
    return g;
  } catch (const BadInput&) {
    throw;
  } catch (const std::exception&) {
    throw BadInput("cannot parse grid: " + spec);
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Three-parameter conditional Renyi entropies"};
  app.require_subcommand(1);

  auto* compute = app.add_subcommand("compute", "entropy of a state");
  Triple ct;
  std::string state_path, method = "auto";
  bool as_json = false;
  int max_iter = SolverConfig{}.max_iter;
  compute->add_option("--state", state_path, "state file (JSON)")->required();
  ct.add_to(compute);
  compute->add_option("--method", method, "auto|fixed-point|brute|closed-form");
  compute->add_flag("--json", as_json, "machine-readable output");
  compute->add_option("--max-iter", max_iter, "fixed-point iteration cap")->check(CLI::PositiveNumber);

  auto* region = app.add_subcommand("region", "classify parameters");
  Triple rt;
  rt.add_to(region);

  auto* dual = app.add_subcommand("dual", "dual parameters");
  Triple dt;
  dt.add_to(dual);

  auto* chain = app.add_subcommand("chain", "solve chain-rule parameters");
  double beta = 0, w = 0, gamma = 0, v = 0, chain_lambda = 0;
  chain->add_option("--beta", beta)->required();
  chain->add_option("--w", w)->required();
  chain->add_option("--gamma", gamma)->required();
  chain->add_option("--v", v)->required();
  chain->add_option("--lambda", chain_lambda)->required();

  auto* verify = app.add_subcommand("verify", "run property suites");
  std::string suite = "all", dims = "2x2";
  int trials = 25;
  std::uint64_t seed = 0;
  bool verify_json = false, serial = false;
  verify->add_option("--suite", suite, "dpi|additivity|duality|chain|monotone|convexity|limits|all");
  verify->add_option("--trials", trials);
  auto* seed_opt = verify->add_option("--seed", seed);
  verify->add_option("--dims", dims);
  verify->add_flag("--json", verify_json);
  verify->add_flag("--serial", serial, "run trials without OpenMP");

  auto* sweep = app.add_subcommand("sweep", "entropy over a parameter grid");
  std::string sweep_state, alpha_grid, z_grid = "1", lambda_grid = "1", csv_path, sweep_method = "auto";
  sweep->add_option("--state", sweep_state)->required();
  sweep->add_option("--alpha", alpha_grid)->required();
  sweep->add_option("--z", z_grid);
  sweep->add_option("--lambda", lambda_grid);
  sweep->add_option("--out", csv_path)->required();
  sweep->add_option("--method", sweep_method);

  std::vector<std::string> argv_store{"qce"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitBadInput;
  }

  try {
    if (*compute) {
      const EntropyParams params(ct.alpha, ct.z, ct.lambda);
      const BipartiteState rho = load_state(state_path);
      const RegionTag tag = classify_region(params);
      SolverConfig cfg;
      cfg.allow_outside_region = true;
      cfg.max_iter = max_iter;
      const EntropyResult r = h_lambda(params, rho, parse_method(method), cfg);
      if (as_json) {
        json j;
        j["value_bits"] = r.bits.is_finite() ? json(r.bits.value()) : json("inf");
        j["sigma_star"] = r.sigma_star ? matrix_to_json(r.sigma_star->matrix()) : json(nullptr);
        j["iterations"] = r.iterations;
        j["fp_residual"] = r.fp_residual;
        j["region"] = to_string(tag.branch);
        j["converged"] = r.converged;
        out << j.dump(2) << "\n";
      } else {
        out << "H = ";
        if (r.bits.is_finite()) out << std::fixed << std::setprecision(6) << r.bits.value() << std::defaultfloat;
        else out << "inf";
        out << " bits\nregion: " << to_string(tag.branch) << "\nconverged: " << (r.converged ? "true" : "false")
            << "\niterations: " << r.iterations << "\nfp_residual: " << r.fp_residual << "\n";
        if (r.sigma_star) out << "sigma_star:\n" << r.sigma_star->matrix() << "\n";
      }
      return r.converged ? kExitOk : kExitNoConvergence;
    }
    if (*region) {
      const EntropyParams params(rt.alpha, rt.z, rt.lambda);
      const RegionTag tag = classify_region(params);
      const XCoords x = reparam_x(params);
      out << to_string(tag.branch) << "\n";
      out << "x=" << triple(x.x1, x.x2, x.x3) << "\n";
      try {
        const EntropyParams d = dual_params(params);
        out << "dual=" << triple(d.alpha, d.z, d.lambda) << "\n";
      } catch (const DomainError& e) {
        out << "dual=undefined (" << e.what() << ")\n";
      }
      return kExitOk;
    }
    if (*dual) {
      const EntropyParams params(dt.alpha, dt.z, dt.lambda);
      const EntropyParams d = dual_params(params);
      const DualityResiduals res = duality_residuals(params, d);
      out << "dual=" << triple(d.alpha, d.z, d.lambda) << "\n";
      out << "region=" << to_string(classify_region(d).branch) << "\n";
      out << "constraint_residual=" << res.max() << "\n";
      return kExitOk;
    }
    if (*chain) {
      const ChainParams cp = chain_params(beta, w, gamma, v, chain_lambda);
      out << "alpha=" << fmt(cp.joint.alpha) << " z=" << fmt(cp.joint.z) << " mu=" << fmt(cp.first.lambda) << "\n";
      out << "joint " << triple(cp.joint.alpha, cp.joint.z, cp.joint.lambda) << " "
          << to_string(classify_region(cp.joint).branch) << "\n";
      out << "first " << triple(cp.first.alpha, cp.first.z, cp.first.lambda) << " "
          << to_string(classify_region(cp.first).branch) << "\n";
      out << "second " << triple(cp.second.alpha, cp.second.z, cp.second.lambda) << " "
          << to_string(classify_region(cp.second).branch) << "\n";
      out << "direction=" << (cp.sign > 0 ? ">=" : "<=") << "\nall_in_region="
          << (cp.all_in_region ? "true" : "false") << "\n";
      return kExitOk;
    }
    if (*verify) {
      SuiteOptions opts;
      opts.trials = trials;
      opts.seed = seed_opt->count() ? seed : default_seed();
      std::tie(opts.dim_a, opts.dim_b) = parse_dims(dims);
      opts.execution = serial ? Execution::serial : Execution::parallel;
      if (opts.trials < 1) throw BadInput("trials must be positive");
      std::vector<PropertyReport> reports;
      try {
        reports = run_suite(suite, opts);
      } catch (const std::invalid_argument& e) {
        throw BadInput(e.what());
      }
      bool all = true;
      json arr = json::array();
      for (const auto& r : reports) {
        all = all && r.pass;
        if (verify_json) {
          arr.push_back(report_json(r));
        } else {
          out << (r.pass ? "[PASS] " : "[FAIL] ") << r.suite << " trials=" << r.trials
              << " failures=" << r.failures << " max_violation=" << r.max_violation
              << " tolerance=" << r.tolerance << " seed=" << r.seed << "\n";
        }
      }
      if (verify_json) out << arr.dump(2) << "\n";
      return all ? kExitOk : kExitVerifyFailed;
    }
    if (*sweep) {
      const BipartiteState rho = load_state(sweep_state);
      const Method m = parse_method(sweep_method);
      const auto alphas = parse_grid(alpha_grid), zs = parse_grid(z_grid), lambdas = parse_grid(lambda_grid);
      std::ofstream csv(csv_path);
      if (!csv) throw BadInput("cannot write " + csv_path);
      csv << "alpha,z,lambda,H_bits,converged\n" << std::setprecision(12);
      SolverConfig cfg;
      cfg.allow_outside_region = true;
      for (double a : alphas)
        for (double z : zs)
          for (double l : lambdas) {
            std::string value = "nan";
            bool converged = false;
            try {
              const EntropyResult r = h_lambda(EntropyParams(a, z, l), rho, m, cfg);
              value = r.bits.is_finite() ? fmt(r.bits.value()) : "inf";
              converged = r.converged;
            } catch (const std::exception&) {
            }
            csv << a << "," << z << "," << l << "," << value << "," << (converged ? 1 : 0) << "\n";
          }
      out << "wrote " << alphas.size() * zs.size() * lambdas.size() << " rows to " << csv_path << "\n";
      return kExitOk;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  return kExitBadInput;
}

}  // namespace qce
