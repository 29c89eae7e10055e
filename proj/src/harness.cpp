#include "qce/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qce {

namespace {

std::optional<double> entropy(const EntropyParams& params, const BipartiteState& rho,
                              const SolverConfig& cfg = {}) {
  const EntropyResult r = h_lambda(params, rho, Method::automatic, cfg);
  if (!r.converged || !r.bits.is_finite()) return std::nullopt;
  return r.bits.value();
}

std::optional<double> q_value(const EntropyParams& params, const BipartiteState& rho) {
  const auto h = entropy(params, rho);
  if (!h) return std::nullopt;
  return std::exp2((1.0 - params.alpha) * *h);
}

BipartiteState random_state(int da, int db, Rng& rng) {
  return BipartiteState(random_density(da * db, rng), da, db);
}

double one_sided(double wrong_side) { return std::max(0.0, wrong_side); }

}  // namespace

PropertyReport run_trials(const std::string& suite, const SuiteOptions& opts, double tolerance,
                          const Trial& trial) {
  if (opts.trials < 1) throw std::invalid_argument("run_trials: trials must be positive");
  std::vector<std::optional<double>> results(opts.trials);
  auto body = [&](int t) {
    Rng rng(opts.seed, static_cast<std::uint64_t>(t));
    try {
      results[t] = trial(rng, t);
    } catch (const std::exception&) {
      results[t] = std::nullopt;
    }
  };
  if (opts.execution == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < opts.trials; ++t) body(t);
  } else {
    for (int t = 0; t < opts.trials; ++t) body(t);
  }
  PropertyReport rep{suite, opts.trials, 0, 0.0, tolerance, false, opts.seed};
  for (const auto& r : results) {
    if (!r || !std::isfinite(*r)) {
      ++rep.failures;
      continue;
    }
    rep.max_violation = std::max(rep.max_violation, *r);
  }
  rep.pass = rep.max_violation <= tolerance && rep.failures <= 0.05 * opts.trials;
  return rep;
}

const std::vector<EntropyParams>& catalogue() {
  static const std::vector<EntropyParams> c = {
      {0.5, 1.0, 1.0},  {0.5, 0.5, 1.0}, {0.7, 0.7, 0.0},  {0.5, 1.0, 0.5},
      {0.6, 1.5, -0.5}, {0.8, 2.0, 0.3}, {2.0, 1.0, 0.5},  {2.0, 2.0, 1.0},
      {1.5, 1.0, 0.0},  {1.5, 1.2, -0.5}, {3.0, 2.0, 0.5}, {1.5, 1.5, 0.5},
  };
  return c;
}

std::vector<EntropyParams> dpi_triples() {
  const auto& c = catalogue();
  return {c[0], c[2], c[4], c[6], c[9], c[10]};
}

std::vector<EntropyParams> self_dual_region_triples() {
  std::vector<EntropyParams> out;
  for (const auto& p : catalogue()) {
    try {
      if (in_region(dual_params(p))) out.push_back(p);
    } catch (const DomainError&) {
      // dual at alpha-hat = infinity
    }
  }
  return out;
}

BipartiteState bipartite_product(const BipartiteState& x, const BipartiteState& y) {
  const CMatrix joint = permute_subsystems(kron(x.matrix(), y.matrix()),
                                           {x.dim_a(), x.dim_b(), y.dim_a(), y.dim_b()}, {0, 2, 1, 3});
  return BipartiteState(DensityMatrix::normalized(joint), x.dim_a() * y.dim_a(),
                        x.dim_b() * y.dim_b());
}

std::vector<PropertyReport> check_dpi(const EntropyParams& params, const SuiteOptions& opts) {
  const int da = opts.dim_a, db = opts.dim_b;
  std::vector<PropertyReport> out;

  out.push_back(run_trials("dpi/unital-A", opts, kInequalitySlack, [&](Rng& rng, int) -> std::optional<double> {
    const BipartiteState rho = random_state(da, db, rng);
    const Channel m = gen_channel(ChannelKind::unital, da, da, 1 + rng.index(3), rng);
    const BipartiteState sigma(DensityMatrix::normalized(apply_product(m, identity_channel(db), rho.matrix())), da, db);
    const auto hin = entropy(params, rho), hout = entropy(params, sigma);
    if (!hin || !hout) return std::nullopt;
    return one_sided(*hin - *hout);
  }));

  out.push_back(run_trials("dpi/cptp-B", opts, kInequalitySlack, [&](Rng& rng, int) -> std::optional<double> {
    const BipartiteState rho = random_state(da, db, rng);
    const Channel n = gen_channel(ChannelKind::cptp, db, db, 1 + rng.index(4), rng);
    const BipartiteState sigma(DensityMatrix::normalized(apply_product(identity_channel(da), n, rho.matrix())), da, db);
    const auto hin = entropy(params, rho), hout = entropy(params, sigma);
    if (!hin || !hout) return std::nullopt;
    return one_sided(*hin - *hout);
  }));

  out.push_back(run_trials("dpi/conditioned", opts, kInequalitySlack, [&](Rng& rng, int t) -> std::optional<double> {
    const BipartiteState rho = random_state(da, db, rng);
    const int da_out = da + t % 2;
    const auto instrument = gen_instrument(db, db, 2, 2 + rng.index(3), rng);
    CMatrix out_state = CMatrix::Zero(da_out * db, da_out * db);
    for (const auto& n : instrument) {
      const Channel m = gen_channel(ChannelKind::subunital, da, da_out, 1 + rng.index(3), rng);
      out_state += apply_product(m, n, rho.matrix());
    }
    const BipartiteState sigma(DensityMatrix::normalized(out_state), da_out, db);
    const auto hin = entropy(params, rho), hout = entropy(params, sigma);
    if (!hin || !hout) return std::nullopt;
    return one_sided(*hin - *hout);
  }));

  return out;
}

PropertyReport check_additivity(const EntropyParams& params, const SuiteOptions& opts) {
  const int da = opts.dim_a, db = opts.dim_b;
  const double tol = (da * db > 4) ? kEqualityTolLarge : kEqualityTol;
  return run_trials("additivity", opts, tol, [&](Rng& rng, int) -> std::optional<double> {
    const BipartiteState x = random_state(da, db, rng);
    const BipartiteState y = random_state(da, db, rng);
    const auto hx = entropy(params, x), hy = entropy(params, y);
    const auto hxy = entropy(params, bipartite_product(x, y));
    if (!hx || !hy || !hxy) return std::nullopt;
    return std::abs(*hxy - *hx - *hy);
  });
}

PropertyReport check_duality(const EntropyParams& params, const SuiteOptions& opts, int dim_c) {
  const EntropyParams dual = dual_params(params);
  if (!in_region(params) || !in_region(dual)) {
    throw std::invalid_argument("check_duality: triple and its dual must both lie in the region");
  }
  const int da = opts.dim_a, db = opts.dim_b;
  const double tol = (db > 2 || dim_c > 2 || da > 2) ? kEqualityTolLarge : kEqualityTol;
  return run_trials("duality", opts, tol, [&](Rng& rng, int) -> std::optional<double> {
    const CMatrix psi = projector(random_pure(da * db * dim_c, rng));
    const std::vector<int> dims{da, db, dim_c};
    const BipartiteState ab(DensityMatrix::normalized(partial_trace(psi, dims, {true, true, false})), da, db);
    const BipartiteState ac(DensityMatrix::normalized(partial_trace(psi, dims, {true, false, true})), da, dim_c);
    const auto h = entropy(params, ab), hd = entropy(dual, ac);
    if (!h || !hd) return std::nullopt;
    return std::abs(*h + *hd);
  });
}

std::vector<ChainSpec> chain_instances() {
  return {
      {"chain/petz-down-3", 3.0, 1.0, 3.0, 1.0, 0.0, true},
      {"chain/petz-down", 2.0, 1.0, 2.0, 1.0, 0.0, false},
      {"chain/sandwiched-up", 2.0, 2.0, 2.0, 2.0, 1.0, false},
      {"chain/hybrid", 2.0, 1.0, 2.0, 2.0, 1.0, false},
  };
}

PropertyReport check_chain(const ChainSpec& spec, const SuiteOptions& opts) {
  const ChainParams cp = chain_params(spec.beta, spec.w, spec.gamma, spec.v, spec.lambda);
  if (!cp.all_in_region && !spec.allow_outside_region) {
    throw std::invalid_argument("check_chain: triples outside the region");
  }
  SolverConfig cfg;
  cfg.allow_outside_region = spec.allow_outside_region;
  return run_trials(spec.name, opts, kInequalitySlack, [&](Rng& rng, int) -> std::optional<double> {
    const CMatrix rho = random_density(8, rng).matrix();
    const CMatrix bc = partial_trace(rho, {2, 2, 2}, {false, true, true});
    const auto joint = entropy(cp.joint, BipartiteState(rho, 4, 2), cfg);
    const auto first = entropy(cp.first, BipartiteState(rho, 2, 4), cfg);
    const auto second = entropy(cp.second, BipartiteState(DensityMatrix::normalized(bc), 2, 2), cfg);
    if (!joint || !first || !second) return std::nullopt;
    const double gap = *joint - *first - *second;
    return one_sided(cp.sign > 0 ? -gap : gap);
  });
}

PropertyReport check_monotone(Axis axis, const std::vector<double>& grid, double fixed_first,
                              double fixed_second, const SuiteOptions& opts,
                              const std::optional<BipartiteState>& state) {
  auto params_at = [&](double x) {
    switch (axis) {
      case Axis::alpha: return EntropyParams(x, fixed_first, fixed_second);
      case Axis::z: return EntropyParams(fixed_first, x, fixed_second);
      case Axis::lambda: return EntropyParams(fixed_first, fixed_second, x);
    }
    throw std::invalid_argument("check_monotone: bad axis");
  };
  for (double x : grid)
    if (!in_region(params_at(x))) throw std::invalid_argument("check_monotone: grid leaves the region");
  const char* name = axis == Axis::alpha ? "monotone/alpha" : axis == Axis::z ? "monotone/z" : "monotone/lambda";
  SuiteOptions o = opts;
  if (state) o.trials = 1;
  return run_trials(name, o, 1e-8, [&](Rng& rng, int) -> std::optional<double> {
    const BipartiteState rho = state ? *state : random_state(opts.dim_a, opts.dim_b, rng);
    std::vector<double> f;
    for (double x : grid) {
      const auto v = axis == Axis::z ? q_value(params_at(x), rho) : entropy(params_at(x), rho);
      if (!v) return std::nullopt;
      f.push_back(*v);
    }
    double worst = 0.0;
    for (std::size_t k = 1; k < f.size(); ++k) {
      // alpha and z: nonincreasing; lambda: nondecreasing
      const double wrong = axis == Axis::lambda ? f[k - 1] - f[k] : f[k] - f[k - 1];
      worst = std::max(worst, one_sided(wrong));
    }
    return worst;
  });
}

PropertyReport check_convexity(ConvexityCase c, const EntropyParams& params,
                               const SuiteOptions& opts) {
  const double a = params.alpha, l = params.lambda;
  const bool ok = c == ConvexityCase::concave_q  ? (a <= 1.0 && l >= 0.0 && l <= 1.0)
                  : c == ConvexityCase::convex_q ? (a >= 1.0 && l >= 0.0 && l <= 1.0)
                                                 : (a <= 1.0 && l < 0.0 && l >= 1.0 - params.z / (1.0 - a));
  if (!ok) throw std::invalid_argument("check_convexity: parameters outside the case's range");
  const char* name = c == ConvexityCase::concave_q  ? "convexity/concave-Q"
                     : c == ConvexityCase::convex_q ? "convexity/convex-Q"
                                                    : "convexity/logconcave-Q";
  return run_trials(name, opts, 1e-9, [&](Rng& rng, int) -> std::optional<double> {
    const BipartiteState r0 = random_state(opts.dim_a, opts.dim_b, rng);
    const BipartiteState r1 = random_state(opts.dim_a, opts.dim_b, rng);
    const BipartiteState mid(DensityMatrix::normalized(0.5 * (r0.matrix() + r1.matrix())), opts.dim_a, opts.dim_b);
    const auto f0 = q_value(params, r0), f1 = q_value(params, r1), fm = q_value(params, mid);
    if (!f0 || !f1 || !fm) return std::nullopt;
    switch (c) {
      case ConvexityCase::concave_q: return one_sided(0.5 * (*f0 + *f1) - *fm);
      case ConvexityCase::convex_q: return one_sided(*fm - 0.5 * (*f0 + *f1));
      case ConvexityCase::logconcave_q:
        return one_sided(0.5 * (std::log2(*f0) + std::log2(*f1)) - std::log2(*fm));
    }
    return std::nullopt;
  });
}

std::vector<PropertyReport> check_limits(const SuiteOptions& opts,
                                         const std::optional<BipartiteState>& state) {
  SuiteOptions o = opts;
  if (state) o.trials = 1;
  auto pick = [&](Rng& rng) { return state ? *state : random_state(opts.dim_a, opts.dim_b, rng); };
  std::vector<PropertyReport> out;

  out.push_back(run_trials("limits/alpha", o, 1e-3, [&](Rng& rng, int) -> std::optional<double> {
    const BipartiteState rho = pick(rng);
    const double z = 1.0, l = 0.5;
    auto sym = [&](double h) -> std::optional<double> {
      const auto up = entropy({1.0 + h, z, l}, rho), down = entropy({1.0 - h, z, l}, rho);
      if (!up || !down) return std::nullopt;
      return 0.5 * (*up + *down);
    };
    const double h1 = 1e-2, h2 = 1e-3;
    const auto s1 = sym(h1), s2 = sym(h2);
    if (!s1 || !s2) return std::nullopt;
    // Symmetric means carry an O(h^2) error; one Richardson step removes it.
    const double extrapolated = (h1 * h1 * *s2 - h2 * h2 * *s1) / (h1 * h1 - h2 * h2);
    return std::abs(extrapolated - named_entropy(Named::von_neumann, rho));
  }));

  out.push_back(run_trials("limits/lambda", o, 1e-4, [&](Rng& rng, int) -> std::optional<double> {
    const BipartiteState rho = pick(rng);
    SolverConfig outside;
    outside.allow_outside_region = true;
    const double eps = 1e-3;
    double worst = 0.0;
    for (const auto& [a, z] : {std::pair{0.7, 0.8}, std::pair{1.5, 1.2}}) {
      const auto down = entropy({a, z, 0.0}, rho), up = entropy({a, z, 1.0}, rho);
      const auto lo_m = entropy({a, z, -eps}, rho), lo_p = entropy({a, z, eps}, rho);
      const auto hi_m = entropy({a, z, 1.0 - eps}, rho), hi_p = entropy({a, z, 1.0 + eps}, rho, outside);
      if (!down || !up || !lo_m || !lo_p || !hi_m || !hi_p) return std::nullopt;
      worst = std::max(worst, std::abs(0.5 * (*lo_m + *lo_p) - *down));
      worst = std::max(worst, std::abs(0.5 * (*hi_m + *hi_p) - *up));
    }
    return worst;
  }));
  return out;
}

std::vector<std::string> suite_names() {
  return {"dpi", "additivity", "duality", "chain", "monotone", "convexity", "limits"};
}

std::vector<PropertyReport> run_suite(const std::string& name, const SuiteOptions& opts) {
  std::vector<PropertyReport> out;
  auto append = [&](std::vector<PropertyReport> r) { out.insert(out.end(), r.begin(), r.end()); };
  auto tag = [](PropertyReport r, const EntropyParams& p) {
    r.suite += "(" + std::to_string(p.alpha).substr(0, 5) + "," + std::to_string(p.z).substr(0, 5) +
               "," + std::to_string(p.lambda).substr(0, 5) + ")";
    return r;
  };
  if (name == "all") {
    for (const auto& n : suite_names()) append(run_suite(n, opts));
  } else if (name == "dpi") {
    for (const auto& p : dpi_triples())
      for (auto& r : check_dpi(p, opts)) out.push_back(tag(r, p));
  } else if (name == "additivity") {
    for (const auto& p : catalogue()) out.push_back(tag(check_additivity(p, opts), p));
  } else if (name == "duality") {
    for (const auto& p : self_dual_region_triples()) out.push_back(tag(check_duality(p, opts), p));
  } else if (name == "chain") {
    for (const auto& spec : chain_instances()) out.push_back(check_chain(spec, opts));
  } else if (name == "monotone") {
    out.push_back(check_monotone(Axis::alpha, {0.3, 0.5, 0.7, 0.9, 1.2, 1.5}, 1.0, 0.5, opts));
    out.push_back(check_monotone(Axis::z, {0.75, 1.0, 1.5, 2.0, 3.0}, 0.75, 0.5, opts));
    out.push_back(check_monotone(Axis::z, {0.75, 1.0, 1.25, 1.5}, 1.5, 0.5, opts));
    out.push_back(check_monotone(Axis::lambda, {-0.5, 0.0, 0.5, 1.0}, 0.5, 1.0, opts));
    out.push_back(check_monotone(Axis::lambda, {-1.0, -0.5, 0.0, 0.5, 1.0}, 1.5, 1.2, opts));
  } else if (name == "convexity") {
    out.push_back(check_convexity(ConvexityCase::concave_q, {0.5, 1.0, 0.5}, opts));
    out.push_back(check_convexity(ConvexityCase::convex_q, {2.0, 1.0, 0.5}, opts));
    out.push_back(check_convexity(ConvexityCase::logconcave_q, {0.5, 1.0, -0.5}, opts));
  } else if (name == "limits") {
    append(check_limits(opts));
  } else {
    throw std::invalid_argument("unknown suite: " + name);
  }
  return out;
}

}  // namespace qce
