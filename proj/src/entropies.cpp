#include "qce/entropies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace qce {

namespace {

double bits_from_q(const EntropyParams& params, double q) {
  if (!(q > 0.0)) {
    if (params.alpha < 1.0) return std::numeric_limits<double>::infinity();
    throw DomainError("optimized functional vanishes for alpha > 1");
  }
  return std::log2(q) / (1.0 - params.alpha);
}

EntropyResult from_opt(const EntropyParams& params, const OptResult& opt, Method method) {
  EntropyResult r;
  const double h = bits_from_q(params, opt.value.as_double());
  r.bits = std::isfinite(h) ? ExtReal::finite(h) : ExtReal::infinity();
  r.sigma_star = opt.sigma_star;
  r.iterations = opt.iterations;
  r.fp_residual = opt.fp_residual;
  r.converged = opt.converged;
  r.method = method;
  return r;
}

void require_region(const EntropyParams& params, const SolverConfig& cfg) {
  if (!cfg.allow_outside_region && !in_region(params)) {
    throw DomainError("parameters lie outside the DPI region; set allow_outside_region to override");
  }
}

Eigen::MatrixXd diagonal_joint(const BipartiteState& rho) {
  Eigen::MatrixXd p(rho.dim_a(), rho.dim_b());
  for (int x = 0; x < rho.dim_a(); ++x)
    for (int y = 0; y < rho.dim_b(); ++y) p(x, y) = rho.matrix()(x * rho.dim_b() + y, x * rho.dim_b() + y).real();
  return p;
}

double lambda_max(const CMatrix& m) { return eigh(m).values.maxCoeff(); }

}  // namespace

EntropyResult h_lambda(const EntropyParams& params, const BipartiteState& rho, Method method,
                       const SolverConfig& cfg) {
  switch (method) {
    case Method::closed_form: {
      require_region(params, cfg);
      if (params.z == 1.0) {
        const PetzClosedForm cf = petz_closed_form(params.alpha, params.lambda, rho);
        EntropyResult r;
        r.bits = ExtReal::finite(cf.bits);
        r.sigma_star = cf.tau_b;
        r.method = Method::closed_form;
        return r;
      }
      if (!is_diagonal(rho.matrix())) {
        throw DomainError("closed form needs z = 1 or a classical (diagonal) state");
      }
      EntropyResult r;
      r.bits = ExtReal::finite(
          classical_h_lambda(params.alpha, params.lambda, diagonal_joint(rho)).bits);
      r.method = Method::closed_form;
      return r;
    }
    case Method::brute_force: {
      require_region(params, cfg);
      return from_opt(params, brute_force_opt(params, rho), Method::brute_force);
    }
    case Method::fixed_point: {
      const OptResult opt = fixed_point_solve(params, rho, cfg);
      EntropyResult r = from_opt(params, opt, Method::fixed_point);
      if (opt.converged && params.lambda != 0.0) {
        r.certificate = q_certificate(params, rho, opt.sigma_star);
      }
      return r;
    }
    case Method::automatic: {
      if (params.z == 1.0 && params.kappa() != 1.0) {
        return h_lambda(params, rho, Method::closed_form, cfg);
      }
      EntropyResult r = h_lambda(params, rho, Method::fixed_point, cfg);
      if (!r.converged && (rho.dim_b() == 2 || rho.dim_b() == 3)) {
        const int iterations = r.iterations;
        const double residual = r.fp_residual;
        r = from_opt(params, brute_force_opt(params, rho), Method::brute_force);
        r.converged = false;
        r.fell_back = true;
        r.iterations = iterations;
        r.fp_residual = residual;
      }
      return r;
    }
  }
  throw DomainError("h_lambda: unknown method");
}

double h_bits(const EntropyParams& params, const BipartiteState& rho, Method method,
              const SolverConfig& cfg) {
  const EntropyResult r = h_lambda(params, rho, method, cfg);
  if (!r.converged) throw DomainError("h_lambda: solver did not converge");
  return r.bits.value();
}

double q_opt(const EntropyParams& params, const BipartiteState& rho, Method method,
             const SolverConfig& cfg) {
  return std::exp2((1.0 - params.alpha) * h_bits(params, rho, method, cfg));
}

Named parse_named(const std::string& name) {
  static const std::map<std::string, Named> table = {
      {"H-up", Named::alpha_z_up},          {"H-down", Named::alpha_z_down},
      {"petz-up", Named::petz_up},          {"petz-down", Named::petz_down},
      {"sand-up", Named::sandwiched_up},    {"sand-down", Named::sandwiched_down},
      {"hmin", Named::h_min},               {"hmax", Named::h_max},
      {"hmin-down", Named::h_min_down},     {"hmax-up", Named::h_max_up},
      {"vn", Named::von_neumann}};
  const auto it = table.find(name);
  if (it == table.end()) throw DomainError("unknown entropy name: " + name);
  return it->second;
}

double named_entropy(Named name, const BipartiteState& rho, double alpha, double z) {
  const int da = rho.dim_a(), db = rho.dim_b();
  switch (name) {
    case Named::alpha_z_up: return h_bits({alpha, z, 1.0}, rho);
    case Named::alpha_z_down: return h_bits({alpha, z, 0.0}, rho);
    case Named::petz_up: return h_bits({alpha, 1.0, 1.0}, rho);
    case Named::petz_down: return h_bits({alpha, 1.0, 0.0}, rho);
    case Named::sandwiched_up: return h_bits({alpha, alpha, 1.0}, rho);
    case Named::sandwiched_down: return h_bits({alpha, alpha, 0.0}, rho);
    case Named::h_max: return h_bits({0.5, 0.5, 1.0}, rho);
    case Named::h_min: {
      // Dual of the max-entropy on the complementary system of a purification.
      const CMatrix psi = projector(purify(rho.state()));
      const CMatrix rho_ae = partial_trace(psi, {da, db, da * db}, {true, false, true});
      return -h_bits({0.5, 0.5, 1.0}, BipartiteState(DensityMatrix::normalized(rho_ae), da, da * db));
    }
    case Named::h_min_down: {
      const CMatrix w = kron(CMatrix::Identity(da, da), mpow(rho.marginal_b().matrix(), -0.5));
      return -std::log2(lambda_max(w * rho.matrix() * w));
    }
    case Named::h_max_up: {
      const CMatrix proj = support_projector(rho.matrix());
      return std::log2(lambda_max(partial_trace(proj, da, db, Keep::B)));
    }
    case Named::von_neumann:
      return von_neumann_entropy(rho.matrix()) - von_neumann_entropy(rho.marginal_b().matrix());
  }
  throw DomainError("named_entropy: unknown name");
}

PetzClosedForm petz_closed_form(double alpha, double lambda, const BipartiteState& rho) {
  const EntropyParams params(alpha, 1.0, lambda);
  const double kappa = params.kappa();
  if (std::abs(1.0 - kappa) < 1e-12) {
    throw DomainError("petz_closed_form: exponent singularity 1 - lambda(1-alpha) = 0");
  }
  const CMatrix tra = partial_trace(mpow(rho.matrix(), alpha), rho.dim_a(), rho.dim_b(), Keep::B);
  const CMatrix m = mpow(tra, 0.5) * mpow(rho.marginal_b().matrix(), (1.0 - lambda) * (1.0 - alpha) / 2.0);
  const CMatrix g = mpow(hermitize(m.adjoint() * m), 1.0 / (1.0 - kappa));
  const double tr = g.trace().real();
  return {(1.0 - kappa) / (1.0 - alpha) * std::log2(tr), DensityMatrix(CMatrix(g / tr))};
}

bool in_classical_region(double alpha, double beta) {
  return (alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta <= 1.0) || (alpha > 1.0 && beta >= 1.0);
}

double classical_beta(double alpha, double lambda) {
  const double den = 1.0 - lambda * (1.0 - alpha);
  if (den == 0.0) throw DomainError("classical_beta: 1 - lambda(1-alpha) = 0");
  return alpha / den;
}

namespace {

void check_joint(const Eigen::MatrixXd& joint) {
  if ((joint.array() < 0.0).any() || std::abs(joint.sum() - 1.0) > 1e-10) {
    throw DomainError("classical: joint table must be a probability distribution");
  }
}

// Per-symbol (p(y), sum_x p(x|y)^alpha) for symbols with p(y) > 0.
std::vector<std::pair<double, double>> symbol_moments(double alpha, const Eigen::MatrixXd& joint) {
  std::vector<std::pair<double, double>> out;
  for (int y = 0; y < joint.cols(); ++y) {
    const double py = joint.col(y).sum();
    if (py <= 0.0) continue;
    double f = 0.0;
    for (int x = 0; x < joint.rows(); ++x) {
      const double c = joint(x, y) / py;
      if (c > 0.0) f += std::pow(c, alpha);
    }
    out.emplace_back(py, f);
  }
  return out;
}

}  // namespace

double conditional_renyi(double alpha, const Eigen::MatrixXd& joint, int y) {
  const double py = joint.col(y).sum();
  if (py <= 0.0) throw DomainError("conditional_renyi: symbol has zero probability");
  double f = 0.0;
  for (int x = 0; x < joint.rows(); ++x)
    if (joint(x, y) > 0.0) f += std::pow(joint(x, y) / py, alpha);
  return std::log2(f) / (1.0 - alpha);
}

ClassicalResult classical_h(double alpha, double beta, const Eigen::MatrixXd& joint,
                            ClassicalLimit limit) {
  check_joint(joint);
  const auto moments = symbol_moments(alpha, joint);
  const double lead = alpha / (1.0 - alpha);
  switch (limit) {
    case ClassicalLimit::beta_to_zero: {
      double acc = 0.0;
      for (const auto& [py, f] : moments) acc += py * std::log2(f) / alpha;
      return {lead * acc, alpha < 1.0};
    }
    case ClassicalLimit::beta_to_infinity: {
      // Power mean tends to the largest per-symbol norm; for alpha > 1 the
      // negative prefactor turns that into the smallest conditional entropy.
      double top = -std::numeric_limits<double>::infinity();
      for (const auto& [py, f] : moments) top = std::max(top, std::log2(f) / alpha);
      return {lead * top, alpha > 1.0};
    }
    case ClassicalLimit::none: break;
  }
  if (beta == 0.0) throw DomainError("classical_h: beta = 0 needs the beta_to_zero limit");
  // log-sum-exp in base 2 so that large |beta| does not under- or overflow
  std::vector<double> terms;
  for (const auto& [py, f] : moments) terms.push_back(std::log2(py) + beta / alpha * std::log2(f));
  const double shift = *std::max_element(terms.begin(), terms.end());
  double acc = 0.0;
  for (double t : terms) acc += std::exp2(t - shift);
  return {lead * (shift + std::log2(acc)) / beta, in_classical_region(alpha, beta)};
}

ClassicalResult classical_h_lambda(double alpha, double lambda, const Eigen::MatrixXd& joint) {
  return classical_h(alpha, classical_beta(alpha, lambda), joint);
}

double hayashi(double alpha, const Eigen::MatrixXd& joint) {
  check_joint(joint);
  double acc = 0.0;
  for (const auto& [py, f] : symbol_moments(alpha, joint)) acc += py * f;
  return std::log2(acc) / (1.0 - alpha);
}

double arimoto(double alpha, const Eigen::MatrixXd& joint) {
  check_joint(joint);
  double acc = 0.0;
  for (const auto& [py, f] : symbol_moments(alpha, joint)) acc += py * std::pow(f, 1.0 / alpha);
  return alpha / (1.0 - alpha) * std::log2(acc);
}

double classical_register_combine(const EntropyParams& params,
                                  const std::vector<std::pair<double, double>>& blocks) {
  double total = 0.0;
  for (const auto& b : blocks) total += b.first;
  if (blocks.empty() || std::abs(total - 1.0) > 1e-10) {
    throw DomainError("classical_register_combine: weights must form a distribution");
  }
  const double one_minus_kappa = 1.0 - params.kappa();
  const double g = (1.0 - params.alpha) / one_minus_kappa;
  double acc = 0.0;
  for (const auto& [w, h] : blocks)
    if (w > 0.0) acc += w * std::exp2(g * h);
  return std::log2(acc) / g;
}

DimensionBounds dimension_bounds(const BipartiteState& rho) {
  const int ra = rank(rho.marginal_a().matrix());
  const int rb = rank(rho.marginal_b().matrix());
  return {-std::log2(static_cast<double>(std::min(ra, rb))), std::log2(static_cast<double>(ra))};
}

}  // namespace qce
