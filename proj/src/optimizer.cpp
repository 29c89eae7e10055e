#include "qce/optimizer.hpp"

#include "qce/region.hpp"

#include <gsl/gsl_multimin.h>

#include <cmath>
#include <deque>
#include <functional>
#include <limits>

namespace qce {

namespace {

constexpr int kWindow = 10;

double initial_damping(const SolverConfig& cfg, double kappa) {
  if (cfg.damping) {
    if (*cfg.damping < 0.0 || *cfg.damping >= 1.0) throw DomainError("damping must lie in [0,1)");
    return *cfg.damping;
  }
  return kappa < 0.0 ? kappa / (kappa - 1.0) : 0.0;
}

// Counts sign flips of successive objective differences in the window.
bool oscillating(const std::deque<double>& values, double tol) {
  int flips = 0, prev = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double d = values[i] - values[i - 1];
    if (std::abs(d) <= tol * (1.0 + std::abs(values[i]))) continue;
    const int sign = d > 0.0 ? 1 : -1;
    if (prev != 0 && sign != prev) ++flips;
    prev = sign;
  }
  return flips >= kWindow / 2 + 2;
}

struct Iterate {
  CMatrix sigma;
  double value = 0.0;
  double residual = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
  double damping = 0.0;
};

Iterate iterate(const TraceProblem& problem, CMatrix sigma, double kappa,
                const SolverConfig& cfg) {
  if (!(cfg.fp_tol > 0.0) || !(cfg.objective_tol > 0.0)) {
    throw DomainError("SolverConfig: tolerances must be positive");
  }
  Iterate out;
  out.damping = initial_damping(cfg, kappa);
  std::deque<double> window;
  double best_residual = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= cfg.max_iter; ++it) {
    const TraceProblem::Step st = problem.step(sigma);
    if (!(st.value > 0.0) || !std::isfinite(st.value)) break;
    const CMatrix image = st.image / st.value;
    out.sigma = sigma;
    out.value = st.value;
    out.residual = trace_norm(sigma - image);
    out.iterations = it;
    if (out.residual <= cfg.fp_tol) {
      out.converged = true;
      break;
    }
    window.push_back(st.value);
    if (static_cast<int>(window.size()) > kWindow) window.pop_front();
    best_residual = std::min(best_residual, out.residual);
    const bool diverging = out.residual > 1e3 * best_residual;
    if ((static_cast<int>(window.size()) == kWindow && oscillating(window, cfg.objective_tol)) ||
        diverging) {
      out.damping = out.damping == 0.0 ? 0.5 : 0.5 * (1.0 + out.damping);
      window.clear();
      best_residual = out.residual;
    }
    sigma = hermitize((1.0 - out.damping) * image + out.damping * sigma);
  }
  return out;
}

void require_region(const EntropyParams& params, const SolverConfig& cfg) {
  if (!cfg.allow_outside_region && !in_region(params)) {
    throw DomainError("parameters lie outside the DPI region; set allow_outside_region to override");
  }
}

// Isometry onto supp(m): columns are eigenvectors above the support cut.
CMatrix support_isometry(const CMatrix& m) {
  const Eigh e = eigh(m);
  const double top = e.values.maxCoeff();
  std::vector<int> cols;
  for (int i = 0; i < e.values.size(); ++i)
    if (e.values(i) > kSupportRel * top) cols.push_back(i);
  CMatrix v(m.rows(), static_cast<int>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) v.col(k) = e.vectors.col(cols[k]);
  return v;
}

struct Reduced {
  CMatrix rho;
  CMatrix rho_b;
  CMatrix iso;  // dB x k
};

Reduced reduce_to_support(const BipartiteState& rho) {
  const CMatrix rb = rho.marginal_b().matrix();
  const CMatrix v = support_isometry(rb);
  const CMatrix lifted = kron(CMatrix::Identity(rho.dim_a(), rho.dim_a()), v);
  return {hermitize(lifted.adjoint() * rho.matrix() * lifted), hermitize(v.adjoint() * rb * v), v};
}

Direction direction_of(double kappa) { return kappa >= 0.0 ? Direction::sup : Direction::inf; }

}  // namespace

OptResult fixed_point_solve(const EntropyParams& params, const BipartiteState& rho,
                            const SolverConfig& cfg) {
  require_region(params, cfg);
  const int da = rho.dim_a(), db = rho.dim_b();
  const double kappa = params.kappa();
  OptResult res;
  res.direction = direction_of(kappa);

  if (params.lambda == 0.0) {
    const CMatrix rb = rho.marginal_b().matrix();
    const TraceProblem problem(params.functional(), rho.matrix(), rb, da, db);
    res.sigma_star = DensityMatrix(rb);
    res.value = ExtReal::finite(problem.value(rb));
    res.converged = true;
    return res;
  }

  if (cfg.restrict_to_support) {
    const Reduced red = reduce_to_support(rho);
    const int k = static_cast<int>(red.iso.cols());
    const TraceProblem problem(params.functional(), red.rho, red.rho_b, da, k);
    const CMatrix start = red.rho_b / red.rho_b.trace().real();
    const Iterate it = iterate(problem, start, kappa, cfg);
    res.sigma_star = DensityMatrix::normalized(hermitize(red.iso * it.sigma * red.iso.adjoint()));
    res.value = ExtReal::finite(it.value);
    res.iterations = it.iterations;
    res.fp_residual = it.residual;
    res.converged = it.converged;
    res.damping = it.damping;
    return res;
  }

  const CMatrix rb = rho.marginal_b().matrix();
  const TraceProblem problem(params.functional(), rho.matrix(), rb, da, db);
  const CMatrix start = 0.5 * rb + 0.5 * CMatrix::Identity(db, db) / static_cast<double>(db);
  const Iterate it = iterate(problem, start, kappa, cfg);
  res.sigma_star = DensityMatrix::normalized(it.sigma);
  res.value = ExtReal::finite(it.value);
  res.iterations = it.iterations;
  res.fp_residual = it.residual;
  res.converged = it.converged;
  res.damping = it.damping;
  return res;
}

OptResult fixed_point_opt(const TraceFunctionalParams& params, const Hermitian& a,
                          const Hermitian& b, int d1, int d2, const SolverConfig& cfg) {
  const TraceProblem problem(params, a.matrix(), b.matrix(), d1, d2);
  const CMatrix start = CMatrix::Identity(d2, d2) / static_cast<double>(d2);
  OptResult res;
  res.direction = direction_of(params.r);
  if (params.r == 0.0) {
    res.sigma_star = DensityMatrix(start);
    res.value = ExtReal::finite(problem.value(start));
    res.converged = true;
    return res;
  }
  const Iterate it = iterate(problem, start, params.r * params.s, cfg);
  res.sigma_star = DensityMatrix::normalized(it.sigma);
  res.value = ExtReal::finite(it.value);
  res.iterations = it.iterations;
  res.fp_residual = it.residual;
  res.converged = it.converged;
  res.damping = it.damping;
  return res;
}

namespace {

constexpr double kBlochRadius = 1.0 - 1e-6;

CMatrix bloch_state(const double* r) {
  CMatrix s(2, 2);
  s << cplx(1.0 + r[2], 0.0), cplx(r[0], -r[1]), cplx(r[0], r[1]), cplx(1.0 - r[2], 0.0);
  return s * 0.5;
}

// Unconstrained u -> Bloch vector strictly inside the ball.
void ball_map(const double* u, double* r) {
  const double n = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
  const double scale = n > 0.0 ? kBlochRadius * std::tanh(n) / n : kBlochRadius;
  for (int i = 0; i < 3; ++i) r[i] = scale * u[i];
}

void ball_unmap(const double* r, double* u) {
  const double n = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
  const double t = n > 0.0 ? std::atanh(std::min(n / kBlochRadius, 1.0 - 1e-15)) / n : 0.0;
  for (int i = 0; i < 3; ++i) u[i] = t * r[i];
}

std::vector<CMatrix> gell_mann() {
  std::vector<CMatrix> g(8, CMatrix::Zero(3, 3));
  const cplx i(0.0, 1.0);
  g[0](0, 1) = g[0](1, 0) = 1.0;
  g[1](0, 1) = -i;
  g[1](1, 0) = i;
  g[2](0, 0) = 1.0;
  g[2](1, 1) = -1.0;
  g[3](0, 2) = g[3](2, 0) = 1.0;
  g[4](0, 2) = -i;
  g[4](2, 0) = i;
  g[5](1, 2) = g[5](2, 1) = 1.0;
  g[6](1, 2) = -i;
  g[6](2, 1) = i;
  g[7](0, 0) = g[7](1, 1) = 1.0 / std::sqrt(3.0);
  g[7](2, 2) = -2.0 / std::sqrt(3.0);
  return g;
}

CMatrix exp_state(const double* h) {
  static const std::vector<CMatrix> basis = gell_mann();
  CMatrix m = CMatrix::Zero(3, 3);
  for (int k = 0; k < 8; ++k) m += h[k] * basis[k];
  const Eigh e = eigh(m);
  const double shift = e.values.maxCoeff();
  RVector d = (e.values.array() - shift).exp();
  const CMatrix s = e.vectors * d.cast<cplx>().asDiagonal() * e.vectors.adjoint();
  return hermitize(s / s.trace().real());
}

struct Objective {
  std::function<double(const double*)> f;
};

double gsl_trampoline(const gsl_vector* x, void* data) {
  const auto* obj = static_cast<const Objective*>(data);
  return obj->f(x->data);
}

// Minimizes f from x (in place) with restarts; returns the final value.
double nelder_mead(const Objective& obj, std::vector<double>& x, double step) {
  const std::size_t n = x.size();
  gsl_multimin_function fn{&gsl_trampoline, n, const_cast<Objective*>(&obj)};
  gsl_vector* start = gsl_vector_alloc(n);
  gsl_vector* steps = gsl_vector_alloc(n);
  gsl_multimin_fminimizer* m =
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
  double best = obj.f(x.data());
  for (int restart = 0; restart < 4; ++restart) {
    for (std::size_t i = 0; i < n; ++i) gsl_vector_set(start, i, x[i]);
    gsl_vector_set_all(steps, step);
    gsl_multimin_fminimizer_set(m, &fn, start, steps);
    for (int it = 0; it < 4000; ++it) {
      if (gsl_multimin_fminimizer_iterate(m)) break;
      if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(m), 1e-11) == GSL_SUCCESS) break;
    }
    if (m->fval <= best) {
      best = m->fval;
      for (std::size_t i = 0; i < n; ++i) x[i] = gsl_vector_get(m->x, i);
    }
    step *= 0.1;
  }
  gsl_multimin_fminimizer_free(m);
  gsl_vector_free(steps);
  gsl_vector_free(start);
  return best;
}

}  // namespace

OptResult brute_force_opt(const EntropyParams& params, const BipartiteState& rho,
                          int resolution) {
  const int db = rho.dim_b();
  if (db != 2 && db != 3) throw DimensionError("brute_force_opt: dimB must be 2 or 3");
  if (resolution < 2) throw DomainError("brute_force_opt: resolution must be at least 2");
  const double sign = params.is_sup() ? -1.0 : 1.0;  // minimize sign * Q
  auto q_of = [&](const CMatrix& s) {
    return q_lambda(params, rho, DensityMatrix(s)).as_double();
  };

  OptResult res;
  res.direction = direction_of(params.kappa());
  std::vector<double> best_x;
  double best = std::numeric_limits<double>::infinity();

  if (db == 2) {
    for (int i = 0; i < resolution; ++i)
      for (int j = 0; j < resolution; ++j)
        for (int k = 0; k < resolution; ++k) {
          const double h = 2.0 / (resolution - 1);
          double r[3] = {-1.0 + i * h, -1.0 + j * h, -1.0 + k * h};
          if (r[0] * r[0] + r[1] * r[1] + r[2] * r[2] > kBlochRadius * kBlochRadius) continue;
          const double v = sign * q_of(bloch_state(r));
          if (v < best) {
            best = v;
            best_x.assign(r, r + 3);
          }
        }
    std::vector<double> u(3);
    ball_unmap(best_x.data(), u.data());
    const Objective obj{[&](const double* x) {
      double r[3];
      ball_map(x, r);
      return sign * q_of(bloch_state(r));
    }};
    best = nelder_mead(obj, u, 0.2);
    double r[3];
    ball_map(u.data(), r);
    res.sigma_star = DensityMatrix(bloch_state(r));
  } else {
    const int per_axis = std::min(resolution, 3);
    const double span = 1.5;
    std::vector<double> h(8);
    int total = 1;
    for (int k = 0; k < 8; ++k) total *= per_axis;
    for (int idx = 0; idx < total; ++idx) {
      int rest = idx;
      for (int k = 0; k < 8; ++k) {
        h[k] = -span + 2.0 * span * (rest % per_axis) / (per_axis - 1);
        rest /= per_axis;
      }
      const double v = sign * q_of(exp_state(h.data()));
      if (v < best) {
        best = v;
        best_x = h;
      }
    }
    const Objective obj{[&](const double* x) { return sign * q_of(exp_state(x)); }};
    best = nelder_mead(obj, best_x, 0.3);
    res.sigma_star = DensityMatrix(exp_state(best_x.data()));
  }
  res.value = ExtReal::finite(sign * best);
  res.converged = true;
  return res;
}

bool xi_applicable(double r, double s) {
  const bool first = r > 0.0 && r <= 1.0 && s > 0.0 && s <= 1.0 / r && !(r == 1.0 && s == 1.0);
  const bool second = r >= -1.0 && r <= 0.0 && s > 0.0;
  return first || second;
}

double loewner_weight(double a, double b, double r) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("loewner_weight: eigenvalues must be positive");
  const double hi = std::max(a, b), lo = std::min(a, b);
  const double u = std::log(hi / lo);
  if (u == 0.0) return std::pow(hi, r - 1.0);
  if (r == 0.0) return u / (-std::expm1(-u)) / hi;
  return std::pow(hi, r - 1.0) * (-std::expm1(-r * u)) / (r * -std::expm1(-u));
}

CMatrix xi_operator(const CMatrix& x, const CMatrix& t, double r, double s) {
  const CMatrix chi = hermitize(x.adjoint() * mpow(hermitize(x * mpow(t, r) * x.adjoint()), s - 1.0) * x);
  if (r == 1.0) return chi;
  if (r == -1.0) {
    const CMatrix ti = mpow(t, -1.0);
    return hermitize(ti * chi * ti);
  }
  const Eigh e = eigh(t);
  CMatrix w = e.vectors.adjoint() * chi * e.vectors;
  for (int i = 0; i < w.rows(); ++i)
    for (int j = 0; j < w.cols(); ++j) w(i, j) *= loewner_weight(e.values(i), e.values(j), r);
  return hermitize(e.vectors * w * e.vectors.adjoint());
}

XiCertificate xi_certificate(const TraceFunctionalParams& params, const Hermitian& a,
                             const Hermitian& b, const DensityMatrix& c_star, int d1, int d2) {
  if (!xi_applicable(params.r, params.s)) {
    throw DomainError("xi_certificate: (r, s) outside the certificate ranges");
  }
  const Eigh ce = eigh(c_star.matrix());
  if (!(ce.values(0) > kSupportRel * ce.values.maxCoeff())) {
    throw DomainError("xi_certificate: C_star must be full rank");
  }
  const TraceProblem problem(params, a.matrix(), b.matrix(), d1, d2);
  const CMatrix t = kron(CMatrix::Identity(d1, d1), c_star.matrix());
  const CMatrix xi = xi_operator(problem.left(), t, params.r, params.s);
  const CMatrix reduced = partial_trace(xi, d1, d2, Keep::B);
  const Eigh re = eigh(reduced);
  return {re.values.maxCoeff(), re.values.minCoeff(), problem.value(c_star.matrix()), reduced};
}

std::optional<XiCertificate> q_certificate(const EntropyParams& params, const BipartiteState& rho,
                                           const DensityMatrix& sigma_star) {
  const TraceFunctionalParams fp = params.functional();
  // r = 0: the objective does not depend on sigma, so there is nothing to certify
  if (fp.r == 0.0 || !xi_applicable(fp.r, fp.s)) return std::nullopt;
  const Reduced red = reduce_to_support(rho);
  const CMatrix c = hermitize(red.iso.adjoint() * sigma_star.matrix() * red.iso);
  const Eigh ce = eigh(c);
  if (!(ce.values(0) > 1e-10 * ce.values.maxCoeff())) return std::nullopt;
  const int k = static_cast<int>(red.iso.cols());
  return xi_certificate(fp, Hermitian(red.rho), Hermitian(red.rho_b),
                        DensityMatrix::normalized(c), rho.dim_a(), k);
}

}  // namespace qce
