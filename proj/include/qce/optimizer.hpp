#pragma once

#include "qce/functionals.hpp"

#include <optional>

namespace qce {

enum class Direction { inf, sup };

struct SolverConfig {
  int max_iter = 20000;
  double fp_tol = 1e-11;
  // Initial damping. Unset: 0 when the homogeneity degree kappa is >= 0,
  // kappa/(kappa-1) otherwise, which cancels the linearized multiplier.
  std::optional<double> damping;
  double objective_tol = 1e-13;
  bool restrict_to_support = true;
  bool allow_outside_region = false;
};

struct OptResult {
  DensityMatrix sigma_star;
  ExtReal value = ExtReal::finite(0.0);
  Direction direction = Direction::sup;
  int iterations = 0;
  double fp_residual = 0.0;
  bool converged = false;
  double damping = 0.0;  // final damping in effect
};

// opt over sigma_B of Q(rho_AB | sigma_B).
OptResult fixed_point_solve(const EntropyParams& params, const BipartiteState& rho,
                            const SolverConfig& cfg = {});

// opt over C of Phi(A, I(x)B, I(x)C); sup when r > 0, inf when r < 0.
OptResult fixed_point_opt(const TraceFunctionalParams& params, const Hermitian& a,
                          const Hermitian& b, int d1, int d2, const SolverConfig& cfg = {});

// Grid search plus Nelder-Mead over full-rank sigma_B; dimB must be 2 or 3.
OptResult brute_force_opt(const EntropyParams& params, const BipartiteState& rho,
                          int resolution = 16);

struct XiCertificate {
  double max_dir_gain;  // lambda_max of Tr_1 Xi
  double min_dir_gain;  // lambda_min of Tr_1 Xi
  double value;         // Tr (X T^r X^dag)^s
  CMatrix reduced;      // Tr_1 Xi
  // Optimality: no direction S gains over the current value.
  bool holds(double tol) const { return max_dir_gain <= value + tol; }
};

bool xi_applicable(double r, double s);

// Divided-difference weight (a^r - b^r)/(r (a - b)); log form at r = 0 and
// a^{r-1} on the diagonal.
double loewner_weight(double a, double b, double r);

// Xi for X and T on one space: chi = X^dag (X T^r X^dag)^{s-1} X weighted
// entrywise in T's eigenbasis by loewner_weight.
CMatrix xi_operator(const CMatrix& x, const CMatrix& t, double r, double s);

XiCertificate xi_certificate(const TraceFunctionalParams& params, const Hermitian& a,
                             const Hermitian& b, const DensityMatrix& c_star, int d1, int d2);

// Certificate for the Q problem at the solver's sigma_B (on supp rho_B). Empty when the
// certificate ranges exclude (r, s), when r = 0, or when sigma_B is singular on the support.
std::optional<XiCertificate> q_certificate(const EntropyParams& params, const BipartiteState& rho,
                                           const DensityMatrix& sigma_star);

}  // namespace qce
