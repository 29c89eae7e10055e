#pragma once

#include "qce/optimizer.hpp"
#include "qce/region.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qce {

enum class Method { automatic, fixed_point, brute_force, closed_form };

struct EntropyResult {
  ExtReal bits = ExtReal::finite(0.0);
  std::optional<DensityMatrix> sigma_star;
  int iterations = 0;
  double fp_residual = 0.0;
  bool converged = true;
  Method method = Method::automatic;
  bool fell_back = false;  // fixed point failed and the grid search supplied the value
  std::optional<XiCertificate> certificate;
};

EntropyResult h_lambda(const EntropyParams& params, const BipartiteState& rho,
                       Method method = Method::automatic, const SolverConfig& cfg = {});

// Convenience: value in bits, throwing if the solve did not converge.
double h_bits(const EntropyParams& params, const BipartiteState& rho,
              Method method = Method::automatic, const SolverConfig& cfg = {});

// Optimized trace functional Q, i.e. 2^{(1-alpha) H}.
double q_opt(const EntropyParams& params, const BipartiteState& rho,
             Method method = Method::automatic, const SolverConfig& cfg = {});

enum class Named {
  alpha_z_up,
  alpha_z_down,
  petz_up,
  petz_down,
  sandwiched_up,
  sandwiched_down,
  h_min,
  h_max,
  h_min_down,
  h_max_up,
  von_neumann
};

Named parse_named(const std::string& name);
double named_entropy(Named name, const BipartiteState& rho, double alpha = 0.0, double z = 0.0);

struct PetzClosedForm {
  double bits;
  DensityMatrix tau_b;
};
PetzClosedForm petz_closed_form(double alpha, double lambda, const BipartiteState& rho);

enum class ClassicalLimit { none, beta_to_zero, beta_to_infinity };

struct ClassicalResult {
  double bits;
  bool in_region;
};

// joint(x, y) = p(x, y).
ClassicalResult classical_h(double alpha, double beta, const Eigen::MatrixXd& joint,
                            ClassicalLimit limit = ClassicalLimit::none);
ClassicalResult classical_h_lambda(double alpha, double lambda, const Eigen::MatrixXd& joint);
double classical_beta(double alpha, double lambda);
bool in_classical_region(double alpha, double beta);

// Renyi entropy of the conditional distribution p(.|y).
double conditional_renyi(double alpha, const Eigen::MatrixXd& joint, int y);
double hayashi(double alpha, const Eigen::MatrixXd& joint);
double arimoto(double alpha, const Eigen::MatrixXd& joint);

double classical_register_combine(const EntropyParams& params,
                                  const std::vector<std::pair<double, double>>& blocks);

struct DimensionBounds {
  double lo;
  double hi;
};
DimensionBounds dimension_bounds(const BipartiteState& rho);

}  // namespace qce
