#pragma once

#include "qce/linalg.hpp"

#include <limits>
#include <optional>
#include <utility>

namespace qce {

// Real number or +infinity; never a sentinel float.
class ExtReal {
 public:
  static ExtReal finite(double v);
  static ExtReal infinity() { return ExtReal(true, 0.0); }

  bool is_finite() const { return !infinite_; }
  double value() const;  // throws DomainError when infinite
  double as_double() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : v_;
  }

 private:
  ExtReal(bool inf, double v) : infinite_(inf), v_(v) {}
  bool infinite_;
  double v_;
};

struct TraceFunctionalParams {
  double p = 1.0;
  double q = 1.0;
  double r = 1.0;
  double s = 1.0;
  CMatrix K;  // empty means identity
};

struct EntropyParams {
  double alpha;
  double z;
  double lambda;

  EntropyParams(double alpha, double z, double lambda);

  // Homogeneity degree of the objective in sigma; its sign picks sup vs inf.
  double kappa() const { return lambda * (1.0 - alpha); }
  bool is_sup() const { return kappa() >= 0.0; }
  TraceFunctionalParams functional() const;
};

double psi(const TraceFunctionalParams& params, const Hermitian& a, const Hermitian& b);

// With split = (d1, d2), A lives on d1*d2 while B and C act on the d2 factor.
double phi(const TraceFunctionalParams& params, const Hermitian& a, const Hermitian& b,
           const Hermitian& c, std::optional<std::pair<int, int>> split = std::nullopt);

ExtReal upsilon(const EntropyParams& params, const DensityMatrix& rho, const Hermitian& tau,
                const Hermitian& sigma);

ExtReal q_lambda(const EntropyParams& params, const BipartiteState& rho,
                 const DensityMatrix& sigma_b);

bool supported_within(const CMatrix& rho, const CMatrix& sigma);
bool perpendicular(const CMatrix& tau, const CMatrix& sigma);

// Phi(A, I(x)B, I(x)C) as a function of C with A, B fixed. Caches the
// C-independent factor so repeated evaluation costs one d2 and one d1*d2
// eigendecomposition.
class TraceProblem {
 public:
  TraceProblem(const TraceFunctionalParams& params, const CMatrix& a, const CMatrix& b, int d1,
               int d2);

  struct Step {
    double value;
    CMatrix image;  // Tr_1 |X|^{2s}, trace equals value
  };

  double value(const CMatrix& c) const;
  Step step(const CMatrix& c) const;

  double r() const { return r_; }
  double s() const { return s_; }
  int d1() const { return d1_; }
  int d2() const { return d2_; }
  // A^{p/2} K (I (x) B^{q/2})
  const CMatrix& left() const { return left_; }

 private:
  CMatrix inner(const CMatrix& c) const;

  double r_, s_;
  int d1_, d2_;
  CMatrix left_;
  CMatrix gram_;
};

}  // namespace qce
