#pragma once

#include "qce/functionals.hpp"

namespace qce {

enum class Branch { D1, D2, outside };

struct RegionTag {
  bool member;
  Branch branch;
};

const char* to_string(Branch b);

// Closed boundaries up to a 1e-12 relative slack; alpha = 1 is excluded.
RegionTag classify_region(const EntropyParams& params);
inline bool in_region(const EntropyParams& params) { return classify_region(params).member; }

EntropyParams dual_params(const EntropyParams& params);

// Residuals of the three pairing constraints between a triple and its dual.
struct DualityResiduals {
  double lambda_hat;  // (1-z)/(1-alpha) - lambda_hat
  double lambda;      // (1-z_hat)/(1-alpha_hat) - lambda
  double x1;          // z/(1-alpha) + z_hat/(1-alpha_hat)
  double max() const;
};
DualityResiduals duality_residuals(const EntropyParams& p, const EntropyParams& dual);

struct XCoords {
  double x1;
  double x2;
  double x3;
};

XCoords reparam_x(const EntropyParams& params);
EntropyParams from_x(const XCoords& x);

struct ChainParams {
  EntropyParams joint;   // (alpha, z, lambda) for H(AB|C)
  EntropyParams first;   // (beta, w, mu) for H(A|BC)
  EntropyParams second;  // (gamma, v, lambda) for H(B|C)
  // Sign of (alpha-1)(beta-1)(gamma-1): +1 means joint >= first + second.
  int sign;
  bool all_in_region;
};

ChainParams chain_params(double beta, double w, double gamma, double v, double lambda);

}  // namespace qce
