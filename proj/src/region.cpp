#include "qce/region.hpp"

#include <algorithm>
#include <cmath>

namespace qce {

namespace {

constexpr double kSlack = 1e-12;

bool leq(double a, double b) { return a <= b + kSlack * (1.0 + std::abs(a) + std::abs(b)); }

}  // namespace

const char* to_string(Branch b) {
  switch (b) {
    case Branch::D1: return "D1";
    case Branch::D2: return "D2";
    case Branch::outside: return "outside";
  }
  return "outside";
}

RegionTag classify_region(const EntropyParams& p) {
  const double a = p.alpha, z = p.z, l = p.lambda;
  if (a > 0.0 && a < 1.0) {
    if (leq(1.0 - z, a) && leq(a, z) && leq(1.0 - z / (1.0 - a), l) && leq(l, 1.0)) {
      return {true, Branch::D1};
    }
  } else if (a > 1.0) {
    if (leq(a - 1.0, z) && leq(z, a) && leq(a, 2.0 * z) && leq(1.0 + z / (1.0 - a), l) &&
        leq(l, 1.0)) {
      return {true, Branch::D2};
    }
  }
  return {false, Branch::outside};
}

EntropyParams dual_params(const EntropyParams& p) {
  const double a = p.alpha, z = p.z, l = p.lambda;
  const double den = z + l * (a - 1.0);
  if (std::abs(den) < 1e-14) throw DomainError("dual_params: z + lambda(alpha-1) vanishes");
  return EntropyParams((z + (l - 1.0) * (a - 1.0)) / den, z / den, (z - 1.0) / (a - 1.0));
}

double DualityResiduals::max() const {
  return std::max({std::abs(lambda_hat), std::abs(lambda), std::abs(x1)});
}

DualityResiduals duality_residuals(const EntropyParams& p, const EntropyParams& d) {
  return {(1.0 - p.z) / (1.0 - p.alpha) - d.lambda, (1.0 - d.z) / (1.0 - d.alpha) - p.lambda,
          p.z / (1.0 - p.alpha) + d.z / (1.0 - d.alpha)};
}

XCoords reparam_x(const EntropyParams& p) {
  const double g = 1.0 / (1.0 - p.alpha);
  return {p.z * g, g - p.lambda, (p.z - 1.0) * g - p.lambda};
}

EntropyParams from_x(const XCoords& x) {
  const double den = x.x1 + x.x2 - x.x3;
  if (std::abs(den) < 1e-14) throw DomainError("from_x: x1 + x2 - x3 vanishes");
  return EntropyParams((den - 2.0) / den, 2.0 * x.x1 / den, (x.x1 - x.x3 - x.x2) / 2.0);
}

ChainParams chain_params(double beta, double w, double gamma, double v, double lambda) {
  if (beta == 1.0 || gamma == 1.0) throw DomainError("chain_params: beta and gamma must differ from 1");
  const double x1 = w / (1.0 - beta) + v / (1.0 - gamma);
  const double c = (1.0 - w) / (1.0 - beta);
  const double inv = x1 + c;  // 1/(1-alpha)
  if (std::abs(inv) < 1e-14 || !(x1 / inv > 0.0)) {
    throw DomainError("chain_params: relations admit no valid (alpha, z)");
  }
  const EntropyParams joint(1.0 - 1.0 / inv, x1 / inv, lambda);
  const EntropyParams first(beta, w, (1.0 - v) / (1.0 - gamma));
  const EntropyParams second(gamma, v, lambda);
  const double prod = (joint.alpha - 1.0) * (beta - 1.0) * (gamma - 1.0);
  return {joint, first, second, prod > 0.0 ? 1 : -1,
          in_region(joint) && in_region(first) && in_region(second)};
}

}  // namespace qce
