#include "qce/functionals.hpp"

#include <cmath>
#include <string>

namespace qce {

namespace {

constexpr double kSupportCondTol = 1e-10;

double trace_power(const CMatrix& m, double s) {
  const Eigh e = eigh(m);
  const double top = e.values.maxCoeff();
  if (e.values(0) < -kPsdTol * std::max(1.0, top)) {
    throw DomainError("trace functional: inner operator is not positive semidefinite");
  }
  double acc = 0.0;
  for (int i = 0; i < e.values.size(); ++i)
    if (top > 0.0 && e.values(i) > kSupportRel * top) acc += std::pow(e.values(i), s);
  return acc;
}

CMatrix kernel_or_identity(const CMatrix& k, int dim) {
  if (k.size() == 0) return CMatrix::Identity(dim, dim);
  if (k.rows() != dim) throw DimensionError("trace functional: K has incompatible dimensions");
  return k;
}

CMatrix lift(const CMatrix& m, int d1) { return kron(CMatrix::Identity(d1, d1), m); }

}  // namespace

ExtReal ExtReal::finite(double v) {
  if (!std::isfinite(v)) throw DomainError("ExtReal::finite: value is not finite");
  return ExtReal(false, v);
}

double ExtReal::value() const {
  if (infinite_) throw DomainError("ExtReal: value is +infinity");
  return v_;
}

EntropyParams::EntropyParams(double a, double zz, double l) : alpha(a), z(zz), lambda(l) {
  if (!(alpha > 0.0) || alpha == 1.0 || !std::isfinite(alpha)) {
    throw DomainError("EntropyParams: alpha must be positive and different from 1");
  }
  if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("EntropyParams: z must be positive");
  if (!std::isfinite(lambda)) throw DomainError("EntropyParams: lambda must be finite");
}

TraceFunctionalParams EntropyParams::functional() const {
  return {alpha / z, (1.0 - lambda) * (1.0 - alpha) / z, lambda * (1.0 - alpha) / z, z, {}};
}

double psi(const TraceFunctionalParams& params, const Hermitian& a, const Hermitian& b) {
  if (params.s == 0.0) throw DomainError("psi: s must be nonzero");
  const CMatrix k = kernel_or_identity(params.K, a.dim());
  if (k.cols() != b.dim()) throw DimensionError("psi: K does not map B's space to A's");
  const CMatrix x = mpow(a.matrix(), params.p / 2.0) * k * mpow(b.matrix(), params.q / 2.0);
  return trace_power(x * x.adjoint(), params.s);
}

double phi(const TraceFunctionalParams& params, const Hermitian& a, const Hermitian& b,
           const Hermitian& c, std::optional<std::pair<int, int>> split) {
  if (params.s == 0.0) throw DomainError("phi: s must be nonzero");
  if (b.dim() != c.dim()) throw DimensionError("phi: B and C must share a space");
  const int d1 = split ? split->first : 1;
  if (split && (split->second != b.dim() || d1 * b.dim() != a.dim())) {
    throw DimensionError("phi: split does not match operand dimensions");
  }
  if (!split && a.dim() != b.dim()) throw DimensionError("phi: operand dimensions differ");
  const CMatrix bq = mpow(b.matrix(), params.q / 2.0);
  const CMatrix middle = lift(bq * mpow(c.matrix(), params.r) * bq, d1);
  const CMatrix ap = mpow(a.matrix(), params.p / 2.0);
  const CMatrix k = kernel_or_identity(params.K, a.dim());
  return trace_power(ap * k * middle * k.adjoint() * ap, params.s);
}

bool supported_within(const CMatrix& rho, const CMatrix& sigma) {
  const CMatrix n = CMatrix::Identity(sigma.rows(), sigma.cols()) - support_projector(sigma);
  return trace_norm(n * rho * n) <= kSupportCondTol;
}

bool perpendicular(const CMatrix& tau, const CMatrix& sigma) {
  return std::abs((support_projector(tau) * support_projector(sigma)).trace()) <= kSupportCondTol;
}

ExtReal upsilon(const EntropyParams& params, const DensityMatrix& rho, const Hermitian& tau,
                const Hermitian& sigma) {
  if (rho.dim() != tau.dim() || rho.dim() != sigma.dim()) {
    throw DimensionError("upsilon: operand dimensions differ");
  }
  if (!supported_within(rho.matrix(), tau.matrix())) {
    throw DomainError("upsilon: rho is not supported within tau");
  }
  const double a = params.alpha, z = params.z;
  const bool finite = (params.kappa() >= 0.0 && !perpendicular(tau.matrix(), sigma.matrix())) ||
                      supported_within(rho.matrix(), sigma.matrix());
  if (!finite) return ExtReal::infinity();
  const CMatrix rp = mpow(rho.matrix(), a / (2.0 * z));
  const CMatrix tp = mpow(tau.matrix(), (1.0 - params.lambda) * (1.0 - a) / (2.0 * z));
  const CMatrix sp = mpow(sigma.matrix(), params.kappa() / z);
  const double t = trace_power(rp * tp * sp * tp * rp, z);
  if (!(t > 0.0)) {
    if (a < 1.0) return ExtReal::infinity();
    throw DomainError("upsilon: trace vanishes for alpha > 1");
  }
  return ExtReal::finite(std::log2(t) / (a - 1.0));
}

ExtReal q_lambda(const EntropyParams& params, const BipartiteState& rho,
                 const DensityMatrix& sigma_b) {
  if (sigma_b.dim() != rho.dim_b()) throw DimensionError("q_lambda: sigma_B has the wrong size");
  const CMatrix id = CMatrix::Identity(rho.dim_a(), rho.dim_a());
  const Hermitian tau(kron(id, rho.marginal_b().matrix()));
  const Hermitian sigma(kron(id, sigma_b.matrix()));
  const ExtReal u = upsilon(params, rho.state(), tau, sigma);
  if (!u.is_finite()) return params.alpha > 1.0 ? ExtReal::infinity() : ExtReal::finite(0.0);
  return ExtReal::finite(std::exp2((params.alpha - 1.0) * u.value()));
}

TraceProblem::TraceProblem(const TraceFunctionalParams& params, const CMatrix& a,
                           const CMatrix& b, int d1, int d2)
    : r_(params.r), s_(params.s), d1_(d1), d2_(d2) {
  if (params.s == 0.0) throw DomainError("TraceProblem: s must be nonzero");
  if (b.rows() != d2 || a.rows() != d1 * d2) throw DimensionError("TraceProblem: bad dims");
  const CMatrix k = kernel_or_identity(params.K, d1 * d2);
  left_ = mpow(a, params.p / 2.0) * k * lift(mpow(b, params.q / 2.0), d1);
  gram_ = hermitize(left_.adjoint() * left_);
}

CMatrix TraceProblem::inner(const CMatrix& c) const {
  const CMatrix cr = lift(mpow(c, r_ / 2.0), d1_);
  return hermitize(cr * gram_ * cr);
}

double TraceProblem::value(const CMatrix& c) const { return trace_power(inner(c), s_); }

TraceProblem::Step TraceProblem::step(const CMatrix& c) const {
  const CMatrix g = mpow(inner(c), s_);
  const CMatrix image = partial_trace(g, d1_, d2_, Keep::B);
  return {image.trace().real(), image};
}

}  // namespace qce
