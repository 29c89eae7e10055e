#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <vector>

namespace qce {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Eigenvalues below kSupportRel * lambda_max count as kernel.
inline constexpr double kSupportRel = 1e-12;
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kTraceTol = 1e-9;

class Hermitian {
 public:
  Hermitian() = default;
  explicit Hermitian(const CMatrix& m);

  static Hermitian identity(int dim);
  static Hermitian diagonal(const RVector& d);

  const CMatrix& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }
  double trace() const { return m_.trace().real(); }

 private:
  CMatrix m_;
};

class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(const Hermitian& h);
  explicit DensityMatrix(const CMatrix& m) : DensityMatrix(Hermitian(m)) {}

  // Divides a PSD matrix by its trace before validating.
  static DensityMatrix normalized(const CMatrix& m);
  static DensityMatrix maximally_mixed(int dim);

  const Hermitian& hermitian() const { return h_; }
  const CMatrix& matrix() const { return h_.matrix(); }
  int dim() const { return h_.dim(); }

 private:
  Hermitian h_;
};

class BipartiteState {
 public:
  BipartiteState() = default;
  BipartiteState(DensityMatrix state, int dim_a, int dim_b);
  BipartiteState(const CMatrix& m, int dim_a, int dim_b)
      : BipartiteState(DensityMatrix(m), dim_a, dim_b) {}

  const DensityMatrix& state() const { return state_; }
  const CMatrix& matrix() const { return state_.matrix(); }
  int dim_a() const { return dim_a_; }
  int dim_b() const { return dim_b_; }

  DensityMatrix marginal_a() const;
  DensityMatrix marginal_b() const;

 private:
  DensityMatrix state_;
  int dim_a_ = 0;
  int dim_b_ = 0;
};

enum class Keep { A, B };

struct Eigh {
  RVector values;   // ascending
  CMatrix vectors;  // columns
};

CMatrix hermitize(const CMatrix& m);
Eigh eigh(const CMatrix& m);

// Applies f to the eigenvalues on the support; kernel eigenvalues map to 0.
template <class F>
CMatrix support_function(const Eigh& e, F&& f) {
  const double top = e.values.size() ? e.values.maxCoeff() : 0.0;
  const double cut = kSupportRel * top;
  RVector d(e.values.size());
  for (int i = 0; i < d.size(); ++i) {
    d(i) = (top > 0.0 && e.values(i) > cut) ? f(e.values(i)) : 0.0;
  }
  return hermitize(e.vectors * d.asDiagonal() * e.vectors.adjoint());
}

CMatrix kron(const CMatrix& x, const CMatrix& y);
Hermitian tensor(const Hermitian& x, const Hermitian& y);

CMatrix partial_trace(const CMatrix& m, int dim_a, int dim_b, Keep keep);
Hermitian partial_trace(const Hermitian& m, int dim_a, int dim_b, Keep keep);
// General version: keep[i] selects which of the factors survive, in order.
CMatrix partial_trace(const CMatrix& m, const std::vector<int>& dims,
                      const std::vector<bool>& keep);
// Reorders tensor factors: output factor k is input factor perm[k].
CMatrix permute_subsystems(const CMatrix& m, const std::vector<int>& dims,
                           const std::vector<int>& perm);

// Generalized power on the support; throws DomainError for non-PSD input.
CMatrix mpow(const CMatrix& m, double t);
Hermitian frac_power(const Hermitian& m, double t);
CMatrix support_projector(const CMatrix& m);
CMatrix mlog2(const CMatrix& m);
int rank(const CMatrix& m);

double schatten(const CMatrix& m, double p);
double trace_norm(const CMatrix& m);
double trace_distance(const CMatrix& x, const CMatrix& y);

// Vector on system (x) environment, environment of the same dimension.
CVector purify(const DensityMatrix& rho);
CMatrix projector(const CVector& v);

double renyi_entropy(const DensityMatrix& rho, double alpha);
double von_neumann_entropy(const CMatrix& rho);

bool is_diagonal(const CMatrix& m, double tol = 1e-14);

}  // namespace qce
