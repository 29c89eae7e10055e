#include "qce/linalg.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace qce {

namespace {

std::vector<int> digits(int index, const std::vector<int>& dims) {
  std::vector<int> out(dims.size());
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    out[k] = index % dims[k];
    index /= dims[k];
  }
  return out;
}

int product(const std::vector<int>& dims) {
  return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<>());
}

void require_square(const CMatrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw DimensionError(std::string(what) + ": matrix must be square and non-empty");
  }
}

}  // namespace

Hermitian::Hermitian(const CMatrix& m) {
  require_square(m, "Hermitian");
  if (!m.allFinite()) throw DomainError("Hermitian: non-finite entry");
  const double scale = 1.0 + m.cwiseAbs().maxCoeff();
  const double skew = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (skew > kHermitianTol * scale) {
    throw DomainError("Hermitian: matrix is not Hermitian (skew " + std::to_string(skew) + ")");
  }
  m_ = hermitize(m);
}

Hermitian Hermitian::identity(int dim) { return Hermitian(CMatrix::Identity(dim, dim)); }

Hermitian Hermitian::diagonal(const RVector& d) {
  return Hermitian(CMatrix(d.cast<cplx>().asDiagonal()));
}

DensityMatrix::DensityMatrix(const Hermitian& h) : h_(h) {
  const Eigh e = eigh(h_.matrix());
  if (e.values(0) < -kPsdTol) {
    throw DomainError("DensityMatrix: negative eigenvalue " + std::to_string(e.values(0)));
  }
  if (std::abs(h_.trace() - 1.0) > kTraceTol) {
    throw DomainError("DensityMatrix: trace " + std::to_string(h_.trace()) + " != 1");
  }
}

DensityMatrix DensityMatrix::normalized(const CMatrix& m) {
  const double tr = m.trace().real();
  if (!(tr > 0.0)) throw DomainError("DensityMatrix::normalized: non-positive trace");
  return DensityMatrix(CMatrix(m / tr));
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  return DensityMatrix(CMatrix(CMatrix::Identity(dim, dim) / static_cast<double>(dim)));
}

BipartiteState::BipartiteState(DensityMatrix state, int dim_a, int dim_b)
    : state_(std::move(state)), dim_a_(dim_a), dim_b_(dim_b) {
  if (dim_a < 1 || dim_b < 1 || dim_a * dim_b != state_.dim()) {
    throw DimensionError("BipartiteState: dimA*dimB must equal the matrix dimension");
  }
}

DensityMatrix BipartiteState::marginal_a() const {
  return DensityMatrix(partial_trace(matrix(), dim_a_, dim_b_, Keep::A));
}

DensityMatrix BipartiteState::marginal_b() const {
  return DensityMatrix(partial_trace(matrix(), dim_a_, dim_b_, Keep::B));
}

CMatrix hermitize(const CMatrix& m) { return (m + m.adjoint()) * 0.5; }

Eigh eigh(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitize(m));
  if (solver.info() != Eigen::Success) throw DomainError("eigh: decomposition failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

CMatrix kron(const CMatrix& x, const CMatrix& y) {
  return Eigen::kroneckerProduct(x, y).eval();
}

Hermitian tensor(const Hermitian& x, const Hermitian& y) {
  return Hermitian(kron(x.matrix(), y.matrix()));
}

CMatrix partial_trace(const CMatrix& m, int dim_a, int dim_b, Keep keep) {
  if (dim_a < 1 || dim_b < 1 || m.rows() != dim_a * dim_b || m.cols() != m.rows()) {
    throw DimensionError("partial_trace: dims do not match the matrix");
  }
  if (keep == Keep::A) {
    CMatrix out = CMatrix::Zero(dim_a, dim_a);
    for (int i = 0; i < dim_a; ++i)
      for (int j = 0; j < dim_a; ++j)
        for (int b = 0; b < dim_b; ++b) out(i, j) += m(i * dim_b + b, j * dim_b + b);
    return hermitize(out);
  }
  CMatrix out = CMatrix::Zero(dim_b, dim_b);
  for (int a = 0; a < dim_a; ++a) out += m.block(a * dim_b, a * dim_b, dim_b, dim_b);
  return hermitize(out);
}

Hermitian partial_trace(const Hermitian& m, int dim_a, int dim_b, Keep keep) {
  return Hermitian(partial_trace(m.matrix(), dim_a, dim_b, keep));
}

CMatrix partial_trace(const CMatrix& m, const std::vector<int>& dims,
                      const std::vector<bool>& keep) {
  if (dims.size() != keep.size() || dims.empty()) {
    throw DimensionError("partial_trace: dims and keep differ in length");
  }
  const int n = product(dims);
  if (m.rows() != n || m.cols() != n) throw DimensionError("partial_trace: dims do not match");
  std::vector<int> kept_dims;
  for (std::size_t k = 0; k < dims.size(); ++k)
    if (keep[k]) kept_dims.push_back(dims[k]);
  const int n_out = product(kept_dims);
  CMatrix out = CMatrix::Zero(n_out, n_out);
  for (int i = 0; i < n; ++i) {
    const auto di = digits(i, dims);
    for (int j = 0; j < n; ++j) {
      const auto dj = digits(j, dims);
      bool traced_match = true;
      int oi = 0, oj = 0;
      for (std::size_t k = 0; k < dims.size(); ++k) {
        if (keep[k]) {
          oi = oi * dims[k] + di[k];
          oj = oj * dims[k] + dj[k];
        } else if (di[k] != dj[k]) {
          traced_match = false;
          break;
        }
      }
      if (traced_match) out(oi, oj) += m(i, j);
    }
  }
  return hermitize(out);
}

CMatrix permute_subsystems(const CMatrix& m, const std::vector<int>& dims,
                           const std::vector<int>& perm) {
  if (perm.size() != dims.size()) throw DimensionError("permute_subsystems: bad permutation");
  const int n = product(dims);
  if (m.rows() != n || m.cols() != n) throw DimensionError("permute_subsystems: dims mismatch");
  std::vector<int> out_dims(dims.size());
  for (std::size_t k = 0; k < perm.size(); ++k) out_dims[k] = dims.at(perm[k]);
  auto source = [&](int out_index) {
    const auto d = digits(out_index, out_dims);
    std::vector<int> in(dims.size());
    for (std::size_t k = 0; k < perm.size(); ++k) in[perm[k]] = d[k];
    int idx = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) idx = idx * dims[k] + in[k];
    return idx;
  };
  std::vector<int> map(n);
  for (int i = 0; i < n; ++i) map[i] = source(i);
  CMatrix out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = m(map[i], map[j]);
  return out;
}

CMatrix mpow(const CMatrix& m, double t) {
  require_square(m, "mpow");
  const Eigh e = eigh(m);
  const double top = std::max(0.0, e.values.maxCoeff());
  if (e.values(0) < -kPsdTol * std::max(1.0, top)) {
    throw DomainError("frac_power: input is not positive semidefinite");
  }
  if (t == 1.0) return support_function(e, [](double x) { return x; });
  if (t == 0.0) return support_function(e, [](double) { return 1.0; });
  return support_function(e, [t](double x) { return std::pow(x, t); });
}

Hermitian frac_power(const Hermitian& m, double t) { return Hermitian(mpow(m.matrix(), t)); }

CMatrix support_projector(const CMatrix& m) { return mpow(m, 0.0); }

CMatrix mlog2(const CMatrix& m) {
  return support_function(eigh(m), [](double x) { return std::log2(x); });
}

int rank(const CMatrix& m) {
  const Eigh e = eigh(m);
  const double top = e.values.cwiseAbs().maxCoeff();
  if (top <= 0.0) return 0;
  int r = 0;
  for (int i = 0; i < e.values.size(); ++i)
    if (std::abs(e.values(i)) > kSupportRel * top) ++r;
  return r;
}

double schatten(const CMatrix& m, double p) {
  if (!(p > 0.0)) throw DomainError("schatten: p must be positive");
  Eigen::JacobiSVD<CMatrix> svd(m);
  double acc = 0.0;
  for (int i = 0; i < svd.singularValues().size(); ++i) acc += std::pow(svd.singularValues()(i), p);
  return std::pow(acc, 1.0 / p);
}

double trace_norm(const CMatrix& m) { return schatten(m, 1.0); }

double trace_distance(const CMatrix& x, const CMatrix& y) { return 0.5 * trace_norm(x - y); }

CVector purify(const DensityMatrix& rho) {
  const int d = rho.dim();
  const Eigh e = eigh(rho.matrix());
  CVector v = CVector::Zero(d * d);
  for (int i = 0; i < d; ++i) {
    const double w = std::max(0.0, e.values(i));
    if (w == 0.0) continue;
    CVector env = CVector::Zero(d);
    env(d - 1 - i) = 1.0;  // largest weight on the first environment vector
    v += std::sqrt(w) * kron(e.vectors.col(i), env);
  }
  return v / v.norm();
}

CMatrix projector(const CVector& v) { return v * v.adjoint(); }

double renyi_entropy(const DensityMatrix& rho, double alpha) {
  const Eigh e = eigh(rho.matrix());
  const double top = e.values.maxCoeff();
  double acc = 0.0;
  for (int i = 0; i < e.values.size(); ++i)
    if (e.values(i) > kSupportRel * top) acc += std::pow(e.values(i), alpha);
  return std::log2(acc) / (1.0 - alpha);
}

double von_neumann_entropy(const CMatrix& rho) {
  const Eigh e = eigh(rho);
  const double top = e.values.maxCoeff();
  double s = 0.0;
  for (int i = 0; i < e.values.size(); ++i) {
    const double x = e.values(i);
    if (x > kSupportRel * top) s -= x * std::log2(x);
  }
  return s;
}

bool is_diagonal(const CMatrix& m, double tol) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (i != j && std::abs(m(i, j)) > tol) return false;
  return true;
}

}  // namespace qce
