#include "qce/random.hpp"

#include <cmath>
#include <numbers>

namespace qce {

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  do {
    u = uniform();
  } while (u <= 0.0);
  const double v = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u));
  spare_ = radius * std::sin(2.0 * std::numbers::pi * v);
  has_spare_ = true;
  return radius * std::cos(2.0 * std::numbers::pi * v);
}

int Rng::index(int n) { return static_cast<int>(uniform() * n); }

CMatrix ginibre(int rows, int cols, Rng& rng) {
  CMatrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(i, j) = cplx(re, im);
    }
  return g;
}

DensityMatrix random_density(int dim, Rng& rng, int rank) {
  if (rank < 1 || rank > dim) rank = dim;
  const CMatrix g = ginibre(dim, rank, rng);
  return DensityMatrix::normalized(hermitize(g * g.adjoint()));
}

CMatrix random_unitary(int dim, Rng& rng) {
  const CMatrix g = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(dim, dim);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {
    const cplx d = r(i, i);
    if (std::abs(d) > 0.0) q.col(i) *= d / std::abs(d);
  }
  return q;
}

CMatrix random_isometry(int rows, int cols, Rng& rng) {
  return random_unitary(rows, rng).leftCols(cols);
}

CVector random_pure(int dim, Rng& rng) {
  CVector v = ginibre(dim, 1, rng).col(0);
  return v / v.norm();
}

Eigen::MatrixXd random_joint(int dim_x, int dim_y, Rng& rng) {
  Eigen::MatrixXd p(dim_x, dim_y);
  for (int j = 0; j < dim_y; ++j)
    for (int i = 0; i < dim_x; ++i) p(i, j) = 0.05 + rng.uniform();
  return p / p.sum();
}

}  // namespace qce
