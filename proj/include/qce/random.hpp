#pragma once

#include "qce/linalg.hpp"

#include <cstdint>
#include <random>

namespace qce {

// mt19937_64 with portable uniform/normal draws so a seed reproduces bits
// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  Rng(std::uint64_t seed, std::uint64_t stream);

  double uniform();  // [0, 1)
  double normal();
  int index(int n);  // uniform in [0, n)

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

CMatrix ginibre(int rows, int cols, Rng& rng);
DensityMatrix random_density(int dim, Rng& rng, int rank = -1);
CMatrix random_unitary(int dim, Rng& rng);
// First `cols` columns of a Haar unitary on `rows`.
CMatrix random_isometry(int rows, int cols, Rng& rng);
CVector random_pure(int dim, Rng& rng);
Eigen::MatrixXd random_joint(int dim_x, int dim_y, Rng& rng);

}  // namespace qce
