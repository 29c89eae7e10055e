#include "oracles.hpp"
#include "qce/entropies.hpp"
#include "qce/harness.hpp"
#include "qce/random.hpp"

#include <doctest.h>

using namespace qce;

namespace {

BipartiteState random_state(Rng& rng, int da = 2, int db = 2, int rank = -1) {
  return BipartiteState(random_density(da * db, rng, rank), da, db);
}

double fp_defect(const EntropyParams& p, const BipartiteState& rho, const CMatrix& sigma) {
  const TraceProblem prob(p.functional(), rho.matrix(), rho.marginal_b().matrix(), rho.dim_a(), rho.dim_b());
  const auto st = prob.step(sigma);
  return trace_norm(sigma - st.image / st.value);
}

}  // namespace

TEST_SUITE("optimizer") {
  TEST_CASE("product states are fixed by their marginal") {
    Rng rng(21);
    for (const auto& p : catalogue()) {
      const DensityMatrix ra = random_density(2, rng), rb = random_density(2, rng);
      const BipartiteState prod(kron(ra.matrix(), rb.matrix()), 2, 2);
      const OptResult r = fixed_point_solve(p, prod);
      REQUIRE(r.converged);
      CHECK(trace_distance(r.sigma_star.matrix(), rb.matrix()) < 1e-9);
      const Eigh e = eigh(ra.matrix());
      const double expect = std::pow(e.values(0), p.alpha) + std::pow(e.values(1), p.alpha);
      CHECK(r.value.value() == doctest::Approx(expect).epsilon(1e-10));
    }
  }

  TEST_CASE("z = 1 solver reproduces the Petz closed-form optimizer") {
    Rng rng(22);
    for (const auto& [a, l] : {std::pair{0.5, 1.0}, std::pair{0.7, -0.5}, std::pair{1.5, 0.5}, std::pair{2.0, 0.25}}) {
      const BipartiteState rho = random_state(rng);
      const OptResult r = fixed_point_solve({a, 1.0, l}, rho);
      REQUIRE(r.converged);
      const PetzClosedForm cf = petz_closed_form(a, l, rho);
      CHECK(trace_distance(r.sigma_star.matrix(), cf.tau_b.matrix()) < 1e-8);
    }
  }

  TEST_CASE("converged results satisfy the fixed-point equation") {
    Rng rng(23);
    for (const auto& p : catalogue()) {
      const BipartiteState rho = random_state(rng);
      const OptResult r = fixed_point_solve(p, rho);
      REQUIRE(r.converged);
      CHECK(r.fp_residual <= SolverConfig{}.fp_tol);
      if (p.lambda != 0.0) CHECK(fp_defect(p, rho, r.sigma_star.matrix()) <= 10 * SolverConfig{}.fp_tol);
      CHECK((r.direction == Direction::sup) == (p.kappa() >= 0));
    }
  }

  TEST_CASE("optimizer beats random feasible states in the right direction") {
    Rng rng(24);
    for (const auto& p : catalogue()) {
      const BipartiteState rho = random_state(rng);
      const OptResult r = fixed_point_solve(p, rho);
      const double best = r.value.value();
      for (int k = 0; k < 20; ++k) {
        const double v = q_lambda(p, rho, random_density(2, rng)).value();
        if (r.direction == Direction::sup) CHECK(v <= best + 1e-9);
        else CHECK(v >= best - 1e-9);
      }
    }
  }

  TEST_CASE("fixed point agrees with the grid oracle at the max-entropy point") {
    Rng rng(25);
    const BipartiteState rho = random_state(rng);
    const EntropyParams p{0.5, 0.5, 1.0};
    const OptResult fp = fixed_point_solve(p, rho);
    const OptResult bf = brute_force_opt(p, rho, 12);
    CHECK(std::abs(fp.value.value() - bf.value.value()) <= 1e-6);
  }

  TEST_CASE("grid oracle on Bell and product states") {
    const BipartiteState bell(oracle::bell(), 2, 2);
    CHECK(brute_force_opt({2, 1, 1}, bell, 8).value.value() == doctest::Approx(2.0).epsilon(1e-7));
    Rng rng(26);
    const DensityMatrix ra = random_density(2, rng), rb = random_density(2, rng);
    const BipartiteState prod(kron(ra.matrix(), rb.matrix()), 2, 2);
    const OptResult r = brute_force_opt({0.5, 1, 0.5}, prod, 10);
    CHECK(trace_distance(r.sigma_star.matrix(), rb.matrix()) < 1e-4);
    CHECK_THROWS_AS(brute_force_opt({0.5, 1, 0.5}, BipartiteState(random_density(8, rng), 2, 4), 4), DimensionError);
  }

  TEST_CASE("grid oracle for a three-dimensional B") {
    Rng rng(27);
    const BipartiteState rho = random_state(rng, 2, 3);
    const EntropyParams p{1.5, 1.2, 0.5};
    const OptResult fp = fixed_point_solve(p, rho);
    const OptResult bf = brute_force_opt(p, rho, 3);
    CHECK(std::abs(fp.value.value() - bf.value.value()) <= 1e-5 * (1 + std::abs(fp.value.value())));
  }

  TEST_CASE("lambda = 0 makes every grid point equal") {
    Rng rng(28);
    const BipartiteState rho = random_state(rng);
    const EntropyParams p{0.7, 0.7, 0.0};
    const double first = q_lambda(p, rho, DensityMatrix::maximally_mixed(2)).value();
    for (int k = 0; k < 10; ++k) CHECK(std::abs(q_lambda(p, rho, random_density(2, rng)).value() - first) <= 1e-9);
    CHECK(std::abs(brute_force_opt(p, rho, 4).value.value() - first) <= 1e-9);
  }

  TEST_CASE("optimizers tensorize") {
    Rng rng(29);
    for (const EntropyParams p : {EntropyParams{0.6, 1.5, -0.5}, EntropyParams{2, 2, 1}, EntropyParams{0.8, 2, 0.3}}) {
      const BipartiteState x = random_state(rng), y = random_state(rng);
      const OptResult rx = fixed_point_solve(p, x), ry = fixed_point_solve(p, y);
      const OptResult rxy = fixed_point_solve(p, bipartite_product(x, y));
      REQUIRE(rxy.converged);
      CHECK(trace_distance(rxy.sigma_star.matrix(), kron(rx.sigma_star.matrix(), ry.sigma_star.matrix())) < 1e-7);
    }
  }

  TEST_CASE("restricting to supp(rho_B) matches the full-space search") {
    Rng rng(30);
    SolverConfig full;
    full.restrict_to_support = false;
    for (const auto& p : catalogue()) {
      if (p.lambda == 0.0) continue;
      // pure state on 2x3: rho_B has rank 2 inside a 3-dimensional B
      const BipartiteState rho = random_state(rng, 2, 3, 1);
      const OptResult restricted = fixed_point_solve(p, rho);
      const OptResult whole = fixed_point_solve(p, rho, full);
      REQUIRE(restricted.converged);
      CAPTURE(p.alpha);
      CAPTURE(p.z);
      CAPTURE(p.lambda);
      if (!whole.converged) continue;
      CHECK(std::abs(restricted.value.value() - whole.value.value()) <= 1e-7);
    }
  }

  TEST_CASE("solver rejects parameters outside the region unless overridden") {
    Rng rng(31);
    const BipartiteState rho = random_state(rng);
    CHECK_THROWS_AS(fixed_point_solve({3, 1, 0.5}, rho), DomainError);
    SolverConfig cfg;
    cfg.allow_outside_region = true;
    CHECK(fixed_point_solve({3, 1, 0.5}, rho, cfg).converged);
  }

  TEST_CASE("non-convergence is reported") {
    Rng rng(32);
    const BipartiteState rho = random_state(rng);
    SolverConfig cfg;
    cfg.max_iter = 2;
    const OptResult r = fixed_point_solve({0.8, 2, 0.3}, rho, cfg);
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 2);
    CHECK(r.fp_residual > cfg.fp_tol);
  }

  TEST_CASE("Loewner weights match quadrature") {
    for (double r : {-0.7, -0.3, 0.25, 0.5, 0.9}) {
      for (const auto& [a, b] : {std::pair{0.3, 0.3}, std::pair{0.2, 0.9}, std::pair{1.5, 0.4}}) {
        const double quad = oracle::sinc_pi(r) * oracle::loewner_integral(a, b, r);
        CHECK(loewner_weight(a, b, r) == doctest::Approx(quad).epsilon(1e-8));
      }
    }
    CHECK(loewner_weight(0.5, 2.0, 0.0) == doctest::Approx(std::log(4.0) / 1.5));
    CHECK(loewner_weight(0.5, 2.0, 1.0) == doctest::Approx(1.0));
    CHECK(loewner_weight(0.5, 2.0, -1.0) == doctest::Approx(1.0));
  }

  TEST_CASE("Xi at r = 1 is chi and certificate ranges") {
    Rng rng(33);
    const CMatrix x = ginibre(3, 3, rng), t = random_density(3, rng).matrix();
    const double s = 0.7;
    const CMatrix chi = x.adjoint() * mpow(hermitize(x * t * x.adjoint()), s - 1) * x;
    CHECK((xi_operator(x, t, 1.0, s) - hermitize(chi)).norm() < 1e-10);
    CHECK(xi_applicable(0.5, 2.0));
    CHECK_FALSE(xi_applicable(0.5, 2.5));
    CHECK_FALSE(xi_applicable(1.0, 1.0));
    CHECK(xi_applicable(-1.0, 3.0));
    CHECK_FALSE(xi_applicable(-1.5, 1.0));
    CHECK_THROWS_AS(xi_certificate({1, 1, 1, 1, {}}, Hermitian::identity(4), Hermitian::identity(2),
                                   DensityMatrix::maximally_mixed(2), 2, 2),
                    DomainError);
  }

  TEST_CASE("Xi trace against T reproduces the objective") {
    Rng rng(34);
    const CMatrix x = ginibre(4, 4, rng), t = random_density(4, rng).matrix();
    for (const auto& [r, s] : {std::pair{0.5, 1.5}, std::pair{-0.4, 0.8}, std::pair{0.0, 2.0}}) {
      const double value = (mpow(hermitize(x * mpow(t, r) * x.adjoint()), s)).trace().real();
      CHECK((t * xi_operator(x, t, r, s)).trace().real() == doctest::Approx(value).epsilon(1e-10));
    }
  }

  TEST_CASE("certificate holds with equality at the solver's optimizer") {
    Rng rng(35);
    for (const auto& p : catalogue()) {
      const BipartiteState rho = random_state(rng);
      const OptResult r = fixed_point_solve(p, rho);
      const auto cert = q_certificate(p, rho, r.sigma_star);
      if (!cert) continue;
      CAPTURE(p.alpha);
      CHECK(cert->holds(1e-7));
      // interior optimum: Tr_1 Xi is proportional to the identity
      CHECK(cert->max_dir_gain - cert->min_dir_gain <= 1e-7);
      CHECK(cert->max_dir_gain == doctest::Approx(cert->value).epsilon(1e-7));
    }
  }

  TEST_CASE("certificate detects a non-optimal point") {
    Rng rng(36);
    const BipartiteState rho = random_state(rng);
    const EntropyParams p{0.5, 1.0, 0.5};
    const auto cert = q_certificate(p, rho, random_density(2, rng));
    REQUIRE(cert);
    CHECK_FALSE(cert->holds(1e-9));
  }

  TEST_CASE("certificate matches a finite-difference directional derivative") {
    Rng rng(37);
    const Hermitian a(random_density(4, rng).matrix()), b(random_density(2, rng).matrix());
    const TraceFunctionalParams fp{0.8, 0.4, 0.6, 1.2, {}};
    const DensityMatrix c = random_density(2, rng), s = random_density(2, rng);
    const auto cert = xi_certificate(fp, a, b, c, 2, 2);
    const TraceProblem prob(fp, a.matrix(), b.matrix(), 2, 2);
    const double h = 1e-6;
    const double deriv = (prob.value(c.matrix() + h * s.matrix()) - prob.value(c.matrix() - h * s.matrix())) / (2 * h);
    const double predicted = fp.s * fp.r * (s.matrix() * cert.reduced).trace().real();
    CHECK(deriv == doctest::Approx(predicted).epsilon(1e-6));
  }
}
