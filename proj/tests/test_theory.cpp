#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gamelab/dynamics.hpp"
#include "gamelab/theory.hpp"
#include "test_util.hpp"

using namespace gamelab;
using testutil::multiset_close;

namespace {

// Brute-force step-size oracle: densely samples the envelope
// eta -> max_k |1 - eta lambda_k|^2 over (0, upper].
std::pair<double, double> grid_search_step_size(const std::vector<Complex>& eigs, double upper,
                                                int points) {
  double best_eta = 0.0;
  double best_val = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= points; ++i) {
    const double eta = upper * i / points;
    double val = 0.0;
    for (const Complex& ev : eigs) val = std::max(val, std::norm(1.0 - eta * ev));
    if (val < best_val) {
      best_val = val;
      best_eta = eta;
    }
  }
  return {best_eta, best_val};
}

std::vector<Complex> random_right_half_spectrum(std::mt19937_64& gen, std::size_t count) {
  std::vector<Complex> eigs(count);
  for (auto& ev : eigs)
    ev = Complex(testutil::uniform(gen, 0.1, 3.0), testutil::uniform(gen, -3.0, 3.0));
  return eigs;
}

double envelope_radius_sq(const std::vector<Complex>& eigs, double eta, double beta) {
  double val = 0.0;
  for (const Complex& ev : eigs) val = std::max(val, momentum_eigenvalues(ev, eta, beta).rho);
  return val;
}

std::vector<double> local_eta_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 300; ++i) grid.push_back(0.005 * i);
  return grid;
}

std::vector<double> local_beta_grid() {
  std::vector<double> grid;
  for (int i = 0; i < 199; ++i) grid.push_back(-0.99 + 0.01 * i);
  return grid;
}

}  // namespace

TEST_CASE("best step size fixtures") {
  SUBCASE("single real eigenvalue") {
    const StepSizeReport r = best_step_size(Spectrum::from_values({Complex(1, 0)}));
    CHECK(r.eta_best == doctest::Approx(1.0));
    CHECK(r.rho_best == doctest::Approx(0.0));
  }
  SUBCASE("two real eigenvalues") {
    const StepSizeReport r = best_step_size(Spectrum::from_values({Complex(1, 0), Complex(2, 0)}));
    CHECK(r.eta_best == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(r.rho_best == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    const auto [eta_oracle, val_oracle] =
        grid_search_step_size({Complex(1, 0), Complex(2, 0)}, 2.0, 100000);
    CHECK(std::abs(r.eta_best - eta_oracle) <= 2.0 / 100000);
    CHECK(r.rho_best * r.rho_best <= val_oracle + 1e-12);
  }
  SUBCASE("one complex eigenvalue") {
    const StepSizeReport r = best_step_size(Spectrum::from_values({Complex(1, 1)}));
    CHECK(r.eta_best == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.rho_best * r.rho_best == doctest::Approx(0.5).epsilon(1e-10));
    const auto [eta_oracle, val_oracle] = grid_search_step_size({Complex(1, 1)}, 1.0, 100000);
    CHECK(std::abs(r.eta_best - eta_oracle) <= 1.0 / 100000);
  }
  SUBCASE("eigenvalue with nonpositive real part rejected") {
    CHECK_THROWS_AS(best_step_size(Spectrum::from_values({Complex(-1, 0.5)})), HypothesisError);
    CHECK_THROWS_AS(best_step_size(Spectrum::from_values({Complex(0, 1)})), HypothesisError);
  }
}

TEST_CASE("best step size bound chain on seeded spectra") {
  auto gen = testutil::rng(911);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 1 + static_cast<std::size_t>(trial % 8);
    const std::vector<Complex> eigs = random_right_half_spectrum(gen, m);
    const StepSizeReport r = best_step_size(Spectrum::from_values(eigs));
    const double rho_sq = r.rho_best * r.rho_best;
    CHECK(r.eta_lower <= r.eta_best + 1e-8);
    CHECK(r.eta_best <= r.eta_upper + 1e-8);
    CHECK(r.lower_bound_rho_sq <= rho_sq + 1e-8);
    CHECK(rho_sq <= r.upper_bound_rho_sq + 1e-10);
    CHECK(r.delta_term > 0.0);
    CHECK(r.rho_best < 1.0);
  }
}

TEST_CASE("momentum eigenvalues") {
  SUBCASE("zero momentum degenerates to the gradient eigenvalue") {
    const MomentumEigs me = momentum_eigenvalues(Complex(0.5, 0.25), 0.8, 0.0);
    CHECK(std::abs(me.mu_plus - (1.0 - 0.8 * Complex(0.5, 0.25))) <= 1e-14);
    CHECK(std::abs(me.mu_minus) <= 1e-14);
    CHECK(me.rho == doctest::Approx(std::norm(1.0 - 0.8 * Complex(0.5, 0.25))));
  }
  SUBCASE("mixed-game parameters against the companion block oracle") {
    const Complex lambda(0.8, 0.6);
    const double eta = 1.55, beta = -0.25;
    const MomentumEigs me = momentum_eigenvalues(lambda, eta, beta);

    MatrixC block(2, 2);
    block(0, 0) = 1.0 - eta * lambda + beta;
    block(0, 1) = Complex(-beta, 0.0);
    block(1, 0) = Complex(1.0, 0.0);
    const Spectrum oracle = eigenvalues(block);
    CHECK(multiset_close({me.mu_plus, me.mu_minus}, oracle.eigenvalues, 1e-10));
  }
  SUBCASE("first-order expansion at small momentum") {
    const double beta = 1e-4;
    auto gen = testutil::rng(300);
    for (int trial = 0; trial < 50; ++trial) {
      Complex lambda(testutil::uniform(gen, 0.5, 2.0), 0.0);
      lambda.imag(testutil::uniform(gen, -lambda.real(), lambda.real()));
      double eta = testutil::uniform(gen, 0.1, 0.5);
      const Complex g = 1.0 - eta * lambda;
      if (std::abs(g) < 0.5) continue;
      const MomentumEigs me = momentum_eigenvalues(lambda, eta, beta);
      const Complex mu_plus_taylor = g - beta * (eta * lambda) / g;
      const Complex mu_minus_taylor = beta / g;
      CHECK(std::abs(me.mu_plus - mu_plus_taylor) <= 1e-6);
      CHECK(std::abs(me.mu_minus - mu_minus_taylor) <= 1e-6);
    }
  }
  SUBCASE("root sum and product identities on seeded triples") {
    auto gen = testutil::rng(301);
    for (int trial = 0; trial < 1000; ++trial) {
      const Complex lambda(testutil::uniform(gen, -2.0, 2.0), testutil::uniform(gen, -2.0, 2.0));
      const double eta = testutil::uniform(gen, 0.0, 2.0);
      const double beta = testutil::uniform(gen, -1.0, 1.0);
      const MomentumEigs me = momentum_eigenvalues(lambda, eta, beta);
      const Complex sum_expected = 1.0 - eta * lambda + beta;
      if (std::abs(sum_expected) > 1e-14) {
        CHECK(std::abs(me.mu_plus + me.mu_minus - sum_expected) <= 1e-10);
      }
      CHECK(std::abs(me.mu_plus * me.mu_minus - Complex(beta, 0.0)) <= 1e-10);
      CHECK(me.rho == std::max(std::norm(me.mu_plus), std::norm(me.mu_minus)));
    }
  }
  SUBCASE("square-root branch convention") {
    auto gen = testutil::rng(302);
    for (int trial = 0; trial < 200; ++trial) {
      const Complex lambda(testutil::uniform(gen, -2.0, 2.0), testutil::uniform(gen, -2.0, 2.0));
      const double eta = testutil::uniform(gen, 0.0, 2.0);
      const double beta = testutil::uniform(gen, -1.0, 1.0);
      const MomentumEigs me = momentum_eigenvalues(lambda, eta, beta);
      const Complex a = 1.0 - eta * lambda + beta;
      if (std::abs(a) <= 1e-14) continue;
      // mu_plus - mu_minus = a * sqrt(d), so Re((mu_plus - mu_minus) conj(a))
      // = |a|^2 Re(sqrt(d)) must be nonnegative.
      const Complex diff = me.mu_plus - me.mu_minus;
      CHECK(diff.real() * a.real() + diff.imag() * a.imag() >= -1e-12);
    }
    // negative real discriminant: the root is +i sqrt(-d) exactly
    const MomentumEigs me = momentum_eigenvalues(Complex(1.0, 0.0), 0.5, 0.2);
    const Complex a = 1.0 - 0.5 + 0.2;
    const Complex d = 1.0 - 4.0 * 0.2 / (a * a);
    REQUIRE(d.imag() == 0.0);
    REQUIRE(d.real() < 0.0);
    const Complex root = (me.mu_plus * 2.0 / a) - 1.0;
    CHECK(root.real() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(root.imag() == doctest::Approx(std::sqrt(-d.real())).epsilon(1e-12));
  }
  SUBCASE("degenerate pencil handled by continuity") {
    // eta*lambda = 1 + beta makes the linear coefficient vanish
    const double beta = -0.36;
    const Complex lambda(1.0, 0.0);
    const double eta = 1.0 + beta;
    const MomentumEigs me = momentum_eigenvalues(lambda, eta / lambda.real(), beta);
    CHECK(std::abs(me.mu_plus - Complex(0.6, 0.0)) <= 1e-12);
    CHECK(std::abs(me.mu_minus - Complex(-0.6, 0.0)) <= 1e-12);
    CHECK(me.rho == doctest::Approx(0.36));
  }
}

TEST_CASE("optimizing the step size with fixed negative momentum beats the plain optimum") {
  // The mixed scalar game with alpha = 0.4 has Jacobian eigenvalues
  // 0.8 +- 0.6i; the plain method's optimized factor is sin(arg) = 0.6.
  const Complex lambda(0.8, 0.6);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 2000; ++i) {
    const double eta = 2.0 * i / 2000;
    best = std::min(best, std::sqrt(momentum_eigenvalues(lambda, eta, -0.25).rho));
  }
  CHECK(best < 0.6);
}

TEST_CASE("momentum benefit interval") {
  SUBCASE("unit diagonal eigenvalue") {
    const BenefitInterval iv = benefit_interval(Complex(1, 1));
    const double root2 = std::sqrt(2.0);
    CHECK(iv.lower == doctest::Approx((root2 - 1.0) / root2).epsilon(1e-12));
    CHECK(iv.upper == doctest::Approx((root2 + 1.0) / root2).epsilon(1e-12));
    CHECK_FALSE(iv.empty);
  }
  SUBCASE("real eigenvalue collapses") {
    const BenefitInterval iv = benefit_interval(Complex(3, 0));
    CHECK(iv.empty);
    CHECK_FALSE(iv.contains(0.1));
  }
  SUBCASE("wide-argument eigenvalues contain the optimal step-size bracket") {
    // |arg| = pi/3 >= pi/4
    const Complex lambda = 2.0 * Complex(std::cos(M_PI / 3.0), std::sin(M_PI / 3.0));
    const BenefitInterval iv = benefit_interval(lambda);
    const double vertex = lambda.real() / std::norm(lambda);
    CHECK(iv.lower < vertex);
    CHECK(2.0 * vertex < iv.upper);
  }
  SUBCASE("hypothesis violation") {
    CHECK_THROWS_AS(benefit_interval(Complex(-0.5, 1.0)), HypothesisError);
  }
}

TEST_CASE("derivative of the squared factor at zero momentum") {
  SUBCASE("fixture at the per-eigenvalue vertex") {
    const double d = rho_derivative_at_zero(Complex(1, 1), 0.5);
    CHECK(d == doctest::Approx(1.0).epsilon(1e-12));  // 2 Re(l) Re(1/l)
  }
  SUBCASE("real eigenvalue wants positive momentum") {
    const double d = rho_derivative_at_zero(Complex(1, 0), 0.5);
    CHECK(d == doctest::Approx(-1.0).epsilon(1e-12));
  }
  SUBCASE("degenerate point rejected") {
    CHECK_THROWS_AS(rho_derivative_at_zero(Complex(1, 0), 1.0), ArgumentError);
  }
  SUBCASE("sign equals interval membership and finite differences agree") {
    auto gen = testutil::rng(404);
    int checked = 0;
    while (checked < 400) {
      const Complex lambda(testutil::uniform(gen, 0.05, 2.0), testutil::uniform(gen, -2.0, 2.0));
      const double eta = testutil::uniform(gen, 0.01, 2.5);
      if (std::abs(1.0 - eta * lambda) < 0.05) continue;
      ++checked;
      const double closed = rho_derivative_at_zero(lambda, eta);
      const double h = 1e-6;
      const double fd = (momentum_eigenvalues(lambda, eta, h).rho -
                         momentum_eigenvalues(lambda, eta, -h).rho) /
                        (2.0 * h);
      CHECK(std::abs(closed - fd) <= 1e-3);
      CHECK((closed > 0.0) == benefit_interval(lambda).contains(eta));
    }
  }
}

TEST_CASE("characteristic quartics") {
  SUBCASE("momentum-free simultaneous coefficients") {
    const Polynomial p = char_poly_sim(1.0, 1.0, 1.0, 0.0, 0.0);
    const std::vector<Complex>& c = p.coefficients();
    REQUIRE(c.size() == 5);
    CHECK(c[0] == Complex(0, 0));
    CHECK(c[1] == Complex(0, 0));
    CHECK(c[2] == Complex(2, 0));
    CHECK(c[3] == Complex(-2, 0));
    CHECK(c[4] == Complex(1, 0));
    const Spectrum roots = poly_roots(p);
    CHECK(roots.spectral_radius == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
  }
  SUBCASE("decoupled dynamics with vanishing step-size product") {
    const Polynomial p = char_poly_sim(2.0, 0.0, 0.7, -0.3, 0.4);
    const Spectrum roots = poly_roots(p);
    CHECK(multiset_close(roots.eigenvalues,
                         {Complex(1, 0), Complex(1, 0), Complex(-0.3, 0), Complex(0.4, 0)},
                         1e-6));
  }
  SUBCASE("momentum-free alternating roots stay on the unit circle") {
    for (double e2l : {0.1, 1.0, 3.9, 4.0}) {
      const Polynomial p = char_poly_alt(e2l, 1.0, 1.0, 0.0, 0.0);
      const Spectrum roots = poly_roots(p);
      for (const Complex& z : roots.eigenvalues) {
        if (std::abs(z) < 0.5) continue;  // augmentation zeros
        CHECK(std::abs(std::abs(z) - 1.0) <= 1e-10);
      }
      CHECK(roots.spectral_radius == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
  SUBCASE("alternating with the half negative momentum contracts") {
    // Nonzero roots solve x^3 - x^2/2 + 1/2 = 0. The single real root r is
    // negative and the conjugate pair satisfies r |z|^2 = -1/2, so the exact
    // radius is sqrt(-1/(2r)); bisection gives r independent of the solver.
    double lo = -0.7, hi = -0.6;
    const auto cubic = [](double x) { return x * x * x - 0.5 * x * x + 0.5; };
    REQUIRE(cubic(lo) < 0.0);
    REQUIRE(cubic(hi) > 0.0);
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (cubic(mid) < 0.0 ? lo : hi) = mid;
    }
    const double real_root = 0.5 * (lo + hi);
    const double oracle_radius = std::sqrt(-0.5 / real_root);

    const Polynomial p = char_poly_alt(1.0, 1.0, 1.0, -0.5, 0.0);
    const Spectrum roots = poly_roots(p);
    CHECK(roots.spectral_radius == doctest::Approx(oracle_radius).epsilon(1e-10));
    CHECK(roots.spectral_radius < 1.0);
    // At this boundary step-size the radius squared sits a little above the
    // 1 - eta^2 lambda / 4 envelope.
    CHECK(roots.spectral_radius * roots.spectral_radius ==
          doctest::Approx(0.76068967).epsilon(1e-6));
  }
  SUBCASE("quartic roots match the exact operator spectrum for the scalar game") {
    const Game game = BilinearGame(MatrixR::from_rows({{1.0}}));
    auto gen = testutil::rng(500);
    for (int trial = 0; trial < 10; ++trial) {
      const double eta1 = testutil::uniform(gen, 0.05, 1.2);
      const double eta2 = testutil::uniform(gen, 0.05, 1.2);
      const double beta1 = testutil::uniform(gen, -0.9, 0.9);
      const double beta2 = testutil::uniform(gen, -0.9, 0.9);
      for (const Scheme scheme : {Scheme::simultaneous, Scheme::alternating}) {
        const MethodConfig config{scheme, eta1, eta2, beta1, beta2};
        const Spectrum op_spec = eigenvalues(exact_linear_operator(game, config));
        const Polynomial p = scheme == Scheme::simultaneous
                                 ? char_poly_sim(1.0, eta1, eta2, beta1, beta2)
                                 : char_poly_alt(1.0, eta1, eta2, beta1, beta2);
        const Spectrum root_spec = poly_roots(p);
        CHECK(multiset_close(op_spec.eigenvalues, root_spec.eigenvalues, 1e-8));
      }
    }
  }
  SUBCASE("invalid coupling eigenvalue rejected") {
    CHECK_THROWS_AS(char_poly_sim(0.0, 1.0, 1.0, 0.0, 0.0), ArgumentError);
    CHECK_THROWS_AS(char_poly_alt(-1.0, 1.0, 1.0, 0.0, 0.0), ArgumentError);
  }
}

TEST_CASE("grid structure of the quartic root magnitudes") {
  // simultaneous: never below 1 on eta in (0,1], beta in [-1,0]
  for (int ie = 1; ie <= 20; ++ie) {
    for (int ib = 0; ib <= 20; ++ib) {
      const double eta = 0.05 * ie;
      const double beta = -1.0 + 0.05 * ib;
      const Spectrum roots = poly_roots(char_poly_sim(1.0, eta, eta, beta, beta));
      CHECK(roots.spectral_radius >= 1.0 - 1e-10);
    }
  }
  // alternating: contraction strictly inside the wedge, expansion above zero
  const Spectrum inside = poly_roots(char_poly_alt(1.0, 1.0, 1.0, -0.25, -0.25));
  CHECK(inside.spectral_radius < 1.0);
  const Spectrum above = poly_roots(char_poly_alt(1.0, 1.0, 1.0, 0.25, 0.25));
  CHECK(above.spectral_radius > 1.0);
}

TEST_CASE("divergence growth factors for the simultaneous method") {
  CHECK(sim_divergence_bound(0.0, 0.5, 1.0) == doctest::Approx(1.25));
  CHECK(sim_divergence_bound(0.1, 0.0, 1.0) == doctest::Approx(1.21));
  CHECK(sim_divergence_bound(-1.0 / 16.0, 0.5, 1.0) == doctest::Approx(1.0 + 1.0 / 16.0));
  CHECK_THROWS_AS(sim_divergence_bound(-0.2, 0.5, 1.0), ArgumentError);
  CHECK_THROWS_AS(sim_divergence_bound(0.0, 0.5, 0.0), ArgumentError);
}

TEST_CASE("convergence rate of the alternating method with half negative momentum") {
  CHECK(alt_convergence_rate(1.0, 1.0, 1.0) == doctest::Approx(0.75));
  CHECK(alt_convergence_rate(0.5, 1.0, 2.0) == doctest::Approx(15.0 / 16.0));
  CHECK_THROWS_AS(alt_convergence_rate(0.6, 1.0, 2.0), HypothesisError);
  CHECK_THROWS_AS(alt_convergence_rate(0.5, 0.0, 2.0), ArgumentError);

  SUBCASE("measured slope of a seeded four-dimensional game") {
    auto gen = testutil::rng(621);
    const MatrixR a = testutil::random_matrix(gen, 4, 4, -1.0, 1.0);
    const SvdResult dec = svd(a);
    const double sigma_max = dec.sigma_max();
    const double sigma_min = dec.sigma_min_positive();
    REQUIRE(sigma_min > 0.0);
    const double eta = 1.0 / sigma_max;
    const double rate = alt_convergence_rate(eta, sigma_min, sigma_max);

    const Game game = BilinearGame(a);
    const MethodConfig config{Scheme::alternating, eta, eta, -0.5, 0.0};
    const JointPoint init{testutil::random_vector(gen, 4), testutil::random_vector(gen, 4)};
    const Trajectory traj = run(game, config, init, 2000, 2000);
    REQUIRE(traj.deltas.size() == 2001);

    // least-squares slope of log Delta_t over steps 200..2000
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t t = 200; t <= 2000; ++t) {
      const double y = std::log(traj.deltas[t]);
      const double x = static_cast<double>(t);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++n;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope <= std::log(rate) + 1e-2);
  }
}

TEST_CASE("optimal momentum grid search") {
  const std::vector<double> eta_grid = local_eta_grid();
  const std::vector<double> beta_grid = local_beta_grid();

  SUBCASE("well-conditioned cooperative game wants no momentum") {
    const OptimalMomentum opt =
        optimal_momentum(KappaAlphaGame::conditioned_pair(1.0, 1.0), eta_grid, beta_grid);
    CHECK(std::abs(opt.beta) <= 0.01 + 1e-9);
    CHECK(opt.rho <= 1e-6);
  }
  SUBCASE("adversarial game wants negative momentum") {
    const OptimalMomentum opt =
        optimal_momentum(KappaAlphaGame::conditioned_pair(0.1, 10.0), eta_grid, beta_grid);
    CHECK(opt.beta < 0.0);
    CHECK(opt.rho < 1.0);
  }
  SUBCASE("ill-conditioned cooperative game recovers the classical momentum") {
    const double kappa = 100.0;
    const OptimalMomentum opt =
        optimal_momentum(KappaAlphaGame::conditioned_pair(1.0, kappa), eta_grid, beta_grid);
    const double classical = std::pow((std::sqrt(kappa) - 1.0) / (std::sqrt(kappa) + 1.0), 2);
    CHECK(std::abs(opt.beta - classical) <= 0.01 + 1e-9);
  }
  SUBCASE("empty grids rejected") {
    CHECK_THROWS_AS(optimal_momentum(KappaAlphaGame::conditioned_pair(0.5, 2.0), {}, beta_grid),
                    ArgumentError);
  }
}

TEST_CASE("radius surface is what the brute-force envelope says") {
  // spot check that optimal_momentum's objective matches a direct evaluation
  const KappaAlphaGame game = KappaAlphaGame::conditioned_pair(0.4, 5.0);
  std::vector<Complex> eigs;
  for (double d : game.d_diag()) eigs.emplace_back(2.0 * game.alpha() * d, 1.0 - game.alpha());
  const double direct = std::sqrt(envelope_radius_sq(eigs, 0.7, -0.2));
  const OptimalMomentum opt = optimal_momentum(game, {0.7}, {-0.2});
  CHECK(opt.rho == doctest::Approx(direct).epsilon(1e-12));
}
