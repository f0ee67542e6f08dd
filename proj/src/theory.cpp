#include "gamelab/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gamelab {

namespace {

constexpr double kDegenerateTol = 1e-14;

void require_finite(Complex z, const char* what) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw ArgumentError(std::string(what) + ": non-finite complex input");
}

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw ArgumentError(std::string(what) + ": non-finite input");
}

/// Square root with nonnegative real part; negative real inputs map to
/// +i sqrt(-x) regardless of the sign of their zero imaginary part.
Complex principal_sqrt(Complex z) {
  if (z.imag() == 0.0 && z.real() < 0.0) return Complex(0.0, std::sqrt(-z.real()));
  Complex s = std::sqrt(z);
  if (s.real() < 0.0) s = -s;
  return s;
}

}  // namespace

StepSizeReport best_step_size(const Spectrum& spectrum) {
  const auto& eigs = spectrum.eigenvalues;
  if (eigs.empty()) throw ArgumentError("best_step_size: empty spectrum");
  for (const Complex& ev : eigs) {
    require_finite(ev, "best_step_size");
    if (!(ev.real() > 0.0))
      throw HypothesisError("best_step_size: every eigenvalue must have positive real part");
  }

  const std::size_t m = eigs.size();
  std::vector<double> mag_sq(m), vertex(m);
  for (std::size_t k = 0; k < m; ++k) {
    mag_sq[k] = std::norm(eigs[k]);
    vertex[k] = eigs[k].real() / mag_sq[k];  // Re(1/lambda_k)
  }

  // lambda_1: smallest Re(1/lambda), ties broken by larger magnitude.
  std::size_t first = 0;
  for (std::size_t k = 1; k < m; ++k) {
    if (vertex[k] < vertex[first] ||
        (vertex[k] == vertex[first] && mag_sq[k] > mag_sq[first]))
      first = k;
  }
  const double eta1 = vertex[first];

  const auto envelope = [&](double eta) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < m; ++k) {
      const double f = 1.0 - 2.0 * eta * eigs[k].real() + eta * eta * mag_sq[k];
      worst = std::max(worst, f);
    }
    return worst;
  };

  // The envelope is a max of strictly convex parabolas, so its minimizer is a
  // vertex of the active parabola or a crossing of two parabolas.
  std::vector<double> candidates(vertex);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = j + 1; k < m; ++k) {
      const double denom = mag_sq[j] - mag_sq[k];
      if (std::abs(denom) <= 1e-14 * (mag_sq[j] + mag_sq[k])) continue;
      const double crossing = 2.0 * (eigs[j].real() - eigs[k].real()) / denom;
      if (crossing > 0.0) candidates.push_back(crossing);
    }
  }
  std::sort(candidates.begin(), candidates.end());

  double best_eta = candidates.front();
  double best_val = envelope(best_eta);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double val = envelope(candidates[i]);
    if (val < best_val) {
      best_val = val;
      best_eta = candidates[i];
    }
  }

  StepSizeReport report;
  report.eta_best = best_eta;
  report.rho_best = std::sqrt(std::max(best_val, 0.0));
  report.eta_lower = eta1;
  report.eta_upper = 2.0 * eta1;

  double delta = std::numeric_limits<double>::infinity();
  double worst_sin_sq = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    delta = std::min(delta, mag_sq[k] * (2.0 * vertex[k] - eta1));
    worst_sin_sq = std::max(worst_sin_sq, eigs[k].imag() * eigs[k].imag() / mag_sq[k]);
  }
  report.delta_term = delta;
  report.lower_bound_rho_sq = worst_sin_sq;
  report.upper_bound_rho_sq = 1.0 - eta1 * delta;
  return report;
}

MomentumEigs momentum_eigenvalues(Complex lambda, double eta, double beta) {
  require_finite(lambda, "momentum_eigenvalues");
  require_finite(eta, "momentum_eigenvalues");
  require_finite(beta, "momentum_eigenvalues");

  MomentumEigs out;
  out.lambda = lambda;
  out.eta = eta;
  out.beta = beta;

  const Complex a = 1.0 - eta * lambda + beta;
  if (std::abs(a) <= kDegenerateTol) {
    // Roots of x^2 + beta, by continuity of the root sum/product.
    const Complex s = principal_sqrt(Complex(-beta, 0.0));
    out.discriminant = Complex(0.0, 0.0);
    out.mu_plus = s;
    out.mu_minus = -s;
  } else {
    out.discriminant = 1.0 - 4.0 * beta / (a * a);
    const Complex root = principal_sqrt(out.discriminant);
    out.mu_plus = a * (1.0 + root) / 2.0;
    out.mu_minus = a * (1.0 - root) / 2.0;
  }
  out.rho = std::max(std::norm(out.mu_plus), std::norm(out.mu_minus));
  return out;
}

BenefitInterval benefit_interval(Complex lambda) {
  require_finite(lambda, "benefit_interval");
  if (!(lambda.real() > 0.0))
    throw HypothesisError("benefit_interval: Re(lambda) must be positive");

  const double mag = std::abs(lambda);
  const double im = std::abs(lambda.imag());
  BenefitInterval out;
  out.lambda = lambda;
  out.lower = (mag - im) / (mag * lambda.real());
  out.upper = (mag + im) / (mag * lambda.real());
  out.empty = lambda.imag() == 0.0;
  return out;
}

double rho_derivative_at_zero(Complex lambda, double eta) {
  require_finite(lambda, "rho_derivative_at_zero");
  require_finite(eta, "rho_derivative_at_zero");
  if (!(lambda.real() > 0.0))
    throw HypothesisError("rho_derivative_at_zero: Re(lambda) must be positive");
  const Complex g = 1.0 - eta * lambda;
  if (std::abs(g) <= kDegenerateTol)
    throw ArgumentError("rho_derivative_at_zero: 1 - eta*lambda vanishes");
  const double mag_sq = std::norm(lambda);
  return 2.0 * (2.0 * eta * eta * mag_sq - eta * lambda.real() * (1.0 + eta * eta * mag_sq)) /
         std::norm(g);
}

namespace {

void check_quartic_inputs(double lambda_ata, double eta1, double eta2, double beta1,
                          double beta2, const char* what) {
  require_finite(lambda_ata, what);
  require_finite(eta1, what);
  require_finite(eta2, what);
  require_finite(beta1, what);
  require_finite(beta2, what);
  if (!(lambda_ata > 0.0))
    throw ArgumentError(std::string(what) + ": lambda must be a positive eigenvalue of A^T A");
}

}  // namespace

Polynomial char_poly_sim(double lambda_ata, double eta1, double eta2, double beta1,
                         double beta2) {
  check_quartic_inputs(lambda_ata, eta1, eta2, beta1, beta2, "char_poly_sim");
  const double s = beta1 + beta2;
  const double q = beta1 * beta2;
  const double e = eta1 * eta2 * lambda_ata;
  return Polynomial::from_real({q, -(2.0 * q + s), q + 2.0 * s + 1.0 + e, -(s + 2.0), 1.0});
}

Polynomial char_poly_alt(double lambda_ata, double eta1, double eta2, double beta1,
                         double beta2) {
  check_quartic_inputs(lambda_ata, eta1, eta2, beta1, beta2, "char_poly_alt");
  const double s = beta1 + beta2;
  const double q = beta1 * beta2;
  const double e = eta1 * eta2 * lambda_ata;
  return Polynomial::from_real({q, -(2.0 * q + s), q + 2.0 * s + 1.0, -(s + 2.0) + e, 1.0});
}

double sim_divergence_bound(double beta, double eta, double sigma_max) {
  require_finite(beta, "sim_divergence_bound");
  require_finite(eta, "sim_divergence_bound");
  require_finite(sigma_max, "sim_divergence_bound");
  if (!(sigma_max > 0.0)) throw ArgumentError("sim_divergence_bound: sigma_max must be positive");
  if (!(eta >= 0.0)) throw ArgumentError("sim_divergence_bound: eta must be nonnegative");
  if (beta < -1.0 / 16.0)
    throw ArgumentError("sim_divergence_bound: no guaranteed factor for beta < -1/16");
  if (beta >= 0.0) return (1.0 + beta) * (1.0 + beta) + eta * eta * sigma_max * sigma_max;
  return 1.0 - beta;
}

double alt_convergence_rate(double eta, double sigma_min, double sigma_max) {
  require_finite(eta, "alt_convergence_rate");
  require_finite(sigma_min, "alt_convergence_rate");
  require_finite(sigma_max, "alt_convergence_rate");
  if (!(sigma_min > 0.0) || !(sigma_max >= sigma_min))
    throw ArgumentError("alt_convergence_rate: need 0 < sigma_min <= sigma_max");
  if (!(eta > 0.0) || eta * sigma_max > 1.0 + 1e-12)
    throw HypothesisError("alt_convergence_rate: eta must lie in (0, 1/sigma_max]");
  return std::max(0.5, 1.0 - eta * eta * sigma_min * sigma_min / 4.0);
}

OptimalMomentum optimal_momentum(const KappaAlphaGame& game,
                                 const std::vector<double>& eta_grid,
                                 const std::vector<double>& beta_grid) {
  if (eta_grid.empty() || beta_grid.empty())
    throw ArgumentError("optimal_momentum: grids must be nonempty");

  // Conjugate eigenvalue pairs produce mirror-image root pairs, so scanning
  // the +i copies suffices for magnitudes.
  std::vector<Complex> eigs;
  eigs.reserve(game.n());
  for (double d : game.d_diag())
    eigs.emplace_back(2.0 * game.alpha() * d, 1.0 - game.alpha());

  bool have_best = false;
  OptimalMomentum best;
  for (double beta : beta_grid) {
    for (double eta : eta_grid) {
      double radius_sq = 0.0;
      for (const Complex& lambda : eigs)
        radius_sq = std::max(radius_sq, momentum_eigenvalues(lambda, eta, beta).rho);
      const double radius = std::sqrt(radius_sq);
      const bool better =
          !have_best || radius < best.rho ||
          (radius == best.rho &&
           (std::abs(beta) < std::abs(best.beta) ||
            (std::abs(beta) == std::abs(best.beta) && eta < best.eta)));
      if (better) {
        best = OptimalMomentum{beta, eta, radius};
        have_best = true;
      }
    }
  }
  return best;
}

}  // namespace gamelab
