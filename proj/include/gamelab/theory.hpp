#pragma once

#include <vector>

#include "gamelab/games.hpp"
#include "gamelab/spectral.hpp"

namespace gamelab {

/// Exact minimizer of the plain gradient map's spectral radius over the
/// step-size, together with the analytic brackets that sandwich it.
///
/// With eigenvalues sorted so 0 < Re(1/lambda_1) <= ... <= Re(1/lambda_m):
///   eta_lower = Re(1/lambda_1) <= eta_best <= 2 Re(1/lambda_1) = eta_upper
///   lower_bound_rho_sq = max_k sin^2(arg lambda_k)
///   upper_bound_rho_sq = 1 - Re(1/lambda_1) * delta_term
///   delta_term = min_k |lambda_k|^2 (2 Re(1/lambda_k) - Re(1/lambda_1)).
struct StepSizeReport {
  double eta_best = 0.0;
  double rho_best = 0.0;  // in [0, 1)
  double lower_bound_rho_sq = 0.0;
  double upper_bound_rho_sq = 0.0;
  double delta_term = 0.0;
  double eta_lower = 0.0;
  double eta_upper = 0.0;
};

/// Minimizes eta -> max_k |1 - eta lambda_k|^2 exactly, by enumerating every
/// per-eigenvalue vertex and every pairwise crossing of the piecewise
/// quadratic envelope. All eigenvalues must have positive real part.
StepSizeReport best_step_size(const Spectrum& spectrum);

/// Both eigenvalues of the heavy-ball update block for one Jacobian
/// eigenvalue: the roots of x^2 - (1 - eta lambda + beta) x + beta.
///
/// discriminant is 1 - 4 beta / (1 - eta lambda + beta)^2; its square root is
/// taken with positive real part, and as +i sqrt(-d) for negative real d.
/// When 1 - eta lambda + beta vanishes the quotient form is undefined and the
/// roots are taken directly as +-sqrt(-beta) (discriminant reported as 0).
/// rho is the larger squared magnitude of the pair.
struct MomentumEigs {
  Complex lambda;
  double eta = 0.0;
  double beta = 0.0;
  Complex discriminant;
  Complex mu_plus;
  Complex mu_minus;
  double rho = 0.0;  // max(|mu_plus|^2, |mu_minus|^2)
};

MomentumEigs momentum_eigenvalues(Complex lambda, double eta, double beta);

/// Open step-size interval on which an infinitesimal negative momentum
/// strictly improves the convergence factor of the eigenvalue lambda:
///   ( (|l| - |Im l|) / (|l| Re l),  (|l| + |Im l|) / (|l| Re l) ).
/// Collapses to empty for real lambda. Requires Re(lambda) > 0.
struct BenefitInterval {
  Complex lambda;
  double lower = 0.0;
  double upper = 0.0;
  bool empty = false;

  bool contains(double eta) const { return !empty && lower < eta && eta < upper; }
};

BenefitInterval benefit_interval(Complex lambda);

/// Derivative at beta = 0 of the squared convergence factor of one
/// eigenvalue:  2 (2 eta^2 |l|^2 - eta Re(l) (1 + eta^2 |l|^2)) / |1 - eta l|^2.
/// Positive exactly when eta lies inside benefit_interval(lambda).
double rho_derivative_at_zero(Complex lambda, double eta);

/// Characteristic quartic of the simultaneous update block for one positive
/// eigenvalue lambda of A^T A:
///   (x-1)^2 (x-beta1)(x-beta2) + eta1 eta2 lambda x^2, expanded.
Polynomial char_poly_sim(double lambda_ata, double eta1, double eta2, double beta1,
                         double beta2);

/// Characteristic quartic of the alternating update block:
///   (x-1)^2 (x-beta1)(x-beta2) + eta1 eta2 lambda x^3, expanded.
Polynomial char_poly_alt(double lambda_ata, double eta1, double eta2, double beta1,
                         double beta2);

/// Guaranteed per-step growth factor of the squared distance for simultaneous
/// bilinear updates with beta1 = beta2 = beta:
///   (1+beta)^2 + eta^2 sigma_max^2  for beta >= 0,
///   1 - beta                        for -1/16 <= beta < 0.
/// Values below -1/16 are outside the guaranteed range and rejected.
double sim_divergence_bound(double beta, double eta, double sigma_max);

/// Guaranteed geometric factor on the squared distance for alternating
/// updates with beta1 = -1/2, beta2 = 0 and eta <= 1/sigma_max:
///   max(1/2, 1 - eta^2 sigma_min^2 / 4).
double alt_convergence_rate(double eta, double sigma_min, double sigma_max);

struct OptimalMomentum {
  double beta = 0.0;
  double eta = 0.0;
  double rho = 0.0;  // minimized spectral radius (magnitude, not squared)
};

/// Exhaustive (eta, beta) grid search minimizing the spectral radius of the
/// heavy-ball update over all Jacobian eigenvalues 2 alpha d_jj +- (1-alpha) i
/// of a kappa-alpha game. Ties prefer the smaller |beta|, then the smaller
/// eta; the scan order is fixed so results are deterministic.
OptimalMomentum optimal_momentum(const KappaAlphaGame& game,
                                 const std::vector<double>& eta_grid,
                                 const std::vector<double>& beta_grid);

}  // namespace gamelab
