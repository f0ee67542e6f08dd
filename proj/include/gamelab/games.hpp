#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "gamelab/spectral.hpp"

namespace gamelab {

/// Joint state of the two players, stacked as (theta, phi).
struct JointPoint {
  std::vector<double> theta;
  std::vector<double> phi;

  std::size_t theta_dim() const { return theta.size(); }
  std::size_t phi_dim() const { return phi.size(); }
};

/// Zero-sum game  min_theta max_phi  theta^T A phi + theta^T b + c^T phi.
///
/// theta has the row dimension of A and phi the column dimension. A stationary
/// point exists iff b lies in the column span of A and c in the column span of
/// A^T; the flag is computed once at construction from least-squares residuals.
class BilinearGame {
 public:
  explicit BilinearGame(MatrixR a, std::vector<double> b = {}, std::vector<double> c = {});

  const MatrixR& a() const { return a_; }
  const std::vector<double>& b() const { return b_; }
  const std::vector<double>& c() const { return c_; }
  std::size_t theta_dim() const { return a_.rows(); }
  std::size_t phi_dim() const { return a_.cols(); }
  bool has_equilibrium() const { return has_equilibrium_; }

 private:
  MatrixR a_;
  std::vector<double> b_;
  std::vector<double> c_;
  bool has_equilibrium_ = false;
};

/// Interpolation between a separable quadratic minimization (alpha = 1) and a
/// purely adversarial bilinear coupling (alpha = 0):
///   min_theta max_phi  alpha |theta|^2 + (1-alpha) theta^T A phi - alpha |phi|^2.
class AlphaGame {
 public:
  AlphaGame(double alpha, MatrixR a);

  double alpha() const { return alpha_; }
  const MatrixR& a() const { return a_; }
  std::size_t theta_dim() const { return a_.rows(); }
  std::size_t phi_dim() const { return a_.cols(); }

 private:
  double alpha_ = 0.0;
  MatrixR a_;
};

/// Conditioned variant of the alpha game with identity coupling and a diagonal
/// positive-definite quadratic term D:
///   min_theta max_phi  alpha |D^(1/2) theta|^2 + (1-alpha) theta^T phi
///                      - alpha |D^(1/2) phi|^2.
/// Diagonal entries must be strictly positive, nondecreasing, and sum to n.
/// kappa is the condition number max(d) / min(d).
class KappaAlphaGame {
 public:
  KappaAlphaGame(double alpha, std::vector<double> d_diag);

  /// The n = 2 game used throughout: diagonal proportional to (1/kappa, 1),
  /// rescaled so the diagonal sums to 2.
  static KappaAlphaGame conditioned_pair(double alpha, double kappa);

  double alpha() const { return alpha_; }
  const std::vector<double>& d_diag() const { return d_diag_; }
  double kappa() const { return d_diag_.back() / d_diag_.front(); }
  std::size_t n() const { return d_diag_.size(); }
  std::size_t theta_dim() const { return d_diag_.size(); }
  std::size_t phi_dim() const { return d_diag_.size(); }

 private:
  double alpha_ = 0.0;
  std::vector<double> d_diag_;
};

using Game = std::variant<BilinearGame, AlphaGame, KappaAlphaGame>;

std::size_t theta_dim(const Game& game);
std::size_t phi_dim(const Game& game);
std::string game_description(const Game& game);

/// Stacked gradient field (theta block, phi block). Its flow descends the
/// first player's objective in theta and the second player's in phi; the
/// Jacobian of this field is constant for all three families.
JointPoint vector_field(const Game& game, const JointPoint& point);

/// The (theta_dim + phi_dim) square Jacobian of vector_field. All families
/// have a point-independent Jacobian; the overload taking a point only
/// validates its dimensions.
MatrixR jacobian(const Game& game);
MatrixR jacobian(const Game& game, const JointPoint& point);

enum class GameClass { purely_adversarial, purely_cooperative, mixed };

/// Classification by the Jacobian spectrum: purely adversarial when every
/// eigenvalue is (numerically) imaginary, purely cooperative when every
/// eigenvalue is real with positive real part, mixed otherwise.
GameClass classify_game(const Spectrum& spectrum);

std::string to_string(GameClass c);

/// Stationary point of the gradient field. Minimum-norm solution for the
/// bilinear family (throws NoEquilibriumError when none exists); the origin
/// for the alpha and kappa-alpha families.
JointPoint equilibrium(const Game& game);

/// Builds a game from its JSON description:
///   {"family":"bilinear","a":[[...],...],"b":[...],"c":[...]}   (b, c optional)
///   {"family":"alpha","alpha":x,"a":[[...],...]}
///   {"family":"kappa_alpha","alpha":x,"d_diag":[...]}
/// Validation errors name the JSON pointer of the offending field.
Game game_from_json_text(const std::string& text);

}  // namespace gamelab
