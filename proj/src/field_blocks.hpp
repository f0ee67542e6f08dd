#pragma once

// Internal affine representation of a game's gradient field,
//   v_theta(theta, phi) = j_tt * theta + j_tp * phi + k_t
//   v_phi(theta, phi)   = j_pt * theta + j_pp * phi + k_p,
// shared by the games and dynamics implementations.

#include <Eigen/Dense>
#include <variant>

#include "gamelab/games.hpp"

namespace gamelab::detail {

struct AffineField {
  Eigen::MatrixXd j_tt, j_tp, j_pt, j_pp;
  Eigen::VectorXd k_t, k_p;

  Eigen::VectorXd v_theta(const Eigen::VectorXd& theta, const Eigen::VectorXd& phi) const {
    return j_tt * theta + j_tp * phi + k_t;
  }
  Eigen::VectorXd v_phi(const Eigen::VectorXd& theta, const Eigen::VectorXd& phi) const {
    return j_pt * theta + j_pp * phi + k_p;
  }
};

AffineField make_affine_field(const Game& game);

}  // namespace gamelab::detail
