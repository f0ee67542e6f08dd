#include "gamelab/dynamics.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "eigen_util.hpp"
#include "field_blocks.hpp"
#include "gamelab/format.hpp"

namespace gamelab {

namespace {

void validate_config(const MethodConfig& config) {
  if (!(config.eta1 >= 0.0) || !(config.eta2 >= 0.0))
    throw ArgumentError("MethodConfig: step-sizes must be nonnegative");
  if (!std::isfinite(config.eta1) || !std::isfinite(config.eta2) ||
      !std::isfinite(config.beta1) || !std::isfinite(config.beta2))
    throw ArgumentError("MethodConfig: non-finite parameter");
}

void validate_state_dims(const Game& game, const AugmentedState& state) {
  const std::size_t d = theta_dim(game);
  const std::size_t p = phi_dim(game);
  if (state.current.theta_dim() != d || state.current.phi_dim() != p ||
      state.previous.theta_dim() != d || state.previous.phi_dim() != p)
    throw DimensionError("step: state dimensions do not match the game");
}

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

struct StepWork {
  Eigen::VectorXd theta, phi, theta_prev, phi_prev;
};

// Advances the state in place.
void advance(const detail::AffineField& f, const MethodConfig& c, StepWork& w) {
  Eigen::VectorXd theta_next =
      w.theta - c.eta1 * f.v_theta(w.theta, w.phi) + c.beta1 * (w.theta - w.theta_prev);
  Eigen::VectorXd phi_next;
  if (c.scheme == Scheme::simultaneous) {
    phi_next = w.phi - c.eta2 * f.v_phi(w.theta, w.phi) + c.beta2 * (w.phi - w.phi_prev);
  } else {
    phi_next = w.phi - c.eta2 * f.v_phi(theta_next, w.phi) + c.beta2 * (w.phi - w.phi_prev);
  }
  w.theta_prev = std::move(w.theta);
  w.phi_prev = std::move(w.phi);
  w.theta = std::move(theta_next);
  w.phi = std::move(phi_next);
}

}  // namespace

std::string to_string(Scheme s) {
  return s == Scheme::simultaneous ? "simultaneous" : "alternating";
}

AugmentedState step(const Game& game, const MethodConfig& config, const AugmentedState& state) {
  validate_config(config);
  validate_state_dims(game, state);

  StepWork w{detail::to_eigen(state.current.theta), detail::to_eigen(state.current.phi),
             detail::to_eigen(state.previous.theta), detail::to_eigen(state.previous.phi)};
  if (!all_finite(w.theta) || !all_finite(w.phi) || !all_finite(w.theta_prev) ||
      !all_finite(w.phi_prev))
    throw NumericalError("step: non-finite state");

  const detail::AffineField f = detail::make_affine_field(game);
  AugmentedState out;
  out.previous = state.current;
  advance(f, config, w);
  out.current = JointPoint{detail::from_eigen(w.theta), detail::from_eigen(w.phi)};
  return out;
}

JointPoint project_equilibrium(const BilinearGame& game, const JointPoint& init) {
  if (init.theta_dim() != game.theta_dim() || init.phi_dim() != game.phi_dim())
    throw DimensionError("project_equilibrium: point dimensions do not match the game");
  if (!game.has_equilibrium())
    throw NoEquilibriumError("project_equilibrium: game admits no equilibrium");

  // Base stationary point (minimum norm), then add back the kernel components
  // of the initial iterate, which the updates never move.
  const JointPoint base = equilibrium(Game{game});
  const SvdResult dec = svd(game.a());
  const std::size_t r = dec.rank;

  const auto project_kernel = [&](const MatrixR& rot, const std::vector<double>& x) {
    std::vector<double> z = rot.apply(x);
    for (std::size_t i = 0; i < std::min(r, z.size()); ++i) z[i] = 0.0;
    return rot.transposed().apply(z);
  };

  std::vector<double> theta_star = base.theta;
  {
    std::vector<double> offset(init.theta.size());
    for (std::size_t i = 0; i < offset.size(); ++i) offset[i] = init.theta[i] - base.theta[i];
    const std::vector<double> kernel_part = project_kernel(dec.u, offset);
    for (std::size_t i = 0; i < theta_star.size(); ++i) theta_star[i] += kernel_part[i];
  }
  std::vector<double> phi_star = base.phi;
  {
    std::vector<double> offset(init.phi.size());
    for (std::size_t i = 0; i < offset.size(); ++i) offset[i] = init.phi[i] - base.phi[i];
    const std::vector<double> kernel_part = project_kernel(dec.v, offset);
    for (std::size_t i = 0; i < phi_star.size(); ++i) phi_star[i] += kernel_part[i];
  }
  return JointPoint{std::move(theta_star), std::move(phi_star)};
}

Trajectory run(const Game& game, const MethodConfig& config, const JointPoint& init,
               std::size_t steps, std::size_t record_every) {
  validate_config(config);
  if (steps < 1) throw ArgumentError("run: steps must be >= 1");
  if (record_every < 1) throw ArgumentError("run: record_every must be >= 1");
  if (init.theta_dim() != theta_dim(game) || init.phi_dim() != phi_dim(game))
    throw DimensionError("run: init dimensions do not match the game");

  JointPoint eq;
  if (const auto* bilinear = std::get_if<BilinearGame>(&game)) {
    eq = project_equilibrium(*bilinear, init);
  } else {
    eq = equilibrium(game);
  }
  const Eigen::VectorXd theta_star = detail::to_eigen(eq.theta);
  const Eigen::VectorXd phi_star = detail::to_eigen(eq.phi);

  const detail::AffineField f = detail::make_affine_field(game);
  StepWork w{detail::to_eigen(init.theta), detail::to_eigen(init.phi),
             detail::to_eigen(init.theta), detail::to_eigen(init.phi)};
  if (!all_finite(w.theta) || !all_finite(w.phi)) throw NumericalError("run: non-finite init");

  const auto delta_of = [&]() {
    return (w.theta - theta_star).squaredNorm() + (w.phi - phi_star).squaredNorm();
  };

  Trajectory traj;
  traj.config = config;
  traj.equilibrium_used = eq;
  traj.deltas.reserve(steps + 1);

  const double delta0 = delta_of();
  const double ceiling = kDivergenceCeilingFactor * delta0;
  traj.deltas.push_back(delta0);
  traj.iterates.push_back(JointPoint{detail::from_eigen(w.theta), detail::from_eigen(w.phi)});
  traj.iterate_steps.push_back(0);

  for (std::size_t t = 1; t <= steps; ++t) {
    advance(f, config, w);
    if (!all_finite(w.theta) || !all_finite(w.phi))
      throw NumericalError("run: non-finite state at step " + std::to_string(t));
    const double delta = delta_of();
    traj.deltas.push_back(delta);
    if (t % record_every == 0) {
      traj.iterates.push_back(JointPoint{detail::from_eigen(w.theta), detail::from_eigen(w.phi)});
      traj.iterate_steps.push_back(t);
    }
    if (delta > ceiling) {
      traj.diverged_at = t;
      break;
    }
  }
  return traj;
}

MatrixR exact_linear_operator(const Game& game, const MethodConfig& config) {
  validate_config(config);
  const detail::AffineField f = detail::make_affine_field(game);
  const auto d = f.j_tt.rows();
  const auto p = f.j_pp.rows();
  const auto m = d + p;

  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd ip = Eigen::MatrixXd::Identity(p, p);

  // theta row is the same for both schemes.
  const Eigen::MatrixXd theta_cur_t = (1.0 + config.beta1) * id - config.eta1 * f.j_tt;
  const Eigen::MatrixXd theta_cur_p = -config.eta1 * f.j_tp;

  Eigen::MatrixXd phi_cur_t, phi_cur_p, phi_prev_t;
  if (config.scheme == Scheme::simultaneous) {
    phi_cur_t = -config.eta2 * f.j_pt;
    phi_cur_p = (1.0 + config.beta2) * ip - config.eta2 * f.j_pp;
    phi_prev_t = Eigen::MatrixXd::Zero(p, d);
  } else {
    // The phi update sees the freshly updated theta.
    phi_cur_t = -config.eta2 * f.j_pt * theta_cur_t;
    phi_cur_p = (1.0 + config.beta2) * ip - config.eta2 * f.j_pp +
                config.eta1 * config.eta2 * f.j_pt * f.j_tp;
    phi_prev_t = config.eta2 * config.beta1 * f.j_pt;
  }

  Eigen::MatrixXd op = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  op.block(0, 0, d, d) = theta_cur_t;
  op.block(0, d, d, p) = theta_cur_p;
  op.block(0, m, d, d) = -config.beta1 * id;
  op.block(d, 0, p, d) = phi_cur_t;
  op.block(d, d, p, p) = phi_cur_p;
  op.block(d, m, p, d) = phi_prev_t;
  op.block(d, m + d, p, p) = -config.beta2 * ip;
  op.block(m, 0, m, m) = Eigen::MatrixXd::Identity(m, m);
  return detail::from_eigen(op);
}

void write_trajectory_csv(const Trajectory& trajectory, std::ostream& out) {
  const bool with_iterates = !trajectory.iterates.empty();
  out << "step,delta";
  if (with_iterates) {
    const JointPoint& first = trajectory.iterates.front();
    for (std::size_t i = 0; i < first.theta_dim(); ++i) out << ",theta_" << i;
    for (std::size_t j = 0; j < first.phi_dim(); ++j) out << ",phi_" << j;
  }
  out << "\n";

  std::size_t next_recorded = 0;
  for (std::size_t s = 0; s < trajectory.deltas.size(); ++s) {
    out << s << "," << format_g17(trajectory.deltas[s]);
    if (with_iterates) {
      const bool recorded = next_recorded < trajectory.iterate_steps.size() &&
                            trajectory.iterate_steps[next_recorded] == s;
      if (recorded) {
        const JointPoint& pt = trajectory.iterates[next_recorded];
        for (double x : pt.theta) out << "," << format_g17(x);
        for (double x : pt.phi) out << "," << format_g17(x);
        ++next_recorded;
      } else {
        const JointPoint& first = trajectory.iterates.front();
        for (std::size_t i = 0; i < first.theta_dim() + first.phi_dim(); ++i) out << ",";
      }
    }
    out << "\n";
  }
}

}  // namespace gamelab
