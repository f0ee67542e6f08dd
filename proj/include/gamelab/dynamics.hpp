#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "gamelab/games.hpp"

namespace gamelab {

enum class Scheme { simultaneous, alternating };

std::string to_string(Scheme s);

/// Update rule: the scheme, per-player step-sizes and per-player heavy-ball
/// momenta. Negative momentum values are allowed.
struct MethodConfig {
  Scheme scheme = Scheme::simultaneous;
  double eta1 = 0.0;
  double eta2 = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
};

/// Compound state (current, previous) that turns the heavy-ball recursion
/// into a first-order one.
struct AugmentedState {
  JointPoint current;
  JointPoint previous;
};

/// Trajectory growth ceiling: a run stops once the squared distance exceeds
/// 1e12 times its initial value.
inline constexpr double kDivergenceCeilingFactor = 1e12;

/// Iterate history of one run. deltas[t] is the squared distance of iterate t
/// to equilibrium_used, dense over all executed steps; iterates are thinned
/// to every record_every-th step. diverged_at is set exactly when some delta
/// first exceeded the divergence ceiling (and the run stopped there).
struct Trajectory {
  std::vector<double> deltas;
  std::vector<JointPoint> iterates;
  std::vector<std::size_t> iterate_steps;
  std::optional<std::size_t> diverged_at;
  MethodConfig config;
  JointPoint equilibrium_used;
};

/// One update of the chosen scheme. Simultaneous steps use only time-t
/// values; alternating steps update theta first and feed the fresh value into
/// the phi update. Returns (next, current).
AugmentedState step(const Game& game, const MethodConfig& config, const AugmentedState& state);

/// The equilibrium the iterates of a bilinear run actually approach: the
/// stationary point whose offset from the initial iterate lies in the span of
/// the coupling matrix (component-wise over the SVD basis, kernel components
/// of the initial point are preserved). For full-rank square coupling this is
/// the unique equilibrium.
JointPoint project_equilibrium(const BilinearGame& game, const JointPoint& init);

/// Iterates the update operator `steps` times from (init, init) — zero first
/// momentum kick — recording squared distances to the projected equilibrium
/// and every record_every-th iterate. Stops early at the divergence ceiling.
Trajectory run(const Game& game, const MethodConfig& config, const JointPoint& init,
               std::size_t steps, std::size_t record_every);

/// The 2(d+p) square matrix M of the linear part of the update map on the
/// stacked state: (w_{t+1}, w_t) = M (w_t, w_{t-1}) for games whose field has
/// no constant offset. Applying M agrees with step() on such games.
MatrixR exact_linear_operator(const Game& game, const MethodConfig& config);

/// CSV export: header `step,delta`, one row per executed step, floats with 17
/// significant digits. When iterates were recorded, theta_i/phi_j columns are
/// appended and filled on recorded rows (empty otherwise).
void write_trajectory_csv(const Trajectory& trajectory, std::ostream& out);

}  // namespace gamelab
