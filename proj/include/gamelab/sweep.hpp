#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gamelab/dynamics.hpp"
#include "gamelab/games.hpp"

namespace gamelab {

enum class Diagnostic {
  normalized_delta,
  max_root_magnitude_sim,
  max_root_magnitude_alt,
  optimal_beta,
};

std::string to_string(Diagnostic d);
Diagnostic diagnostic_from_string(const std::string& name);

/// Axes and parameters of a two-dimensional sweep. Axis value lists are
/// explicit (not min/max/count) and must be strictly ascending.
struct GridSpec {
  std::string x_name;
  std::vector<double> x_values;
  std::string y_name;
  std::vector<double> y_values;
  Diagnostic diagnostic = Diagnostic::normalized_delta;
  std::size_t steps = 0;    // trajectory sweeps only
  std::uint64_t seed = 0;
};

/// Values over the grid, y-major: values[iy * nx + ix]. Cells that hit the
/// divergence ceiling (or failed) store the ceiling value so downstream
/// consumers never see NaN.
struct GridResult {
  GridSpec spec;
  std::vector<double> values;
  std::map<std::string, std::string> metadata;

  double at(std::size_t iy, std::size_t ix) const {
    return values[iy * spec.x_values.size() + ix];
  }
};

/// Runs a trajectory per cell (x = step-size for both players, y = momentum
/// for both players) and stores the final squared distance over the initial
/// one, clamped to [0, 1e12]. Worker count 0 means all hardware threads.
GridResult sweep_trajectory_grid(const Game& game, Scheme scheme, const GridSpec& spec,
                                 const JointPoint& init, unsigned workers = 0);

/// Stores per cell the maximum root magnitude of the scheme's characteristic
/// quartic at (eta = x with eta1 = eta2 = x and unit coupling eigenvalue,
/// beta1 = beta2 = y).
GridResult sweep_magnitude_grid(const GridSpec& spec, Scheme scheme, unsigned workers = 0);

/// Stores per cell (x = alpha, y = log10 kappa) the grid-optimal momentum of
/// the conditioned two-eigenvalue game. The internal (eta, beta) search grids
/// are fixed and recorded in the result metadata.
GridResult sweep_optimal_momentum(const GridSpec& spec, unsigned workers = 0);

/// Internal search grids used by sweep_optimal_momentum.
std::vector<double> optimal_momentum_eta_grid();
std::vector<double> optimal_momentum_beta_grid();

/// Writes `y,x,value` CSV rows in row-major order (17 significant digits)
/// plus a JSON sidecar at csv_path + ".meta.json" holding the spec and
/// metadata. Identical results export byte-identical files.
void export_grid(const GridResult& result, const std::string& csv_path);

/// Pinned grids reproducing the analytic figures (documented in the README).
GridSpec fig4_grid_spec();      // normalized delta over (eta, beta), 1e4 steps
Game fig4_game();               // scalar bilinear coupling
JointPoint fig4_init();         // (theta, phi) = (1, 0)
GridSpec fig7_grid_spec(Scheme scheme);  // max root magnitude over (eta, beta)
GridSpec fig8_grid_spec();      // optimal momentum over (alpha, log10 kappa)

}  // namespace gamelab
