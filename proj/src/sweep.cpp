#include "gamelab/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <thread>

#include "gamelab/format.hpp"
#include "gamelab/theory.hpp"

namespace gamelab {

namespace {

constexpr double kCellCeiling = 1e12;

void validate_axis(const std::vector<double>& values, const std::string& name) {
  if (values.empty()) throw ArgumentError("GridSpec: axis '" + name + "' is empty");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]))
      throw ArgumentError("GridSpec: axis '" + name + "' has a non-finite value");
    if (i > 0 && !(values[i] > values[i - 1]))
      throw ArgumentError("GridSpec: axis '" + name + "' must be strictly ascending");
  }
}

void validate_spec(const GridSpec& spec) {
  validate_axis(spec.x_values, spec.x_name.empty() ? "x" : spec.x_name);
  validate_axis(spec.y_values, spec.y_name.empty() ? "y" : spec.y_name);
}

template <typename CellFn>
void for_each_cell(std::size_t cell_count, unsigned workers, const CellFn& fn) {
  unsigned n = workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : workers;
  n = static_cast<unsigned>(std::min<std::size_t>(n, cell_count));
  if (n <= 1) {
    for (std::size_t i = 0; i < cell_count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < cell_count; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

double clamp_cell(double v) {
  if (!std::isfinite(v)) return kCellCeiling;
  return std::min(std::max(v, 0.0), kCellCeiling);
}

std::string join_values(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += format_g17(values[i]);
  }
  return out;
}

class WallClock {
 public:
  WallClock() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

std::string to_string(Diagnostic d) {
  switch (d) {
    case Diagnostic::normalized_delta:
      return "normalized_delta";
    case Diagnostic::max_root_magnitude_sim:
      return "max_root_magnitude_sim";
    case Diagnostic::max_root_magnitude_alt:
      return "max_root_magnitude_alt";
    case Diagnostic::optimal_beta:
      return "optimal_beta";
  }
  return "unknown";
}

Diagnostic diagnostic_from_string(const std::string& name) {
  if (name == "normalized_delta") return Diagnostic::normalized_delta;
  if (name == "max_root_magnitude_sim") return Diagnostic::max_root_magnitude_sim;
  if (name == "max_root_magnitude_alt") return Diagnostic::max_root_magnitude_alt;
  if (name == "optimal_beta") return Diagnostic::optimal_beta;
  throw ArgumentError("unknown diagnostic '" + name + "'");
}

GridResult sweep_trajectory_grid(const Game& game, Scheme scheme, const GridSpec& spec,
                                 const JointPoint& init, unsigned workers) {
  validate_spec(spec);
  if (spec.diagnostic != Diagnostic::normalized_delta)
    throw ArgumentError("sweep_trajectory_grid: diagnostic must be normalized_delta");
  if (spec.steps < 1) throw ArgumentError("sweep_trajectory_grid: steps must be >= 1");

  WallClock clock;
  const std::size_t nx = spec.x_values.size();
  const std::size_t ny = spec.y_values.size();
  GridResult result;
  result.spec = spec;
  result.values.assign(nx * ny, 0.0);

  std::atomic<std::size_t> diverged{0};
  std::atomic<std::size_t> failed{0};
  for_each_cell(nx * ny, workers, [&](std::size_t idx) {
    const double eta = spec.x_values[idx % nx];
    const double beta = spec.y_values[idx / nx];
    const MethodConfig config{scheme, eta, eta, beta, beta};
    double value;
    try {
      const Trajectory traj = run(game, config, init, spec.steps, spec.steps);
      const double delta0 = traj.deltas.front();
      if (traj.diverged_at.has_value()) {
        value = kCellCeiling;
        diverged.fetch_add(1);
      } else if (delta0 > 0.0) {
        value = clamp_cell(traj.deltas.back() / delta0);
      } else {
        value = 0.0;
      }
    } catch (const Error&) {
      value = kCellCeiling;
      failed.fetch_add(1);
    }
    result.values[idx] = value;
  });

  result.metadata["game"] = game_description(game);
  result.metadata["scheme"] = to_string(scheme);
  result.metadata["init_theta"] = join_values(init.theta);
  result.metadata["init_phi"] = join_values(init.phi);
  result.metadata["diverged_cells"] = std::to_string(diverged.load());
  result.metadata["error_cells"] = std::to_string(failed.load());
  result.metadata["wall_time_seconds"] = format_g17(clock.seconds());
  return result;
}

GridResult sweep_magnitude_grid(const GridSpec& spec, Scheme scheme, unsigned workers) {
  validate_spec(spec);
  const Diagnostic expected = scheme == Scheme::simultaneous
                                  ? Diagnostic::max_root_magnitude_sim
                                  : Diagnostic::max_root_magnitude_alt;
  if (spec.diagnostic != expected)
    throw ArgumentError("sweep_magnitude_grid: diagnostic does not match the scheme");

  WallClock clock;
  const std::size_t nx = spec.x_values.size();
  const std::size_t ny = spec.y_values.size();
  GridResult result;
  result.spec = spec;
  result.values.assign(nx * ny, 0.0);

  for_each_cell(nx * ny, workers, [&](std::size_t idx) {
    const double eta = spec.x_values[idx % nx];
    const double beta = spec.y_values[idx / nx];
    const Polynomial poly = scheme == Scheme::simultaneous
                                ? char_poly_sim(1.0, eta, eta, beta, beta)
                                : char_poly_alt(1.0, eta, eta, beta, beta);
    result.values[idx] = poly_roots(poly).spectral_radius;
  });

  result.metadata["scheme"] = to_string(scheme);
  result.metadata["wall_time_seconds"] = format_g17(clock.seconds());
  return result;
}

std::vector<double> optimal_momentum_eta_grid() {
  std::vector<double> grid;
  grid.reserve(300);
  for (int i = 1; i <= 300; ++i) grid.push_back(0.005 * i);
  return grid;
}

std::vector<double> optimal_momentum_beta_grid() {
  std::vector<double> grid;
  grid.reserve(199);
  for (int i = 0; i < 199; ++i) grid.push_back(-0.99 + 0.01 * i);
  return grid;
}

GridResult sweep_optimal_momentum(const GridSpec& spec, unsigned workers) {
  validate_spec(spec);
  if (spec.diagnostic != Diagnostic::optimal_beta)
    throw ArgumentError("sweep_optimal_momentum: diagnostic must be optimal_beta");

  WallClock clock;
  const std::size_t nx = spec.x_values.size();
  const std::size_t ny = spec.y_values.size();
  GridResult result;
  result.spec = spec;
  result.values.assign(nx * ny, 0.0);

  const std::vector<double> eta_grid = optimal_momentum_eta_grid();
  const std::vector<double> beta_grid = optimal_momentum_beta_grid();

  for_each_cell(nx * ny, workers, [&](std::size_t idx) {
    const double alpha = spec.x_values[idx % nx];
    const double kappa = std::pow(10.0, spec.y_values[idx / nx]);
    const KappaAlphaGame game = KappaAlphaGame::conditioned_pair(alpha, kappa);
    result.values[idx] = optimal_momentum(game, eta_grid, beta_grid).beta;
  });

  result.metadata["eta_grid"] = join_values(eta_grid);
  result.metadata["beta_grid"] = join_values(beta_grid);
  result.metadata["wall_time_seconds"] = format_g17(clock.seconds());
  return result;
}

void export_grid(const GridResult& result, const std::string& csv_path) {
  const std::size_t nx = result.spec.x_values.size();
  const std::size_t ny = result.spec.y_values.size();
  if (result.values.size() != nx * ny)
    throw ArgumentError("export_grid: value count does not match the grid shape");

  {
    std::ofstream csv(csv_path, std::ios::binary | std::ios::trunc);
    if (!csv) throw Error("export_grid: cannot open '" + csv_path + "' for writing");
    csv << "y,x,value\n";
    for (std::size_t iy = 0; iy < ny; ++iy)
      for (std::size_t ix = 0; ix < nx; ++ix)
        csv << format_g17(result.spec.y_values[iy]) << "," << format_g17(result.spec.x_values[ix])
            << "," << format_g17(result.at(iy, ix)) << "\n";
    if (!csv) throw Error("export_grid: write to '" + csv_path + "' failed");
  }

  nlohmann::json doc;
  doc["spec"]["x_name"] = result.spec.x_name;
  doc["spec"]["x_values"] = result.spec.x_values;
  doc["spec"]["y_name"] = result.spec.y_name;
  doc["spec"]["y_values"] = result.spec.y_values;
  doc["spec"]["diagnostic"] = to_string(result.spec.diagnostic);
  doc["spec"]["steps"] = result.spec.steps;
  doc["spec"]["seed"] = result.spec.seed;
  doc["metadata"] = result.metadata;

  const std::string meta_path = csv_path + ".meta.json";
  std::ofstream meta(meta_path, std::ios::binary | std::ios::trunc);
  if (!meta) throw Error("export_grid: cannot open '" + meta_path + "' for writing");
  meta << doc.dump(2) << "\n";
  if (!meta) throw Error("export_grid: write to '" + meta_path + "' failed");
}

namespace {

std::vector<double> linear_axis(double first, double step, int count) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(first + step * i);
  return out;
}

}  // namespace

GridSpec fig4_grid_spec() {
  GridSpec spec;
  spec.x_name = "eta";
  spec.x_values = linear_axis(0.1, 0.1, 10);
  spec.y_name = "beta";
  // The beta = 0 row is omitted: there the orbit is bounded but neither
  // converges nor diverges, so its final distance is pure phase oscillation.
  for (int i = -5; i <= 5; ++i) {
    if (i != 0) spec.y_values.push_back(0.1 * i);
  }
  spec.diagnostic = Diagnostic::normalized_delta;
  spec.steps = 10000;
  return spec;
}

Game fig4_game() { return BilinearGame(MatrixR::from_rows({{1.0}})); }

JointPoint fig4_init() { return JointPoint{{1.0}, {0.0}}; }

GridSpec fig7_grid_spec(Scheme scheme) {
  GridSpec spec;
  spec.x_name = "eta";
  spec.x_values = linear_axis(0.05, 0.05, 20);
  spec.y_name = "beta";
  if (scheme == Scheme::simultaneous) {
    spec.y_values = linear_axis(-1.0, 0.05, 21);
    spec.diagnostic = Diagnostic::max_root_magnitude_sim;
  } else {
    // Extended above zero so the divergent positive-momentum wedge shows.
    spec.y_values = linear_axis(-1.0, 0.05, 31);
    spec.diagnostic = Diagnostic::max_root_magnitude_alt;
  }
  return spec;
}

GridSpec fig8_grid_spec() {
  GridSpec spec;
  spec.x_name = "alpha";
  spec.x_values = linear_axis(0.1, 0.1, 10);
  spec.y_name = "log10_kappa";
  spec.y_values = linear_axis(0.0, 1.0, 4);
  spec.diagnostic = Diagnostic::optimal_beta;
  return spec;
}

}  // namespace gamelab
