// Command-line front end: parses game/sweep configs, dispatches to the
// library, writes CSV/JSON outputs.
//
// Exit codes: 0 success, 2 usage or input errors (bad flags, missing or
// malformed files, invalid game specs), 1 numerical or hypothesis errors.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "gamelab/dynamics.hpp"
#include "gamelab/format.hpp"
#include "gamelab/games.hpp"
#include "gamelab/spectral.hpp"
#include "gamelab/sweep.hpp"
#include "gamelab/theory.hpp"

namespace {

using namespace gamelab;
using nlohmann::json;

// ---------------------------------------------------------------- parsing

double parse_double(const std::string& token, const std::string& what) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &used);
  } catch (const std::exception&) {
    throw ArgumentError(what + ": cannot parse number '" + token + "'");
  }
  if (used != token.size()) throw ArgumentError(what + ": cannot parse number '" + token + "'");
  return value;
}

std::vector<double> parse_double_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    if (!token.empty()) out.push_back(parse_double(token, what));
  }
  if (out.empty()) throw ArgumentError(what + ": empty list");
  return out;
}

// Accepts "1", "-2.5", "1+1i", "0.8-0.6i", "i", "-i", "2i".
Complex parse_complex(std::string token, const std::string& what) {
  std::erase(token, ' ');
  if (token.empty()) throw ArgumentError(what + ": empty complex literal");
  if (token.back() != 'i' && token.back() != 'I')
    return Complex(parse_double(token, what), 0.0);

  token.pop_back();
  // split into real and imaginary parts at the last sign not inside an exponent
  std::size_t split = std::string::npos;
  for (std::size_t pos = token.size(); pos-- > 1;) {
    if ((token[pos] == '+' || token[pos] == '-') &&
        token[pos - 1] != 'e' && token[pos - 1] != 'E') {
      split = pos;
      break;
    }
  }
  std::string re_part, im_part;
  if (split == std::string::npos) {
    re_part = "0";
    im_part = token;
  } else {
    re_part = token.substr(0, split);
    im_part = token.substr(split);
  }
  double im = 1.0;
  if (im_part == "" || im_part == "+")
    im = 1.0;
  else if (im_part == "-")
    im = -1.0;
  else
    im = parse_double(im_part, what);
  return Complex(parse_double(re_part, what), im);
}

std::vector<Complex> parse_complex_list(const std::string& text, const std::string& what) {
  std::vector<Complex> out;
  std::stringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    if (!token.empty()) out.push_back(parse_complex(token, what));
  }
  if (out.empty()) throw ArgumentError(what + ": empty list");
  return out;
}

Game parse_game_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("--game: cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return game_from_json_text(buf.str());
}

Scheme parse_scheme(const std::string& name) {
  if (name == "sim" || name == "simultaneous") return Scheme::simultaneous;
  if (name == "alt" || name == "alternating") return Scheme::alternating;
  throw ArgumentError("--scheme: expected sim|alt, got '" + name + "'");
}

// ---------------------------------------------------------------- output

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error("write to '" + path + "' failed");
}

json spectrum_to_json(const Spectrum& s) {
  json doc;
  doc["eigenvalues"] = json::array();
  for (const Complex& ev : s.eigenvalues)
    doc["eigenvalues"].push_back({{"re", ev.real()}, {"im", ev.imag()}});
  doc["spectral_radius"] = s.spectral_radius;
  return doc;
}

// ---------------------------------------------------------------- commands

struct MethodFlags {
  std::string scheme = "sim";
  double eta = -1.0;   // sets both when nonnegative
  double eta1 = 0.5;
  double eta2 = 0.5;
  double beta = std::numeric_limits<double>::quiet_NaN();  // sets both when finite
  double beta1 = 0.0;
  double beta2 = 0.0;

  MethodConfig config() const {
    MethodConfig c;
    c.scheme = parse_scheme(scheme);
    c.eta1 = eta >= 0.0 ? eta : eta1;
    c.eta2 = eta >= 0.0 ? eta : eta2;
    c.beta1 = std::isfinite(beta) ? beta : beta1;
    c.beta2 = std::isfinite(beta) ? beta : beta2;
    return c;
  }
};

void add_method_flags(CLI::App* cmd, MethodFlags& flags) {
  cmd->add_option("--scheme", flags.scheme, "Update scheme: sim|alt")->capture_default_str();
  cmd->add_option("--eta", flags.eta, "Step-size for both players");
  cmd->add_option("--eta1", flags.eta1, "First player step-size")->capture_default_str();
  cmd->add_option("--eta2", flags.eta2, "Second player step-size")->capture_default_str();
  cmd->add_option("--beta", flags.beta, "Momentum for both players");
  cmd->add_option("--beta1", flags.beta1, "First player momentum")->capture_default_str();
  cmd->add_option("--beta2", flags.beta2, "Second player momentum")->capture_default_str();
}

JointPoint default_init(const Game& game) {
  return JointPoint{std::vector<double>(theta_dim(game), 1.0),
                    std::vector<double>(phi_dim(game), 0.0)};
}

JointPoint resolve_init(const Game& game, const std::string& theta_csv,
                        const std::string& phi_csv) {
  JointPoint init = default_init(game);
  if (!theta_csv.empty()) init.theta = parse_double_list(theta_csv, "--init-theta");
  if (!phi_csv.empty()) init.phi = parse_double_list(phi_csv, "--init-phi");
  return init;
}

void write_fig3_csv(const std::string& out_path) {
  // Eigenvalue trajectories of the momentum update for the mixed scalar game
  // (alpha = 0.4, so lambda = 0.8 + 0.6i) at beta = -0.25, eta in [0, 2].
  const Complex lambda(0.8, 0.6);
  const double beta = -0.25;
  std::ostringstream csv;
  csv << "eta,mu_plus_re,mu_plus_im,mu_minus_re,mu_minus_im,radius,gd_radius\n";
  for (int i = 0; i <= 400; ++i) {
    const double eta = 0.005 * i;
    const MomentumEigs me = momentum_eigenvalues(lambda, eta, beta);
    csv << format_g17(eta) << "," << format_g17(me.mu_plus.real()) << ","
        << format_g17(me.mu_plus.imag()) << "," << format_g17(me.mu_minus.real()) << ","
        << format_g17(me.mu_minus.imag()) << "," << format_g17(std::sqrt(me.rho)) << ","
        << format_g17(std::abs(1.0 - eta * lambda)) << "\n";
  }
  write_text(out_path, csv.str());
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for gradient dynamics in two-player smooth games"};
  app.require_subcommand(1);

  // ---- spectrum
  auto* spectrum_cmd =
      app.add_subcommand("spectrum", "Eigenvalues of a game's Jacobian as JSON");
  std::string spectrum_game, spectrum_out;
  spectrum_cmd->add_option("--game", spectrum_game, "Game spec JSON file")->required();
  spectrum_cmd->add_option("--out", spectrum_out, "Output path (default stdout)");

  // ---- trajectory
  auto* traj_cmd = app.add_subcommand("trajectory", "Iterate a method and export step,delta CSV");
  std::string traj_game, traj_out, traj_theta, traj_phi;
  MethodFlags traj_flags;
  std::size_t traj_steps = 1000, traj_record = 1;
  traj_cmd->add_option("--game", traj_game, "Game spec JSON file")->required();
  add_method_flags(traj_cmd, traj_flags);
  traj_cmd->add_option("--steps", traj_steps, "Number of update steps")->capture_default_str();
  traj_cmd->add_option("--record-every", traj_record, "Iterate thinning stride")
      ->capture_default_str();
  traj_cmd->add_option("--init-theta", traj_theta, "Comma list (default all ones)");
  traj_cmd->add_option("--init-phi", traj_phi, "Comma list (default all zeros)");
  traj_cmd->add_option("--out", traj_out, "Output CSV path")->required();

  // ---- sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Two-dimensional parameter sweeps as CSV");
  std::string sweep_figure, sweep_out, sweep_game, sweep_diag, sweep_scheme = "alt";
  std::string sweep_xname = "eta", sweep_yname = "beta", sweep_xvals, sweep_yvals;
  std::string sweep_theta, sweep_phi;
  std::size_t sweep_steps = 10000;
  unsigned sweep_workers = 0;
  std::uint64_t sweep_seed = 0;
  sweep_cmd->add_option("--figure", sweep_figure,
                        "Named preset: fig4-alt|fig4-sim|fig7-sim|fig7-alt|fig8|fig3");
  sweep_cmd->add_option("--diagnostic", sweep_diag,
                        "normalized_delta|max_root_magnitude_sim|max_root_magnitude_alt|"
                        "optimal_beta (custom sweeps)");
  sweep_cmd->add_option("--game", sweep_game, "Game spec JSON (normalized_delta sweeps)");
  sweep_cmd->add_option("--scheme", sweep_scheme, "sim|alt (normalized_delta sweeps)")
      ->capture_default_str();
  sweep_cmd->add_option("--x-name", sweep_xname, "X axis name")->capture_default_str();
  sweep_cmd->add_option("--x-values", sweep_xvals, "Comma list, strictly ascending");
  sweep_cmd->add_option("--y-name", sweep_yname, "Y axis name")->capture_default_str();
  sweep_cmd->add_option("--y-values", sweep_yvals, "Comma list, strictly ascending");
  sweep_cmd->add_option("--steps", sweep_steps, "Steps per trajectory cell")
      ->capture_default_str();
  sweep_cmd->add_option("--init-theta", sweep_theta, "Comma list (default all ones)");
  sweep_cmd->add_option("--init-phi", sweep_phi, "Comma list (default all zeros)");
  sweep_cmd->add_option("--workers", sweep_workers, "Worker threads (0 = all cores)")
      ->capture_default_str();
  sweep_cmd->add_option("--seed", sweep_seed, "Seed recorded in the grid spec")
      ->capture_default_str();
  sweep_cmd->add_option("--out", sweep_out, "Output CSV path")->required();

  // ---- optstep
  auto* optstep_cmd =
      app.add_subcommand("optstep", "Best step-size report for a spectrum or a game");
  std::string optstep_eigs, optstep_game, optstep_out;
  optstep_cmd->add_option("--eigs", optstep_eigs, "Comma list of complex eigenvalues, e.g. 1+1i");
  optstep_cmd->add_option("--game", optstep_game, "Game spec JSON (uses its Jacobian spectrum)");
  optstep_cmd->add_option("--out", optstep_out, "Also write the report as JSON");

  // ---- optmom
  auto* optmom_cmd =
      app.add_subcommand("optmom", "Grid-optimal momentum for a conditioned game");
  std::string optmom_game, optmom_out;
  double optmom_alpha = 0.5, optmom_kappa = 1.0;
  optmom_cmd->add_option("--game", optmom_game, "kappa_alpha game spec JSON");
  optmom_cmd->add_option("--alpha", optmom_alpha, "Cooperation weight in [0,1]")
      ->capture_default_str();
  optmom_cmd->add_option("--kappa", optmom_kappa, "Condition number >= 1")->capture_default_str();
  optmom_cmd->add_option("--out", optmom_out, "Also write the result as JSON");

  // ---- polyroots
  auto* poly_cmd = app.add_subcommand("polyroots", "Roots of a polynomial as JSON");
  std::string poly_coeffs, poly_out;
  poly_cmd->add_option("--coeffs", poly_coeffs,
                       "Comma list of coefficients, ascending degree (complex allowed)")
      ->required();
  poly_cmd->add_option("--out", poly_out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*spectrum_cmd) {
      const Game game = parse_game_file(spectrum_game);
      const Spectrum s = eigenvalues(jacobian(game));
      write_text(spectrum_out, spectrum_to_json(s).dump(2) + "\n");
    } else if (*traj_cmd) {
      const Game game = parse_game_file(traj_game);
      const JointPoint init = resolve_init(game, traj_theta, traj_phi);
      const Trajectory traj =
          run(game, traj_flags.config(), init, traj_steps, traj_record);
      std::ostringstream csv;
      write_trajectory_csv(traj, csv);
      write_text(traj_out, csv.str());
    } else if (*sweep_cmd) {
      if (!sweep_figure.empty()) {
        if (sweep_figure == "fig3") {
          write_fig3_csv(sweep_out);
        } else if (sweep_figure == "fig4-alt" || sweep_figure == "fig4-sim") {
          GridSpec spec = fig4_grid_spec();
          spec.seed = sweep_seed;
          const Scheme scheme = sweep_figure == "fig4-alt" ? Scheme::alternating
                                                           : Scheme::simultaneous;
          export_grid(sweep_trajectory_grid(fig4_game(), scheme, spec, fig4_init(),
                                            sweep_workers),
                      sweep_out);
        } else if (sweep_figure == "fig7-sim" || sweep_figure == "fig7-alt") {
          const Scheme scheme =
              sweep_figure == "fig7-sim" ? Scheme::simultaneous : Scheme::alternating;
          GridSpec spec = fig7_grid_spec(scheme);
          spec.seed = sweep_seed;
          export_grid(sweep_magnitude_grid(spec, scheme, sweep_workers), sweep_out);
        } else if (sweep_figure == "fig8") {
          GridSpec spec = fig8_grid_spec();
          spec.seed = sweep_seed;
          export_grid(sweep_optimal_momentum(spec, sweep_workers), sweep_out);
        } else {
          throw ArgumentError("--figure: unknown preset '" + sweep_figure + "'");
        }
      } else {
        if (sweep_diag.empty())
          throw ArgumentError("sweep: either --figure or --diagnostic is required");
        GridSpec spec;
        spec.diagnostic = diagnostic_from_string(sweep_diag);
        spec.x_name = sweep_xname;
        spec.y_name = sweep_yname;
        if (sweep_xvals.empty() || sweep_yvals.empty())
          throw ArgumentError("sweep: custom sweeps need --x-values and --y-values");
        spec.x_values = parse_double_list(sweep_xvals, "--x-values");
        spec.y_values = parse_double_list(sweep_yvals, "--y-values");
        spec.steps = sweep_steps;
        spec.seed = sweep_seed;
        switch (spec.diagnostic) {
          case Diagnostic::normalized_delta: {
            if (sweep_game.empty())
              throw ArgumentError("sweep: normalized_delta needs --game");
            const Game game = parse_game_file(sweep_game);
            const JointPoint init = resolve_init(game, sweep_theta, sweep_phi);
            export_grid(sweep_trajectory_grid(game, parse_scheme(sweep_scheme), spec, init,
                                              sweep_workers),
                        sweep_out);
            break;
          }
          case Diagnostic::max_root_magnitude_sim:
            export_grid(sweep_magnitude_grid(spec, Scheme::simultaneous, sweep_workers),
                        sweep_out);
            break;
          case Diagnostic::max_root_magnitude_alt:
            export_grid(sweep_magnitude_grid(spec, Scheme::alternating, sweep_workers),
                        sweep_out);
            break;
          case Diagnostic::optimal_beta:
            export_grid(sweep_optimal_momentum(spec, sweep_workers), sweep_out);
            break;
        }
      }
    } else if (*optstep_cmd) {
      Spectrum spectrum;
      if (!optstep_eigs.empty()) {
        spectrum = Spectrum::from_values(parse_complex_list(optstep_eigs, "--eigs"));
      } else if (!optstep_game.empty()) {
        spectrum = eigenvalues(jacobian(parse_game_file(optstep_game)));
      } else {
        throw ArgumentError("optstep: either --eigs or --game is required");
      }
      const StepSizeReport r = best_step_size(spectrum);
      std::ostringstream text;
      text << "eta_best=" << format_g17(r.eta_best) << "\n"
           << "rho_best=" << format_g17(r.rho_best) << "\n"
           << "rho_best_sq=" << format_g17(r.rho_best * r.rho_best) << "\n"
           << "lower_bound_rho_sq=" << format_g17(r.lower_bound_rho_sq) << "\n"
           << "upper_bound_rho_sq=" << format_g17(r.upper_bound_rho_sq) << "\n"
           << "delta_term=" << format_g17(r.delta_term) << "\n"
           << "eta_lower=" << format_g17(r.eta_lower) << "\n"
           << "eta_upper=" << format_g17(r.eta_upper) << "\n";
      std::cout << text.str();
      if (!optstep_out.empty()) {
        json doc;
        doc["eta_best"] = r.eta_best;
        doc["rho_best"] = r.rho_best;
        doc["rho_best_sq"] = r.rho_best * r.rho_best;
        doc["lower_bound_rho_sq"] = r.lower_bound_rho_sq;
        doc["upper_bound_rho_sq"] = r.upper_bound_rho_sq;
        doc["delta_term"] = r.delta_term;
        doc["eta_lower"] = r.eta_lower;
        doc["eta_upper"] = r.eta_upper;
        write_text(optstep_out, doc.dump(2) + "\n");
      }
    } else if (*optmom_cmd) {
      KappaAlphaGame game = KappaAlphaGame::conditioned_pair(optmom_alpha, optmom_kappa);
      if (!optmom_game.empty()) {
        const Game parsed = parse_game_file(optmom_game);
        const auto* ka = std::get_if<KappaAlphaGame>(&parsed);
        if (ka == nullptr) throw ArgumentError("optmom: --game must be a kappa_alpha family");
        game = *ka;
      }
      const OptimalMomentum opt =
          optimal_momentum(game, optimal_momentum_eta_grid(), optimal_momentum_beta_grid());
      std::ostringstream text;
      text << "beta_opt=" << format_g17(opt.beta) << "\n"
           << "eta_opt=" << format_g17(opt.eta) << "\n"
           << "rho_opt=" << format_g17(opt.rho) << "\n";
      std::cout << text.str();
      if (!optmom_out.empty()) {
        json doc;
        doc["beta_opt"] = opt.beta;
        doc["eta_opt"] = opt.eta;
        doc["rho_opt"] = opt.rho;
        doc["alpha"] = game.alpha();
        doc["kappa"] = game.kappa();
        write_text(optmom_out, doc.dump(2) + "\n");
      }
    } else if (*poly_cmd) {
      const Polynomial p{parse_complex_list(poly_coeffs, "--coeffs")};
      const Spectrum roots = poly_roots(p);
      json doc;
      doc["roots"] = json::array();
      for (const Complex& z : roots.eigenvalues)
        doc["roots"].push_back({{"re", z.real()}, {"im", z.imag()}});
      doc["max_magnitude"] = roots.spectral_radius;
      write_text(poly_out, doc.dump(2) + "\n");
    }
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const HypothesisError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run_cli(argc, argv); }
