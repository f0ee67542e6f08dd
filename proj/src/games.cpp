#include "gamelab/games.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <json.hpp>
#include <sstream>

#include "eigen_util.hpp"
#include "field_blocks.hpp"

namespace gamelab {

namespace {

using nlohmann::json;

constexpr double kSpanResidualTol = 1e-8;
constexpr double kClassifyTol = 1e-10;
constexpr double kTraceTol = 1e-10;

void require_point_dims(const Game& game, const JointPoint& point, const char* op) {
  if (point.theta_dim() != theta_dim(game) || point.phi_dim() != phi_dim(game)) {
    std::ostringstream os;
    os << op << ": point dims (" << point.theta_dim() << "," << point.phi_dim()
       << ") do not match game dims (" << theta_dim(game) << "," << phi_dim(game) << ")";
    throw DimensionError(os.str());
  }
}

void require_finite_vector(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw ArgumentError(std::string(what) + ": non-finite entry");
  }
}

/// Minimum-norm least-squares solution of m x = rhs together with the
/// residual norm of the fit.
std::pair<Eigen::VectorXd, double> min_norm_solve(const Eigen::MatrixXd& m,
                                                  const Eigen::VectorXd& rhs) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-12);
  Eigen::VectorXd x = svd.solve(rhs);
  const double residual = (m * x - rhs).norm();
  return {x, residual};
}

}  // namespace

BilinearGame::BilinearGame(MatrixR a, std::vector<double> b, std::vector<double> c)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
  if (a_.rows() == 0 || a_.cols() == 0) throw DimensionError("BilinearGame: empty matrix");
  if (b_.empty()) b_.assign(a_.rows(), 0.0);
  if (c_.empty()) c_.assign(a_.cols(), 0.0);
  if (b_.size() != a_.rows())
    throw DimensionError("BilinearGame: b length must equal the row count of a");
  if (c_.size() != a_.cols())
    throw DimensionError("BilinearGame: c length must equal the column count of a");
  require_finite_vector(b_, "BilinearGame b");
  require_finite_vector(c_, "BilinearGame c");

  const Eigen::MatrixXd ae = detail::to_eigen(a_);
  const auto [phi_fit, res_b] = min_norm_solve(ae, detail::to_eigen(b_));
  const auto [theta_fit, res_c] = min_norm_solve(ae.transpose(), detail::to_eigen(c_));
  has_equilibrium_ = res_b <= kSpanResidualTol && res_c <= kSpanResidualTol;
}

AlphaGame::AlphaGame(double alpha, MatrixR a) : alpha_(alpha), a_(std::move(a)) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw ArgumentError("AlphaGame: alpha must lie in [0, 1]");
  if (a_.rows() == 0 || a_.cols() == 0) throw DimensionError("AlphaGame: empty matrix");
}

KappaAlphaGame::KappaAlphaGame(double alpha, std::vector<double> d_diag)
    : alpha_(alpha), d_diag_(std::move(d_diag)) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw ArgumentError("KappaAlphaGame: alpha must lie in [0, 1]");
  if (d_diag_.empty()) throw DimensionError("KappaAlphaGame: empty diagonal");
  require_finite_vector(d_diag_, "KappaAlphaGame d_diag");
  double trace = 0.0;
  for (std::size_t i = 0; i < d_diag_.size(); ++i) {
    if (!(d_diag_[i] > 0.0))
      throw ArgumentError("KappaAlphaGame: diagonal entries must be strictly positive");
    if (i > 0 && d_diag_[i] < d_diag_[i - 1])
      throw ArgumentError("KappaAlphaGame: diagonal entries must be nondecreasing");
    trace += d_diag_[i];
  }
  if (std::abs(trace - static_cast<double>(d_diag_.size())) > kTraceTol)
    throw ArgumentError("KappaAlphaGame: diagonal must sum to n (got trace " +
                        std::to_string(trace) + ")");
}

KappaAlphaGame KappaAlphaGame::conditioned_pair(double alpha, double kappa) {
  if (!(kappa >= 1.0)) throw ArgumentError("KappaAlphaGame: kappa must be >= 1");
  const double scale = 2.0 / (1.0 / kappa + 1.0);
  return KappaAlphaGame(alpha, {scale / kappa, scale});
}

std::size_t theta_dim(const Game& game) {
  return std::visit([](const auto& g) { return g.theta_dim(); }, game);
}

std::size_t phi_dim(const Game& game) {
  return std::visit([](const auto& g) { return g.phi_dim(); }, game);
}

std::string game_description(const Game& game) {
  std::ostringstream os;
  if (const auto* g = std::get_if<BilinearGame>(&game)) {
    os << "bilinear(" << g->theta_dim() << "x" << g->phi_dim() << ")";
  } else if (const auto* g = std::get_if<AlphaGame>(&game)) {
    os << "alpha(" << g->alpha() << ", " << g->theta_dim() << "x" << g->phi_dim() << ")";
  } else if (const auto* g = std::get_if<KappaAlphaGame>(&game)) {
    os << "kappa_alpha(alpha=" << g->alpha() << ", kappa=" << g->kappa() << ", n=" << g->n()
       << ")";
  }
  return os.str();
}

namespace detail {

AffineField make_affine_field(const Game& game) {
  AffineField f;
  if (const auto* g = std::get_if<BilinearGame>(&game)) {
    const auto d = static_cast<Eigen::Index>(g->theta_dim());
    const auto p = static_cast<Eigen::Index>(g->phi_dim());
    const Eigen::MatrixXd a = to_eigen(g->a());
    f.j_tt = Eigen::MatrixXd::Zero(d, d);
    f.j_tp = a;
    f.j_pt = -a.transpose();
    f.j_pp = Eigen::MatrixXd::Zero(p, p);
    f.k_t = to_eigen(g->b());
    f.k_p = -to_eigen(g->c());
  } else if (const auto* g = std::get_if<AlphaGame>(&game)) {
    const auto d = static_cast<Eigen::Index>(g->theta_dim());
    const auto p = static_cast<Eigen::Index>(g->phi_dim());
    const Eigen::MatrixXd a = to_eigen(g->a());
    const double al = g->alpha();
    f.j_tt = 2.0 * al * Eigen::MatrixXd::Identity(d, d);
    f.j_tp = (1.0 - al) * a;
    f.j_pt = -(1.0 - al) * a.transpose();
    f.j_pp = 2.0 * al * Eigen::MatrixXd::Identity(p, p);
    f.k_t = Eigen::VectorXd::Zero(d);
    f.k_p = Eigen::VectorXd::Zero(p);
  } else {
    const auto& ka = std::get<KappaAlphaGame>(game);
    const auto n = static_cast<Eigen::Index>(ka.n());
    const double al = ka.alpha();
    Eigen::VectorXd diag = to_eigen(ka.d_diag());
    f.j_tt = (2.0 * al * diag).asDiagonal();
    f.j_tp = (1.0 - al) * Eigen::MatrixXd::Identity(n, n);
    f.j_pt = -(1.0 - al) * Eigen::MatrixXd::Identity(n, n);
    f.j_pp = (2.0 * al * diag).asDiagonal();
    f.k_t = Eigen::VectorXd::Zero(n);
    f.k_p = Eigen::VectorXd::Zero(n);
  }
  return f;
}

}  // namespace detail

JointPoint vector_field(const Game& game, const JointPoint& point) {
  require_point_dims(game, point, "vector_field");
  require_finite_vector(point.theta, "vector_field theta");
  require_finite_vector(point.phi, "vector_field phi");
  const detail::AffineField f = detail::make_affine_field(game);
  const Eigen::VectorXd theta = detail::to_eigen(point.theta);
  const Eigen::VectorXd phi = detail::to_eigen(point.phi);
  return JointPoint{detail::from_eigen(f.v_theta(theta, phi)),
                    detail::from_eigen(f.v_phi(theta, phi))};
}

MatrixR jacobian(const Game& game) {
  const detail::AffineField f = detail::make_affine_field(game);
  const auto d = f.j_tt.rows();
  const auto p = f.j_pp.rows();
  Eigen::MatrixXd j(d + p, d + p);
  j.topLeftCorner(d, d) = f.j_tt;
  j.topRightCorner(d, p) = f.j_tp;
  j.bottomLeftCorner(p, d) = f.j_pt;
  j.bottomRightCorner(p, p) = f.j_pp;
  return detail::from_eigen(j);
}

MatrixR jacobian(const Game& game, const JointPoint& point) {
  require_point_dims(game, point, "jacobian");
  return jacobian(game);
}

GameClass classify_game(const Spectrum& spectrum) {
  if (spectrum.eigenvalues.empty()) throw ArgumentError("classify_game: empty spectrum");
  bool all_imaginary = true;
  bool all_real_positive = true;
  for (const Complex& ev : spectrum.eigenvalues) {
    if (std::abs(ev.real()) > kClassifyTol) all_imaginary = false;
    if (std::abs(ev.imag()) > kClassifyTol || !(ev.real() > 0.0)) all_real_positive = false;
  }
  if (all_imaginary) return GameClass::purely_adversarial;
  if (all_real_positive) return GameClass::purely_cooperative;
  return GameClass::mixed;
}

std::string to_string(GameClass c) {
  switch (c) {
    case GameClass::purely_adversarial:
      return "purely_adversarial";
    case GameClass::purely_cooperative:
      return "purely_cooperative";
    case GameClass::mixed:
      return "mixed";
  }
  return "unknown";
}

JointPoint equilibrium(const Game& game) {
  if (const auto* g = std::get_if<BilinearGame>(&game)) {
    if (!g->has_equilibrium())
      throw NoEquilibriumError("equilibrium: b or c lies outside the span of the coupling "
                               "matrix; the game admits no equilibrium");
    // Stationarity of the field: A phi* = -b and A^T theta* = -c.
    const Eigen::MatrixXd a = detail::to_eigen(g->a());
    const auto [phi_star, res_b] = min_norm_solve(a, -detail::to_eigen(g->b()));
    const auto [theta_star, res_c] = min_norm_solve(a.transpose(), -detail::to_eigen(g->c()));
    if (res_b > kSpanResidualTol || res_c > kSpanResidualTol)
      throw NoEquilibriumError("equilibrium: stationarity system is inconsistent");
    return JointPoint{detail::from_eigen(theta_star), detail::from_eigen(phi_star)};
  }
  return JointPoint{std::vector<double>(theta_dim(game), 0.0),
                    std::vector<double>(phi_dim(game), 0.0)};
}

namespace {

[[noreturn]] void bad_field(const std::string& pointer, const std::string& reason) {
  throw ArgumentError("game spec " + pointer + ": " + reason);
}

double require_number(const json& j, const std::string& pointer) {
  if (!j.is_number()) bad_field(pointer, "expected a number");
  return j.get<double>();
}

std::vector<double> require_number_array(const json& j, const std::string& pointer) {
  if (!j.is_array()) bad_field(pointer, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) bad_field(pointer + "/" + std::to_string(i), "expected a number");
    out.push_back(j[i].get<double>());
  }
  return out;
}

MatrixR require_matrix(const json& j, const std::string& pointer) {
  if (!j.is_array() || j.empty()) bad_field(pointer, "expected a non-empty array of rows");
  std::vector<std::vector<double>> rows;
  rows.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    rows.push_back(require_number_array(j[i], pointer + "/" + std::to_string(i)));
  try {
    return MatrixR::from_rows(rows);
  } catch (const Error& e) {
    bad_field(pointer, e.what());
  }
}

}  // namespace

Game game_from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ArgumentError(std::string("game spec: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ArgumentError("game spec: expected a JSON object");
  if (!doc.contains("family")) bad_field("/family", "missing");
  if (!doc["family"].is_string()) bad_field("/family", "expected a string");
  const std::string family = doc["family"].get<std::string>();

  try {
    if (family == "bilinear") {
      if (!doc.contains("a")) bad_field("/a", "missing");
      MatrixR a = require_matrix(doc["a"], "/a");
      std::vector<double> b, c;
      if (doc.contains("b")) b = require_number_array(doc["b"], "/b");
      if (doc.contains("c")) c = require_number_array(doc["c"], "/c");
      return BilinearGame(std::move(a), std::move(b), std::move(c));
    }
    if (family == "alpha") {
      if (!doc.contains("alpha")) bad_field("/alpha", "missing");
      if (!doc.contains("a")) bad_field("/a", "missing");
      return AlphaGame(require_number(doc["alpha"], "/alpha"), require_matrix(doc["a"], "/a"));
    }
    if (family == "kappa_alpha") {
      if (!doc.contains("alpha")) bad_field("/alpha", "missing");
      if (!doc.contains("d_diag")) bad_field("/d_diag", "missing");
      return KappaAlphaGame(require_number(doc["alpha"], "/alpha"),
                            require_number_array(doc["d_diag"], "/d_diag"));
    }
  } catch (const ArgumentError&) {
    throw;
  } catch (const Error& e) {
    throw ArgumentError(std::string("game spec: ") + e.what());
  }
  bad_field("/family", "unknown family '" + family + "'");
}

}  // namespace gamelab
