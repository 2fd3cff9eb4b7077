#include "causalkit/hermite.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "causalkit/linalg.hpp"
#include "causalkit/resolution.hpp"

namespace causalkit {

namespace {

void require_uniform_grid(const DiscretizedSpace& space, const char* what) {
  if (!space.has_coords()) {
    throw std::invalid_argument(std::string(what) + ": grid coordinates required");
  }
  const Eigen::VectorXd& x = *space.coords();
  const Eigen::Index n = x.size();
  if (n < 2) throw std::invalid_argument(std::string(what) + ": grid too small");
  const double step = (x(n - 1) - x(0)) / static_cast<double>(n - 1);
  for (Eigen::Index i = 1; i < n; ++i) {
    if (std::abs((x(i) - x(i - 1)) - step) > 1e-9 * step) {
      throw std::invalid_argument(std::string(what) + ": grid must be uniform");
    }
  }
}

void require_uniform_symmetric_grid(const DiscretizedSpace& space,
                                    const char* what) {
  require_uniform_grid(space, what);
  const Eigen::VectorXd& x = *space.coords();
  if (std::abs(x(0) + x(x.size() - 1)) > 1e-9 * (x(x.size() - 1) - x(0))) {
    throw std::invalid_argument(std::string(what) +
                                ": grid must be symmetric about 0");
  }
}

double grid_step(const DiscretizedSpace& space) {
  const Eigen::VectorXd& x = *space.coords();
  return (x(x.size() - 1) - x(0)) / static_cast<double>(x.size() - 1);
}

}  // namespace

HermiteBasis hermite_basis(const DiscretizedSpace& space, int n_max,
                           double decay_tol) {
  require_uniform_symmetric_grid(space, "hermite_basis");
  if (n_max < 0) throw std::invalid_argument("hermite_basis: n_max must be >= 0");
  if (!(decay_tol > 0.0)) {
    throw std::invalid_argument("hermite_basis: decay_tol must be > 0");
  }
  const Eigen::VectorXd& x = *space.coords();
  const Eigen::Index n = space.dim();
  if (n <= n_max) {
    throw std::invalid_argument(
        "hermite_basis: grid dimension must exceed the requested degree");
  }

  Eigen::MatrixXd cols(n, n_max + 1);
  const double norm0 = std::pow(std::numbers::pi, -0.25);
  cols.col(0) = norm0 * (-0.5 * x.array().square()).exp();
  if (n_max >= 1) {
    cols.col(1) =
        std::sqrt(2.0) * x.array() * cols.col(0).array();
  }
  for (int kdeg = 1; kdeg < n_max; ++kdeg) {
    const double a = std::sqrt(2.0 / (kdeg + 1.0));
    const double b = std::sqrt(kdeg / (kdeg + 1.0));
    cols.col(kdeg + 1) =
        a * x.array() * cols.col(kdeg).array() - b * cols.col(kdeg - 1).array();
  }

  // Endpoint decay: the quadrature can only be trusted if every requested
  // degree has died out before the grid ends.
  for (int kdeg = 0; kdeg <= n_max; ++kdeg) {
    const double edge =
        std::max(std::abs(cols(0, kdeg)), std::abs(cols(n - 1, kdeg)));
    if (edge > decay_tol) {
      throw std::invalid_argument(
          "hermite_basis: grid extent too small, degree " +
          std::to_string(kdeg) + " reaches " + std::to_string(edge) +
          " at the endpoints (decay tolerance " + std::to_string(decay_tol) +
          ")");
    }
  }

  // One re-orthonormalization pass against the quadrature: C <- C L^-T for
  // the Cholesky factor L of the quadrature Gram matrix.
  Eigen::MatrixXd gram =
      cols.transpose() * (space.weights().asDiagonal() * cols);
  gram = 0.5 * (gram + gram.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument(
        "hermite_basis: quadrature Gram matrix not positive definite "
        "(grid too coarse for the requested degree)");
  }
  Eigen::MatrixXd lchol = llt.matrixL();
  cols = lchol.transpose()
             .triangularView<Eigen::Upper>()
             .solve(cols.transpose())
             .transpose();

  Eigen::MatrixXd regram =
      cols.transpose() * (space.weights().asDiagonal() * cols);
  const double deviation =
      (regram - Eigen::MatrixXd::Identity(n_max + 1, n_max + 1))
          .cwiseAbs()
          .maxCoeff();

  return HermiteBasis{space, n_max, std::move(cols), deviation};
}

LinearMap shift_operator(const DiscretizedSpace& space, double h) {
  require_uniform_grid(space, "shift_operator");
  const Eigen::VectorXd& x = *space.coords();
  const Eigen::Index n = space.dim();
  const double span = x(n - 1) - x(0);
  if (!std::isfinite(h) || std::abs(h) >= span) {
    throw std::invalid_argument(
        "shift_operator: |h| must be smaller than the grid span");
  }
  const double step = grid_step(space);
  const double ratio = h / step;
  const double rounded = std::round(ratio);
  Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(n, n);
  if (std::abs(ratio - rounded) <= 1e-9) {
    // (tau_h f)(x_i) = f(x_i + h) = f(x_{i+m}).
    const Eigen::Index m = static_cast<Eigen::Index>(rounded);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index j = i + m;
      if (j >= 0 && j < n) mat(i, j) = 1.0;
    }
  } else {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double pos = static_cast<double>(i) + ratio;
      const double fl = std::floor(pos);
      const Eigen::Index j0 = static_cast<Eigen::Index>(fl);
      const double frac = pos - fl;
      if (j0 >= 0 && j0 < n) mat(i, j0) += 1.0 - frac;
      if (j0 + 1 >= 0 && j0 + 1 < n) mat(i, j0 + 1) += frac;
    }
  }
  return LinearMap(space, space, std::move(mat));
}

double injectivity_margin(const LinearMap& p, const HermiteBasis& basis) {
  if (!p.source.same_as(basis.space) || !p.target.same_as(basis.space)) {
    throw std::invalid_argument("injectivity_margin: space mismatch");
  }
  Eigen::MatrixXd scaled = basis.space.sqrt_weights().asDiagonal() *
                           (p.matrix * basis.columns);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled);
  const Eigen::VectorXd& sv = svd.singularValues();
  return sv(sv.size() - 1);
}

Eigen::VectorXd mollifier_bump(const DiscretizedSpace& space,
                               double support_lo, double support_hi) {
  if (!space.has_coords()) {
    throw std::invalid_argument("mollifier_bump: grid coordinates required");
  }
  if (!(support_lo < support_hi)) {
    throw std::invalid_argument("mollifier_bump: support must be nonempty");
  }
  const Eigen::VectorXd& x = *space.coords();
  Eigen::VectorXd bump = Eigen::VectorXd::Zero(space.dim());
  const double mid = 0.5 * (support_lo + support_hi);
  const double half = 0.5 * (support_hi - support_lo);
  for (Eigen::Index i = 0; i < space.dim(); ++i) {
    const double y = (x(i) - mid) / half;
    if (std::abs(y) < 1.0) bump(i) = std::exp(-1.0 / (1.0 - y * y));
  }
  const double norm = space.norm(bump);
  if (norm <= 0.0) {
    throw std::invalid_argument(
        "mollifier_bump: support contains no interior grid point");
  }
  return bump / norm;
}

void CounterexampleConfig::validate() const {
  if (dim < 16) throw std::invalid_argument("config: dim must be at least 16");
  if (!(extent > 0.0)) throw std::invalid_argument("config: L must be > 0");
  if (max_degree < 0) {
    throw std::invalid_argument("config: degree range must be nonnegative");
  }
  if (max_degree >= dim) {
    throw std::invalid_argument("config: dim must exceed the degree range");
  }
  if (!(support_lo < support_hi)) {
    throw std::invalid_argument("config: bump support must be nonempty");
  }
  if (!(support_lo > -extent) || !(support_hi < extent)) {
    throw std::invalid_argument("config: bump support must lie inside the grid");
  }
  if (!(cut > -extent) || !(cut < extent)) {
    throw std::invalid_argument("config: cut time must lie inside the grid");
  }
  if (!(std::abs(shift) < 2.0 * extent)) {
    throw std::invalid_argument("config: |h| must be below the grid span");
  }
  if (!(support_lo > cut)) {
    throw std::invalid_argument(
        "config: bump support must start after the cut (s0 > a)");
  }
  if (shift > 0.0 && !(support_lo - shift < cut)) {
    throw std::invalid_argument(
        "config: shifted bump must have mass before the cut (s0 - h < a)");
  }
  if (!(decay_tol > 0.0)) {
    throw std::invalid_argument("config: decay tolerance must be > 0");
  }
  if (!(in_frac > 0.0) || !(out_frac > 0.0)) {
    throw std::invalid_argument("config: threshold fractions must be > 0");
  }
  if (out_min_degree < 0 || out_min_degree > max_degree) {
    throw std::invalid_argument(
        "config: out threshold degree must lie in the degree range");
  }
}

std::string counterexample_verdict_name(CounterexampleVerdict v) {
  switch (v) {
    case CounterexampleVerdict::kClosureNoncausalCoreCausal:
      return "closure-noncausal, core-causal";
    case CounterexampleVerdict::kCausalOnBoth:
      return "causal on both";
    case CounterexampleVerdict::kInconclusive:
      return "inconclusive";
  }
  return "unknown";
}

CounterexampleTable counterexample_run(const CounterexampleConfig& config) {
  config.validate();
  DiscretizedSpace space =
      DiscretizedSpace::uniform_grid(config.extent, config.dim);
  HermiteBasis basis =
      hermite_basis(space, config.max_degree, config.decay_tol);
  LinearMap tau = shift_operator(space, config.shift);
  ProjectionFamily cutoff = cutoff_resolution(space, {config.cut});
  const Eigen::MatrixXd& p = cutoff.matrix_at(0);

  Eigen::VectorXd bump =
      mollifier_bump(space, config.support_lo, config.support_hi);
  const double bump_norm = space.norm(bump);

  Eigen::VectorXd shifted_past = p * (tau.matrix * bump);
  const double shifted_past_norm = space.norm(shifted_past);
  Eigen::VectorXd probe = Eigen::VectorXd::Zero(space.dim());
  if (shifted_past_norm > 0.0) probe = shifted_past / shifted_past_norm;

  // All Hermite coefficients of the bump at once; partial sums give the
  // degree-n projections because the columns are orthonormal.
  Eigen::VectorXd coeffs =
      basis.columns.transpose() * (space.weights().asDiagonal() * bump);

  CounterexampleTable table;
  table.config = config;
  table.bump_norm = bump_norm;
  table.shifted_past_norm = shifted_past_norm;
  table.shift_op_norm = op_norm(tau);
  table.margins_positive = true;
  table.rows.reserve(config.max_degree + 1);

  for (int n = 0; n <= config.max_degree; ++n) {
    Eigen::VectorXd fn =
        basis.columns.leftCols(n + 1) * coeffs.head(n + 1);
    Eigen::VectorXd tfn = tau.matrix * fn;
    CounterexampleRow row;
    row.degree = n;
    row.past_in = space.norm(p * fn);
    row.past_out = space.norm(p * tfn);
    row.modulus_pairing = std::abs(space.inner(p * tfn, probe));
    Eigen::MatrixXd scaled = space.sqrt_weights().asDiagonal() *
                             (p * basis.columns.leftCols(n + 1));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled);
    row.margin = svd.singularValues()(n);
    if (!(row.margin > 0.0)) table.margins_positive = false;
    table.rows.push_back(row);
  }

  table.past_in_ok =
      table.rows.back().past_in <= config.in_frac * bump_norm;
  table.past_out_ok = true;
  for (const CounterexampleRow& row : table.rows) {
    if (row.degree >= config.out_min_degree &&
        row.past_out < config.out_frac * shifted_past_norm) {
      table.past_out_ok = false;
    }
  }

  if (shifted_past_norm <= config.in_frac * bump_norm) {
    // The shifted bump carries (essentially) no mass before the cut: the
    // causal side of the dichotomy.
    const bool out_decays =
        table.rows.back().past_out <= config.in_frac * bump_norm;
    table.verdict = out_decays ? CounterexampleVerdict::kCausalOnBoth
                               : CounterexampleVerdict::kInconclusive;
  } else if (table.past_in_ok && table.past_out_ok && table.margins_positive) {
    table.verdict = CounterexampleVerdict::kClosureNoncausalCoreCausal;
  } else {
    table.verdict = CounterexampleVerdict::kInconclusive;
  }
  return table;
}

}  // namespace causalkit
