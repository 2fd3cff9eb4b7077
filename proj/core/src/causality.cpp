#include "causalkit/causality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace causalkit {

namespace {

constexpr double kTiny = 1e-300;

void require_on_space(const LinearMap& p, const DiscretizedSpace& s,
                      const char* what) {
  if (!p.source.same_as(s) || !p.target.same_as(s)) {
    throw std::invalid_argument(std::string(what) +
                                ": projection does not act on the space");
  }
}

bool exactly_diagonal(const Eigen::MatrixXd& p) {
  if (p.rows() != p.cols()) return false;
  for (Eigen::Index j = 0; j < p.cols(); ++j) {
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
      if (i != j && p(i, j) != 0.0) return false;
    }
  }
  return true;
}

// P X, but as a row scaling when P is an exact diagonal (cutoff and
// truncation projections are): aggregate sweeps repeat this product per
// family member, and the dense path costs a full matrix multiply each time.
Eigen::MatrixXd projection_times(const Eigen::MatrixXd& p,
                                 const Eigen::MatrixXd& x) {
  if (exactly_diagonal(p)) return p.diagonal().asDiagonal() * x;
  return p * x;
}

struct TopSingular {
  double sigma = 0.0;
  Eigen::VectorXd right;  // unit right singular vector
};

// Largest singular value with its right singular vector; exact SVD when
// small, power iteration otherwise (ties only speed the value up).
TopSingular top_singular(const Eigen::MatrixXd& m) {
  TopSingular out;
  if (m.size() == 0) return out;
  if (m.rows() <= 160 && m.cols() <= 160) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(
        m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.sigma = svd.singularValues()(0);
    out.right = svd.matrixV().col(0);
    return out;
  }
  Eigen::VectorXd x = Eigen::VectorXd::Ones(m.cols());
  x /= x.norm();
  double sigma = 0.0;
  for (int it = 0; it < 400; ++it) {
    Eigen::VectorXd y = m * x;
    const double ny = y.norm();
    if (ny <= kTiny) {
      sigma = 0.0;
      break;
    }
    const double prev = sigma;
    sigma = ny;
    x = m.transpose() * y;
    const double nx = x.norm();
    if (nx <= kTiny) break;
    x /= nx;
    if (it > 0 && std::abs(sigma - prev) <= 1e-14 * sigma) break;
  }
  out.sigma = sigma;
  out.right = x;
  return out;
}

// Shared kernel-restricted defect computation.  `composed` is the map whose
// null directions we restrict to (P applied to the domain basis), `scored`
// the map whose size we measure there (P or Q applied to the action), with
// `scored_weights` the weights of the space the scores live in.
CausalityReport kernel_defect(const DomainOperator& m,
                              const Eigen::MatrixXd& composed,
                              const Eigen::MatrixXd& scored,
                              const Eigen::VectorXd& scored_weights,
                              const Eigen::MatrixXd& g,
                              const Eigen::LLT<Eigen::MatrixXd>& chol,
                              double tol, double rank_tol) {
  CausalityReport report;
  report.tolerance = tol;
  report.rank_tolerance = rank_tol;
  Eigen::MatrixXd kernel =
      metric_kernel_basis(composed, m.source.weights(), g, chol, rank_tol);
  if (kernel.cols() == 0) {
    report.verdict = Verdict::kVacuous;
    report.defect0 = 0.0;
    return report;
  }
  // The exact-diagonal kernel path fills only the free coordinate rows;
  // restricting the product to them turns an n^2 k multiply into n k^2.
  std::vector<Eigen::Index> live;
  live.reserve(kernel.rows());
  for (Eigen::Index i = 0; i < kernel.rows(); ++i) {
    if (!kernel.row(i).isZero(0.0)) live.push_back(i);
  }
  Eigen::MatrixXd product;
  if (static_cast<Eigen::Index>(live.size()) < kernel.rows()) {
    Eigen::MatrixXd scored_cols(scored.rows(), live.size());
    Eigen::MatrixXd kernel_rows(live.size(), kernel.cols());
    for (std::size_t i = 0; i < live.size(); ++i) {
      scored_cols.col(i) = scored.col(live[i]);
      kernel_rows.row(i) = kernel.row(live[i]);
    }
    product = scored_cols * kernel_rows;
  } else {
    product = scored * kernel;
  }
  Eigen::MatrixXd scored_kernel =
      scored_weights.array().sqrt().matrix().asDiagonal() * product;
  TopSingular top = top_singular(scored_kernel);
  report.defect0 = top.sigma;
  report.witness_coeffs = kernel * top.right;
  report.witness = m.domain_basis * report.witness_coeffs;
  report.verdict =
      report.defect0 <= tol ? Verdict::kCompatible : Verdict::kIncompatible;
  return report;
}

double effective_tol(const DomainOperator& m, double tol) {
  return tol > 0.0 ? tol : default_verdict_tol(m);
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LineFit fit_smallest(const std::vector<double>& deltas,
                     const std::vector<StrongModulusResult>& samples) {
  const std::size_t n = std::min<std::size_t>(3, deltas.size());
  LineFit fit;
  if (n == 0) return fit;
  if (n == 1) {
    fit.intercept = samples[0].omega;
    return fit;
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += deltas[i];
    sy += samples[i].omega;
    sxx += deltas[i] * deltas[i];
    sxy += deltas[i] * samples[i].omega;
  }
  const double dn = static_cast<double>(n);
  const double denom = dn * sxx - sx * sx;
  if (std::abs(denom) <= kTiny) {
    fit.intercept = sy / dn;
    return fit;
  }
  fit.slope = (dn * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / dn;
  return fit;
}

}  // namespace

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kCompatible:
      return "compatible";
    case Verdict::kIncompatible:
      return "incompatible";
    case Verdict::kVacuous:
      return "vacuous";
  }
  return "unknown";
}

double default_verdict_tol(const DomainOperator& m) {
  return 1e-9 * (restricted_op_norm(m) + 1.0);
}

CausalityReport compatibility_defect(const DomainOperator& m,
                                     const LinearMap& p, double tol,
                                     double rank_tol) {
  if (!m.source.same_as(m.target)) {
    throw std::invalid_argument(
        "compatibility_defect: operator must map a space to itself "
        "(use pq_compatibility_defect for distinct spaces)");
  }
  return pq_compatibility_defect(m, p, p, tol, rank_tol);
}

CausalityReport pq_compatibility_defect(const DomainOperator& m,
                                        const LinearMap& p,
                                        const LinearMap& q, double tol,
                                        double rank_tol) {
  require_on_space(p, m.source, "pq_compatibility_defect");
  require_on_space(q, m.target, "pq_compatibility_defect");
  const double vt = effective_tol(m, tol);
  Eigen::MatrixXd g = graph_gram(m);
  Eigen::LLT<Eigen::MatrixXd> chol(g);
  if (chol.info() != Eigen::Success) {
    throw std::invalid_argument(
        "pq_compatibility_defect: graph Gram matrix not positive definite");
  }
  Eigen::MatrixXd composed = projection_times(p.matrix, m.domain_basis);
  Eigen::MatrixXd scored = projection_times(q.matrix, m.action);
  return kernel_defect(m, composed, scored, m.target.weights(), g, chol, vt,
                       rank_tol);
}

double factorization_defect(const LinearMap& m, const LinearMap& p,
                            double idempotency_tol) {
  if (!m.source.same_as(m.target)) {
    throw std::invalid_argument(
        "factorization_defect: operator must map a space to itself");
  }
  require_on_space(p, m.source, "factorization_defect");
  const double pnorm = op_norm(p);
  const double idem = op_norm(LinearMap(
      p.source, p.target, Eigen::MatrixXd(p.matrix * p.matrix - p.matrix)));
  if (idem > idempotency_tol * (1.0 + pnorm) * (1.0 + pnorm)) {
    throw std::invalid_argument(
        "factorization_defect: P is not idempotent at tolerance");
  }
  Eigen::MatrixXd pm = p.matrix * m.matrix;
  return op_norm(LinearMap(m.source, m.target,
                           Eigen::MatrixXd(pm - pm * p.matrix)));
}

AggregateCausality is_causal(const DomainOperator& m,
                             const ProjectionFamily& fam, double tol,
                             double rank_tol) {
  if (!m.source.same_as(m.target) || !fam.space().same_as(m.source)) {
    throw std::invalid_argument("is_causal: family must live on the "
                                "operator's (single) space");
  }
  AggregateCausality agg;
  agg.tolerance = effective_tol(m, tol);
  Eigen::MatrixXd g = graph_gram(m);
  Eigen::LLT<Eigen::MatrixXd> chol(g);
  if (chol.info() != Eigen::Success) {
    throw std::invalid_argument(
        "is_causal: graph Gram matrix not positive definite");
  }
  agg.reports.reserve(fam.size());
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const Eigen::MatrixXd& pt = fam.matrix_at(i);
    Eigen::MatrixXd composed = projection_times(pt, m.domain_basis);
    Eigen::MatrixXd scored = projection_times(pt, m.action);
    CausalityReport rep = kernel_defect(m, composed, scored,
                                        m.target.weights(), g, chol,
                                        agg.tolerance, rank_tol);
    rep.time = fam.times()[i];
    agg.max_defect = std::max(agg.max_defect, rep.defect0);
    if (rep.verdict == Verdict::kIncompatible) agg.causal = false;
    agg.reports.push_back(std::move(rep));
  }
  return agg;
}

StrongModulusResult strong_modulus(const DomainOperator& m,
                                   const LinearMap& p,
                                   const Eigen::VectorXd& x_probe, double r,
                                   double delta, double rank_tol) {
  if (!m.source.same_as(m.target)) {
    throw std::invalid_argument(
        "strong_modulus: operator must map a space to itself");
  }
  require_on_space(p, m.source, "strong_modulus");
  if (x_probe.size() != m.source.dim()) {
    throw std::invalid_argument("strong_modulus: probe length mismatch");
  }
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument("strong_modulus: R must be positive");
  }
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw std::invalid_argument("strong_modulus: delta must be >= 0");
  }

  const Eigen::Index k = m.domain_dim();
  StrongModulusResult out;
  out.witness = Eigen::VectorXd::Zero(m.source.dim());
  out.witness_coeffs = Eigen::VectorXd::Zero(k);

  Eigen::MatrixXd g = graph_gram(m);
  Eigen::LLT<Eigen::MatrixXd> chol(g);
  if (chol.info() != Eigen::Success) {
    throw std::invalid_argument(
        "strong_modulus: graph Gram matrix not positive definite");
  }
  Eigen::MatrixXd pd = projection_times(p.matrix, m.domain_basis);
  Eigen::MatrixXd pa = projection_times(p.matrix, m.action);
  Eigen::VectorXd v =
      pa.transpose() * (m.source.weights().asDiagonal() * x_probe);

  if (v.norm() <= kTiny) {
    out.multiplier = 0.0;
    return out;
  }

  const double diameter = 2.0 * r;

  if (delta == 0.0) {
    // Exact-equal-pasts case: maximize over the kernel of P within the
    // domain, graph norm at most 2R.
    Eigen::MatrixXd kernel =
        metric_kernel_basis(pd, m.source.weights(), g, chol, rank_tol);
    out.multiplier = std::numeric_limits<double>::infinity();
    if (kernel.cols() == 0) return out;
    Eigen::VectorXd w = kernel.transpose() * v;
    const double nw = w.norm();
    if (nw <= kTiny) return out;
    out.omega = diameter * nw;
    out.dual_bound = out.omega;
    out.witness_coeffs = (diameter / nw) * (kernel * w);
    out.witness = m.domain_basis * out.witness_coeffs;
    return out;
  }

  // Two-ellipsoid dual search: minimize the Cauchy-Schwarz bound
  // U(mu) = sqrt((1+mu) v' (G/(2R)^2 + mu S/delta^2)^-1 v) over mu >= 0.
  // Whitening by the Cholesky factor of G/(2R)^2 turns the pencil into
  // I + mu Shat, whose eigenbasis makes the dual an explicit rational
  // function with nonnegative terms.  Solving the shifted system directly
  // at each mu instead loses all accuracy once mu S/delta^2 dwarfs G.
  Eigen::MatrixXd s = pd.transpose() * (m.source.weights().asDiagonal() * pd);
  s = 0.5 * (s + s.transpose());
  Eigen::MatrixXd g0 = g / (diameter * diameter);
  Eigen::MatrixXd s0 = s / (delta * delta);

  Eigen::LLT<Eigen::MatrixXd> chol0(g0);
  if (chol0.info() != Eigen::Success) {
    throw std::invalid_argument(
        "strong_modulus: graph Gram matrix not positive definite");
  }
  Eigen::MatrixXd lfac = chol0.matrixL();
  Eigen::MatrixXd half = lfac.triangularView<Eigen::Lower>().solve(s0);
  Eigen::MatrixXd shat =
      lfac.triangularView<Eigen::Lower>().solve(half.transpose()).transpose();
  shat = 0.5 * (shat + shat.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(shat);
  Eigen::VectorXd lambda = eig.eigenvalues().cwiseMax(0.0);
  Eigen::VectorXd w = eig.eigenvectors().transpose() *
                      lfac.triangularView<Eigen::Lower>().solve(v);

  auto dual_value = [&](double mu) {
    double q = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      q += w(i) * w(i) / (1.0 + mu * lambda(i));
    }
    return std::sqrt((1.0 + mu) * q);
  };

  // Coarse log grid (plus mu = 0), then golden-section refinement around
  // the best bracket.
  std::vector<double> mus;
  mus.push_back(0.0);
  for (double e = -9.0; e <= 12.0 + 1e-9; e += 0.25) {
    mus.push_back(std::pow(10.0, e));
  }
  std::size_t best_i = 0;
  double best_u = std::numeric_limits<double>::infinity();
  std::vector<double> values(mus.size());
  for (std::size_t i = 0; i < mus.size(); ++i) {
    values[i] = dual_value(mus[i]);
    if (values[i] < best_u) {
      best_u = values[i];
      best_i = i;
    }
  }
  double mu_star = mus[best_i];
  if (best_i > 0) {
    const double lo = std::log10(mus[best_i > 1 ? best_i - 1 : 1]) - 0.25;
    const double hi = std::log10(mus[std::min(best_i + 1, mus.size() - 1)]) +
                      0.25;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    double f1 = dual_value(std::pow(10.0, x1));
    double f2 = dual_value(std::pow(10.0, x2));
    for (int it = 0; it < 80; ++it) {
      if (f1 <= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - phi * (b - a);
        f1 = dual_value(std::pow(10.0, x1));
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + phi * (b - a);
        f2 = dual_value(std::pow(10.0, x2));
      }
    }
    const double refined = std::pow(10.0, 0.5 * (a + b));
    if (dual_value(refined) <= best_u) mu_star = refined;
  }

  // Primal recovery: scale A_mu^-1 v back into both ellipsoids.  Evaluated
  // at the refined multiplier and at the best grid points; the best feasible
  // value wins (protects against ill-conditioning at extreme mu).
  auto primal_at = [&](double mu, Eigen::VectorXd* coeffs) {
    Eigen::VectorXd z = w;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      z(i) /= 1.0 + mu * lambda(i);
    }
    Eigen::VectorXd c = lfac.transpose().triangularView<Eigen::Upper>().solve(
        Eigen::VectorXd(eig.eigenvectors() * z));
    const double cg = c.dot(g * c);
    const double cs = c.dot(s * c);
    if (cg <= kTiny) return 0.0;
    double t = diameter / std::sqrt(cg);
    if (cs > kTiny) t = std::min(t, delta / std::sqrt(cs));
    c *= t;
    *coeffs = c;
    return v.dot(c);
  };

  std::vector<double> candidates = {mu_star, mus[best_i]};
  if (best_i > 0) candidates.push_back(mus[best_i - 1]);
  if (best_i + 1 < mus.size()) candidates.push_back(mus[best_i + 1]);
  double best_primal = 0.0;
  Eigen::VectorXd best_coeffs = Eigen::VectorXd::Zero(k);
  for (double mu : candidates) {
    Eigen::VectorXd coeffs;
    const double value = primal_at(mu, &coeffs);
    if (value > best_primal) {
      best_primal = value;
      best_coeffs = coeffs;
    }
  }

  out.multiplier = mu_star;
  out.dual_bound = std::min(best_u, dual_value(mu_star));
  out.omega = best_primal;
  out.witness_coeffs = best_coeffs;
  out.witness = m.domain_basis * best_coeffs;
  out.gap = std::max(0.0, out.dual_bound - out.omega);
  out.converged = out.gap <= 1e-6 * std::max(out.dual_bound, 1e-12) + 1e-12;
  return out;
}

ModulusCurve modulus_curve(const DomainOperator& m, const LinearMap& p,
                           const Eigen::VectorXd& x_probe, double r,
                           const std::vector<double>& deltas,
                           double rank_tol) {
  if (deltas.empty()) {
    throw std::invalid_argument("modulus_curve: delta list must be nonempty");
  }
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] >= 0.0) || !std::isfinite(deltas[i])) {
      throw std::invalid_argument("modulus_curve: deltas must be >= 0");
    }
    if (i > 0 && deltas[i] < deltas[i - 1]) {
      throw std::invalid_argument("modulus_curve: deltas must be sorted");
    }
  }
  ModulusCurve curve;
  curve.r = r;
  curve.probe = x_probe;
  curve.deltas = deltas;
  curve.samples.reserve(deltas.size());
  for (double d : deltas) {
    curve.samples.push_back(strong_modulus(m, p, x_probe, r, d, rank_tol));
  }
  LineFit fit = fit_smallest(curve.deltas, curve.samples);
  curve.slope = fit.slope;
  curve.intercept = fit.intercept;
  return curve;
}

std::string curve_class_name(CurveClass c) {
  switch (c) {
    case CurveClass::kDecaying:
      return "decaying";
    case CurveClass::kObstructed:
      return "obstructed";
    case CurveClass::kInconclusive:
      return "inconclusive";
  }
  return "unknown";
}

CurveClass classify_curve(const ModulusCurve& curve, double tol) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("classify_curve: tol must be > 0");
  }
  if (curve.intercept <= tol) return CurveClass::kDecaying;
  double min_omega = std::numeric_limits<double>::infinity();
  for (const StrongModulusResult& s : curve.samples) {
    min_omega = std::min(min_omega, s.omega);
  }
  if (min_omega >= 10.0 * tol) return CurveClass::kObstructed;
  return CurveClass::kInconclusive;
}

double default_curve_tol(const DomainOperator& m, const LinearMap& p,
                         const Eigen::VectorXd& x_probe, double r) {
  const double scale = std::max(1.0, 2.0 * r) *
                       std::max(1.0, op_norm(p)) *
                       std::max(m.source.norm(x_probe), 1e-30);
  return 1e-9 * (restricted_op_norm(m) + 1.0) * scale;
}

ClosureResult closure_extension(const DomainOperator& m, double rank_tol) {
  const Eigen::Index n = m.source.dim();
  const Eigen::Index k = m.domain_dim();
  Eigen::MatrixXd scaled =
      m.source.sqrt_weights().asDiagonal() * m.domain_basis;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      scaled, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (k < n || sv(sv.size() - 1) <= std::max(rank_tol, 0.0) * sv(0) ||
      sv(sv.size() - 1) <= 0.0) {
    throw std::invalid_argument(
        "closure_extension: domain does not span the source space");
  }
  Eigen::MatrixXd pinv = svd.matrixV() *
                         sv.cwiseInverse().asDiagonal() *
                         svd.matrixU().transpose();
  Eigen::MatrixXd ext = m.action * pinv *
                        Eigen::MatrixXd(m.source.sqrt_weights().asDiagonal());
  ClosureResult result{LinearMap(m.source, m.target, std::move(ext)), 0.0};
  for (Eigen::Index j = 0; j < k; ++j) {
    const double dn = m.source.norm(m.domain_basis.col(j));
    const double err = m.target.norm(
        result.extension.matrix * m.domain_basis.col(j) - m.action.col(j));
    result.consistency = std::max(result.consistency, err / dn);
  }
  return result;
}

std::vector<Eigen::VectorXd> probe_set(
    const LinearMap& p, const std::optional<Eigen::VectorXd>& data_direction,
    std::size_t cap) {
  if (!p.source.same_as(p.target)) {
    throw std::invalid_argument("probe_set: projection must act on one space");
  }
  if (cap == 0) return {};
  std::vector<Eigen::VectorXd> probes;
  if (data_direction) {
    if (data_direction->size() != p.source.dim()) {
      throw std::invalid_argument("probe_set: data direction length mismatch");
    }
    const double nd = p.source.norm(*data_direction);
    if (nd > kTiny) probes.push_back(*data_direction / nd);
  }
  Eigen::MatrixXd scaled = p.source.sqrt_weights().asDiagonal() * p.matrix *
                           p.source.inv_sqrt_weights().asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled, Eigen::ComputeThinU);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  for (Eigen::Index i = 0; i < sv.size() && probes.size() < cap; ++i) {
    if (sv(i) <= kDefaultRankTol * smax || sv(i) <= 0.0) break;
    probes.push_back(p.source.inv_sqrt_weights().asDiagonal() *
                     svd.matrixU().col(i));
  }
  return probes;
}

EquivalenceReport theorem_equivalence_check(
    const DomainOperator& m, const LinearMap& p, double r,
    const std::vector<double>& deltas,
    const std::vector<Eigen::VectorXd>& x_probes, double tol,
    double rank_tol) {
  require_on_space(p, m.source, "theorem_equivalence_check");
  if (!m.source.same_as(m.target)) {
    throw std::invalid_argument(
        "theorem_equivalence_check: operator must map a space to itself");
  }

  EquivalenceReport report;
  ClosureResult closure = closure_extension(m, rank_tol);
  report.closure_consistency = closure.consistency;
  DomainOperator ext_op = DomainOperator::everywhere(closure.extension);

  const double vt = tol > 0.0 ? tol : default_verdict_tol(ext_op);
  report.tolerance = vt;
  report.extension_report = compatibility_defect(ext_op, p, vt, rank_tol);
  report.extension_compatible =
      report.extension_report.verdict != Verdict::kIncompatible;

  std::vector<Eigen::VectorXd> probes = x_probes;
  if (probes.empty()) {
    std::optional<Eigen::VectorXd> data_dir;
    if (report.extension_report.verdict == Verdict::kIncompatible &&
        report.extension_report.witness.size() > 0) {
      data_dir = p.matrix * (closure.extension.matrix *
                             report.extension_report.witness);
    }
    probes = probe_set(p, data_dir, 32);
  }

  // Both the classification tolerance and the curve-agreement floor carry
  // the ball diameter and probe norm, matching the units of omega.
  const double ext_norm = restricted_op_norm(ext_op);
  report.core_strongly_compatible = true;
  report.curves_match = true;
  for (const Eigen::VectorXd& probe : probes) {
    const double probe_norm = std::max(m.source.norm(probe), 1e-30);
    const double curve_tol = vt * std::max(1.0, 2.0 * r) * probe_norm;
    const double gap_floor =
        1e-9 * 2.0 * r * probe_norm * (ext_norm + 1.0);
    ModulusCurve core = modulus_curve(m, p, probe, r, deltas, rank_tol);
    ModulusCurve ext = modulus_curve(ext_op, p, probe, r, deltas, rank_tol);
    ProbeFinding finding;
    finding.direction = probe;
    finding.classification = classify_curve(core, curve_tol);
    finding.slope = core.slope;
    finding.intercept = core.intercept;
    finding.min_omega = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < core.samples.size(); ++i) {
      finding.min_omega = std::min(finding.min_omega, core.samples[i].omega);
      const double gap =
          std::abs(core.samples[i].omega - ext.samples[i].omega);
      finding.max_curve_gap = std::max(finding.max_curve_gap, gap);
      if (gap > 0.02 * ext.samples[i].omega + gap_floor) {
        report.curves_match = false;
      }
    }
    if (finding.classification != CurveClass::kDecaying) {
      report.core_strongly_compatible = false;
    }
    report.max_curve_gap =
        std::max(report.max_curve_gap, finding.max_curve_gap);
    report.probes.push_back(std::move(finding));
  }

  report.agree =
      report.extension_compatible == report.core_strongly_compatible;
  return report;
}

}  // namespace causalkit
