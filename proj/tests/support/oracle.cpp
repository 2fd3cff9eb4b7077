#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace testsupport {

namespace {

// u' diag(w) v written out longhand.
double weighted_dot(const Eigen::VectorXd& w, const Eigen::VectorXd& u,
                    const Eigen::VectorXd& v) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) acc += w(i) * u(i) * v(i);
  return acc;
}

double graph_quad(const causalkit::DomainOperator& m,
                  const Eigen::VectorXd& c) {
  const Eigen::VectorXd u = m.domain_basis * c;
  const Eigen::VectorXd mu = m.action * c;
  return weighted_dot(m.source.weights(), u, u) +
         weighted_dot(m.target.weights(), mu, mu);
}

}  // namespace

double modulus_oracle(const causalkit::DomainOperator& m,
                      const causalkit::LinearMap& p,
                      const Eigen::VectorXd& probe, double r, double delta,
                      Rng& rng, int budget) {
  const Eigen::Index k = m.domain_dim();
  const Eigen::MatrixXd pd = p.matrix * m.domain_basis;
  const Eigen::MatrixXd pa = p.matrix * m.action;
  const Eigen::VectorXd& tw = m.target.weights();

  const auto objective = [&](const Eigen::VectorXd& c) {
    const Eigen::VectorXd pmu = pa * c;
    return std::abs(weighted_dot(tw, pmu, probe));
  };
  const auto past_quad = [&](const Eigen::VectorXd& c) {
    const Eigen::VectorXd pu = pd * c;
    return weighted_dot(m.source.weights(), pu, pu);
  };
  // Largest feasible multiple of direction c; the objective is linear, so
  // the optimum sits on the boundary.
  const auto boundary_scale = [&](const Eigen::VectorXd& c) {
    const double g = graph_quad(m, c);
    if (g <= 0.0) return 0.0;
    double t = 2.0 * r / std::sqrt(g);
    const double s = past_quad(c);
    if (s > 0.0) t = std::min(t, delta / std::sqrt(s));
    return t;
  };

  // The kernel of P D (rank-revealing factorization, independent of the
  // library's own null-space code) spans the directions the past constraint
  // leaves free.  For small delta the feasible region is a thin slab around
  // that kernel, so good candidates are kernel directions plus a small
  // transverse part; the mixture weight is drawn log-uniform to cover both
  // regimes.
  Eigen::FullPivLU<Eigen::MatrixXd> lu(pd);
  lu.setThreshold(1e-10);
  const Eigen::Index kk = lu.dimensionOfKernel();
  Eigen::MatrixXd kernel = lu.kernel();
  if (delta == 0.0 && kk == 0) return 0.0;

  std::uniform_real_distribution<double> log_sigma(-3.0, 0.5);
  const auto propose = [&](int counter) -> Eigen::VectorXd {
    if (delta == 0.0) return kernel * random_vector(rng, kk);
    if (kk > 0 && counter % 2 == 0) {
      const double sigma = std::pow(10.0, log_sigma(rng));
      return kernel * random_vector(rng, kk) + sigma * random_vector(rng, k);
    }
    return random_vector(rng, k);
  };
  const auto value_of = [&](const Eigen::VectorXd& c) {
    return boundary_scale(c) * objective(c);
  };

  // The objective times the boundary scale is invariant under positive
  // rescaling, so the search runs over unit directions.
  Eigen::VectorXd best_dir = Eigen::VectorXd::Ones(k).normalized();
  double best_value = value_of(best_dir);
  int used = 1;
  const int explore = (budget * 3) / 5;
  while (used < explore) {
    Eigen::VectorXd c = propose(used);
    ++used;
    const double nc = c.norm();
    if (nc <= 0.0) continue;
    c /= nc;
    const double value = value_of(c);
    if (value > best_value) {
      best_value = value;
      best_dir = c;
    }
  }

  // Shrinking perturbations of the incumbent direction.
  double step = 0.5;
  while (used < budget) {
    Eigen::VectorXd c = best_dir + step * propose(used);
    ++used;
    const double nc = c.norm();
    if (nc <= 0.0) continue;
    c /= nc;
    const double value = value_of(c);
    if (value > best_value) {
      best_value = value;
      best_dir = c;
    } else {
      step = std::max(step * 0.9995, 1e-7);
    }
  }
  return best_value;
}

double defect_oracle(const causalkit::DomainOperator& m,
                     const causalkit::LinearMap& p, Rng& rng, int budget) {
  const Eigen::MatrixXd pd = p.matrix * m.domain_basis;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(pd);
  lu.setThreshold(1e-10);
  if (lu.dimensionOfKernel() == 0) return 0.0;
  const Eigen::MatrixXd kernel = lu.kernel();

  const Eigen::MatrixXd pa = p.matrix * m.action;
  const Eigen::VectorXd& tw = m.target.weights();
  const auto score = [&](const Eigen::VectorXd& z) {
    const Eigen::VectorXd c = kernel * z;
    const double g = graph_quad(m, c);
    if (g <= 0.0) return 0.0;
    const Eigen::VectorXd pmu = pa * c;
    return std::sqrt(weighted_dot(tw, pmu, pmu) / g);
  };

  Eigen::VectorXd best = random_vector(rng, kernel.cols());
  double best_value = score(best);
  int used = 1;
  const int explore = budget / 2;
  while (used < explore) {
    Eigen::VectorXd z = random_vector(rng, kernel.cols());
    ++used;
    const double value = score(z);
    if (value > best_value) {
      best_value = value;
      best = z;
    }
  }
  double step = 1.0;
  while (used < budget) {
    Eigen::VectorXd z = best + step * random_vector(rng, kernel.cols());
    ++used;
    const double value = score(z);
    if (value > best_value) {
      best_value = value;
      best = z;
    } else {
      step = std::max(step * 0.9999, 1e-6);
    }
  }
  return best_value;
}

}  // namespace testsupport
