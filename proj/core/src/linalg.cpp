#include "causalkit/linalg.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace causalkit {

namespace {

// Power iteration on A^T A from a handful of deterministic starts.  With a
// tied top singular value any mix of top directions still yields the right
// value, so ties speed this up rather than breaking it.
double power_sigma_max(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.cols();
  double best = 0.0;
  for (int start = 0; start < 2; ++start) {
    Eigen::VectorXd x(n);
    if (start == 0) {
      x.setOnes();
    } else {
      for (Eigen::Index i = 0; i < n; ++i) x(i) = (i % 2 == 0) ? 1.0 : -1.0;
    }
    x /= x.norm();
    double sigma = 0.0;
    for (int it = 0; it < 500; ++it) {
      Eigen::VectorXd y = a * x;
      const double ny = y.norm();
      if (ny <= 1e-300) {
        sigma = 0.0;
        break;
      }
      const double prev = sigma;
      sigma = ny;
      x = a.transpose() * y;
      const double nx = x.norm();
      if (nx <= 1e-300) break;
      x /= nx;
      if (it > 0 && std::abs(sigma - prev) <= 1e-13 * sigma) break;
    }
    best = std::max(best, sigma);
  }
  return best;
}

Eigen::MatrixXd scaled_matrix(const LinearMap& a) {
  return a.target.sqrt_weights().asDiagonal() * a.matrix *
         a.source.inv_sqrt_weights().asDiagonal();
}

bool exactly_diagonal(const Eigen::MatrixXd& b) {
  if (b.rows() != b.cols()) return false;
  for (Eigen::Index j = 0; j < b.cols(); ++j) {
    for (Eigen::Index i = 0; i < b.rows(); ++i) {
      if (i != j && b(i, j) != 0.0) return false;
    }
  }
  return true;
}

}  // namespace

double spectral_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  if (!m.allFinite()) {
    throw std::invalid_argument("spectral_norm: non-finite entries");
  }
  if (m.rows() <= 128 && m.cols() <= 128) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues()(0);
  }
  return power_sigma_max(m.rows() >= m.cols() ? m : m.transpose());
}

double op_norm(const LinearMap& a) { return spectral_norm(scaled_matrix(a)); }

LinearMap adjoint(const LinearMap& a) {
  Eigen::MatrixXd adj = a.source.weights().cwiseInverse().asDiagonal() *
                        a.matrix.transpose() *
                        a.target.weights().asDiagonal();
  return LinearMap(a.target, a.source, std::move(adj));
}

Subspace null_space(const LinearMap& a, double tol) {
  if (tol < 0.0) throw std::invalid_argument("null_space: tol must be >= 0");
  Eigen::MatrixXd scaled = scaled_matrix(a);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol * smax && sv(i) > 0.0) ++rank;
  }
  const Eigen::Index k = a.source.dim() - rank;
  Eigen::MatrixXd basis =
      a.source.inv_sqrt_weights().asDiagonal() *
      svd.matrixV().rightCols(k);
  return Subspace(a.source, std::move(basis));
}

Containment subspace_contained(const Subspace& a, const Subspace& b,
                               double tol) {
  if (!a.ambient.same_as(b.ambient)) {
    throw std::invalid_argument("subspace_contained: ambient spaces differ");
  }
  if (tol < 0.0) {
    throw std::invalid_argument("subspace_contained: tol must be >= 0");
  }
  if (a.is_zero()) return {true, 0.0};
  const Eigen::VectorXd& sw = a.ambient.sqrt_weights();
  Eigen::MatrixXd sa = sw.asDiagonal() * a.basis;
  if (b.is_zero()) {
    const double defect = spectral_norm(sa);
    return {defect <= tol, defect};
  }
  Eigen::MatrixXd sb = sw.asDiagonal() * b.basis;
  Eigen::MatrixXd residual = sa - sb * (sb.transpose() * sa);
  const double defect = spectral_norm(residual);
  return {defect <= tol, defect};
}

Eigen::MatrixXd graph_gram(const DomainOperator& m) {
  const Eigen::MatrixXd dw =
      m.source.weights().asDiagonal() * m.domain_basis;
  const Eigen::MatrixXd aw = m.target.weights().asDiagonal() * m.action;
  Eigen::MatrixXd g = m.domain_basis.transpose() * dw +
                      m.action.transpose() * aw;
  return 0.5 * (g + g.transpose());
}

PencilEig max_eig_pencil(const Eigen::MatrixXd& h, const Eigen::MatrixXd& g) {
  if (h.rows() != h.cols() || g.rows() != g.cols() || h.rows() != g.rows()) {
    throw std::invalid_argument("max_eig_pencil: shape mismatch");
  }
  if (h.size() == 0) throw std::invalid_argument("max_eig_pencil: empty pencil");
  Eigen::MatrixXd hs = 0.5 * (h + h.transpose());
  Eigen::MatrixXd gs = 0.5 * (g + g.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(gs);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("max_eig_pencil: G is not positive definite");
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(hs, gs);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("max_eig_pencil: eigensolver failed");
  }
  const Eigen::Index last = hs.rows() - 1;
  PencilEig out;
  out.value = solver.eigenvalues()(last);
  out.witness = solver.eigenvectors().col(last);
  return out;
}

double restricted_op_norm(const DomainOperator& m) {
  // max |Ac|^2 / |Dc|^2 over coefficients, as a symmetric pencil.
  Eigen::MatrixXd num = m.action.transpose() *
                        (m.target.weights().asDiagonal() * m.action);
  Eigen::MatrixXd den = m.domain_basis.transpose() *
                        (m.source.weights().asDiagonal() * m.domain_basis);
  PencilEig top = max_eig_pencil(num, den);
  return std::sqrt(std::max(0.0, top.value));
}

Eigen::MatrixXd metric_kernel_basis(const Eigen::MatrixXd& b,
                                    const Eigen::VectorXd& target_weights,
                                    const Eigen::MatrixXd& g,
                                    const Eigen::LLT<Eigen::MatrixXd>& chol,
                                    double rel_tol) {
  if (b.cols() != g.rows()) {
    throw std::invalid_argument("metric_kernel_basis: shape mismatch");
  }
  if (rel_tol < 0.0) {
    throw std::invalid_argument("metric_kernel_basis: rel_tol must be >= 0");
  }
  const Eigen::Index k = b.cols();

  if (exactly_diagonal(b)) {
    // The exact kernel of a diagonal matrix is spanned by the coordinates
    // with zero diagonal entry, independent of any metric.  Valid as the
    // thresholded kernel whenever the nonzero entries sit well above the
    // tolerance (clean gap), which covers the cutoff-projection workloads.
    double max_abs = 0.0;
    double min_nonzero = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < k; ++i) {
      const double v = std::abs(b(i, i));
      max_abs = std::max(max_abs, v);
      if (v > 0.0) min_nonzero = std::min(min_nonzero, v);
    }
    const bool clean_gap =
        max_abs == 0.0 || min_nonzero >= 1e-6 * max_abs;
    if (clean_gap && rel_tol <= 1e-8) {
      std::vector<Eigen::Index> zero_idx;
      for (Eigen::Index i = 0; i < k; ++i) {
        if (b(i, i) == 0.0) zero_idx.push_back(i);
      }
      const Eigen::Index p = static_cast<Eigen::Index>(zero_idx.size());
      if (p == 0) return Eigen::MatrixXd(k, 0);
      Eigen::MatrixXd gzz(p, p);
      for (Eigen::Index c = 0; c < p; ++c) {
        for (Eigen::Index r = 0; r < p; ++r) {
          gzz(r, c) = g(zero_idx[r], zero_idx[c]);
        }
      }
      Eigen::LLT<Eigen::MatrixXd> gllt(gzz);
      if (gllt.info() != Eigen::Success) {
        throw std::runtime_error("metric_kernel_basis: metric block not s.p.d.");
      }
      // Columns E L^-T for E the coordinate selection, so K^T G K = I.
      Eigen::MatrixXd coeff = gllt.matrixL()
                                  .transpose()
                                  .solve(Eigen::MatrixXd::Identity(p, p));
      Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(k, p);
      for (Eigen::Index r = 0; r < p; ++r) {
        basis.row(zero_idx[r]) = coeff.row(r);
      }
      return basis;
    }
  }

  // Generic path: isometries to plain coordinates on both sides, SVD there.
  Eigen::MatrixXd scaled = target_weights.array().sqrt().matrix().asDiagonal() * b;
  Eigen::MatrixXd lchol = chol.matrixL();
  Eigen::MatrixXd transformed =
      lchol.triangularView<Eigen::Lower>()
          .solve(scaled.transpose())
          .transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(transformed, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rel_tol * smax && sv(i) > 0.0) ++rank;
  }
  const Eigen::Index p = k - rank;
  if (p == 0) return Eigen::MatrixXd(k, 0);
  Eigen::MatrixXd v0 = svd.matrixV().rightCols(p);
  return lchol.transpose().triangularView<Eigen::Upper>().solve(v0);
}

}  // namespace causalkit
