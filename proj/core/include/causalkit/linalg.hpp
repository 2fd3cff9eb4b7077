#pragma once

#include <Eigen/Dense>

#include "causalkit/space.hpp"

namespace causalkit {

// Relative singular-value threshold below which a direction counts as part
// of a null space.  Passing 0 keeps only exactly-zero singular values.
inline constexpr double kDefaultRankTol = 1e-10;

// Spectral norm (largest singular value) of a plain matrix.  Exact SVD for
// small matrices, power iteration on the Gram matrix above the size cutoff
// (relative accuracy ~1e-12, ample for defect thresholds).
double spectral_norm(const Eigen::MatrixXd& m);

// Operator norm of A between its weighted spaces,
// max |Av|_target / |v|_source.
double op_norm(const LinearMap& a);

// Adjoint w.r.t. the weighted inner products: A' = W_source^-1 A^T W_target,
// mapping target back to source.
LinearMap adjoint(const LinearMap& a);

// Weighted-orthonormal basis of { v : Av = 0 } at relative tolerance `tol`
// (singular values <= tol * sigma_max count as zero).
Subspace null_space(const LinearMap& a, double tol = kDefaultRankTol);

struct Containment {
  bool contained;
  double defect;  // norm of the component of A sticking out of B
};

// Is span(A) inside span(B)?  The defect is ||(I - Pi_B) Pi_A|| in the
// weighted operator norm; contained iff defect <= tol.
Containment subspace_contained(const Subspace& a, const Subspace& b,
                               double tol);

// Gram matrix of the graph inner product on the coefficient space of M:
// G = D^T W_source D + A^T W_target A, so c^T G c = |u|^2 + |Mu|^2 for
// u = domain_basis c.
Eigen::MatrixXd graph_gram(const DomainOperator& m);

struct PencilEig {
  double value;
  Eigen::VectorXd witness;  // G-norm-1 eigenvector
};

// Largest eigenvalue of H c = lambda G c for symmetric H and s.p.d. G,
// with witness normalized to witness^T G witness = 1.
PencilEig max_eig_pencil(const Eigen::MatrixXd& h, const Eigen::MatrixXd& g);

// Operator norm of M restricted to its domain,
// max |Mu|_target / |u|_source over u in span(domain_basis).
double restricted_op_norm(const DomainOperator& m);

// G-orthonormal basis of the null space of b (rows measured in the diagonal
// target_weights norm, coefficient space measured by the s.p.d. metric G
// with Cholesky factorization chol).  rel_tol as in null_space.  When b is
// exactly diagonal with a clean zero/nonzero gap the kernel is read off the
// zero entries directly (the exact kernel does not depend on the metrics);
// otherwise a dense SVD in transformed coordinates is used.
Eigen::MatrixXd metric_kernel_basis(const Eigen::MatrixXd& b,
                                    const Eigen::VectorXd& target_weights,
                                    const Eigen::MatrixXd& g,
                                    const Eigen::LLT<Eigen::MatrixXd>& chol,
                                    double rel_tol);

}  // namespace causalkit
