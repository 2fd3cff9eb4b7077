#pragma once

#include <Eigen/Dense>
#include <optional>

namespace causalkit {

// Finite-dimensional real vector space with a weighted Euclidean inner
// product <u, v> = u' diag(weights) v.  Spaces discretizing a function space
// on an interval also carry the grid coordinates; purely algebraic spaces
// (plain R^n) leave coords empty.
class DiscretizedSpace {
 public:
  DiscretizedSpace(Eigen::VectorXd weights,
                   std::optional<Eigen::VectorXd> coords = std::nullopt);

  // Plain R^n with unit weights and no coordinates.
  static DiscretizedSpace euclidean(Eigen::Index dim);

  // Uniform grid of `dim` points on [-extent, extent] with trapezoid
  // quadrature weights, so the norm approximates the L2 norm.
  static DiscretizedSpace uniform_grid(double extent, Eigen::Index dim);

  Eigen::Index dim() const { return weights_.size(); }
  const Eigen::VectorXd& weights() const { return weights_; }
  const std::optional<Eigen::VectorXd>& coords() const { return coords_; }
  bool has_coords() const { return coords_.has_value(); }

  // Componentwise sqrt(weights) and its inverse; precomputed because the
  // isometry to plain R^n (u -> sqrt(W) u) is used throughout.
  const Eigen::VectorXd& sqrt_weights() const { return sqrt_weights_; }
  const Eigen::VectorXd& inv_sqrt_weights() const { return inv_sqrt_weights_; }

  double inner(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;
  double norm(const Eigen::VectorXd& u) const;

  bool same_as(const DiscretizedSpace& other) const;

 private:
  Eigen::VectorXd weights_;
  std::optional<Eigen::VectorXd> coords_;
  Eigen::VectorXd sqrt_weights_;
  Eigen::VectorXd inv_sqrt_weights_;
};

// Everywhere-defined linear map between two spaces, stored densely.
struct LinearMap {
  DiscretizedSpace source;
  DiscretizedSpace target;
  Eigen::MatrixXd matrix;

  LinearMap(DiscretizedSpace source_, DiscretizedSpace target_,
            Eigen::MatrixXd matrix_);

  static LinearMap identity(const DiscretizedSpace& space);

  Eigen::Index rows() const { return matrix.rows(); }
  Eigen::Index cols() const { return matrix.cols(); }
  Eigen::VectorXd apply(const Eigen::VectorXd& u) const { return matrix * u; }
};

// Linear operator defined on a subspace of `source`: the domain is
// span(domain_basis) and the operator sends domain_basis * c to action * c.
// domain_basis must have full column rank; it need not be orthonormal.
struct DomainOperator {
  DiscretizedSpace source;
  DiscretizedSpace target;
  Eigen::MatrixXd domain_basis;  // source.dim() x k
  Eigen::MatrixXd action;       // target.dim() x k

  DomainOperator(DiscretizedSpace source_, DiscretizedSpace target_,
                 Eigen::MatrixXd domain_basis_, Eigen::MatrixXd action_);

  // Everywhere-defined operator viewed as a DomainOperator whose domain
  // basis is the identity.
  static DomainOperator everywhere(const LinearMap& map);

  Eigen::Index domain_dim() const { return domain_basis.cols(); }

  // Graph norm sqrt(|u|^2 + |Mu|^2) of the domain element with coefficient
  // vector c, i.e. of u = domain_basis * c.
  double graph_norm(const Eigen::VectorXd& c) const;
};

// Subspace of an ambient space, stored as a weighted-orthonormal basis
// (basis' W basis = I).  Zero columns means the zero subspace.
struct Subspace {
  DiscretizedSpace ambient;
  Eigen::MatrixXd basis;  // ambient.dim() x k, possibly k = 0

  Subspace(DiscretizedSpace ambient_, Eigen::MatrixXd basis_);

  static Subspace zero(const DiscretizedSpace& ambient);

  Eigen::Index dim() const { return basis.cols(); }
  bool is_zero() const { return basis.cols() == 0; }
};

}  // namespace causalkit
