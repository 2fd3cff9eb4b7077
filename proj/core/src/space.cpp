#include "causalkit/space.hpp"

#include <cmath>
#include <stdexcept>

namespace causalkit {

namespace {

void check_finite(const Eigen::MatrixXd& m, const char* what) {
  if (!m.allFinite()) {
    throw std::invalid_argument(std::string(what) + " has non-finite entries");
  }
}

}  // namespace

DiscretizedSpace::DiscretizedSpace(Eigen::VectorXd weights,
                                   std::optional<Eigen::VectorXd> coords)
    : weights_(std::move(weights)), coords_(std::move(coords)) {
  if (weights_.size() == 0) {
    throw std::invalid_argument("space must have positive dimension");
  }
  check_finite(weights_, "weights");
  if ((weights_.array() <= 0.0).any()) {
    throw std::invalid_argument("weights must be strictly positive");
  }
  if (coords_) {
    if (coords_->size() != weights_.size()) {
      throw std::invalid_argument("coords and weights must have equal length");
    }
    check_finite(*coords_, "coords");
    for (Eigen::Index i = 1; i < coords_->size(); ++i) {
      if ((*coords_)(i) <= (*coords_)(i - 1)) {
        throw std::invalid_argument("coords must be strictly increasing");
      }
    }
  }
  sqrt_weights_ = weights_.array().sqrt();
  inv_sqrt_weights_ = sqrt_weights_.array().inverse();
}

DiscretizedSpace DiscretizedSpace::euclidean(Eigen::Index dim) {
  return DiscretizedSpace(Eigen::VectorXd::Ones(dim));
}

DiscretizedSpace DiscretizedSpace::uniform_grid(double extent,
                                                Eigen::Index dim) {
  if (!(extent > 0.0) || !std::isfinite(extent)) {
    throw std::invalid_argument("grid extent must be positive and finite");
  }
  if (dim < 2) {
    throw std::invalid_argument("grid needs at least two points");
  }
  Eigen::VectorXd coords =
      Eigen::VectorXd::LinSpaced(dim, -extent, extent);
  const double step = 2.0 * extent / static_cast<double>(dim - 1);
  Eigen::VectorXd weights = Eigen::VectorXd::Constant(dim, step);
  weights(0) = 0.5 * step;
  weights(dim - 1) = 0.5 * step;
  return DiscretizedSpace(std::move(weights), std::move(coords));
}

double DiscretizedSpace::inner(const Eigen::VectorXd& u,
                               const Eigen::VectorXd& v) const {
  if (u.size() != dim() || v.size() != dim()) {
    throw std::invalid_argument("vector length does not match space dimension");
  }
  return (u.array() * weights_.array() * v.array()).sum();
}

double DiscretizedSpace::norm(const Eigen::VectorXd& u) const {
  if (u.size() != dim()) {
    throw std::invalid_argument("vector length does not match space dimension");
  }
  return std::sqrt((u.array().square() * weights_.array()).sum());
}

bool DiscretizedSpace::same_as(const DiscretizedSpace& other) const {
  if (dim() != other.dim()) return false;
  if (weights_ != other.weights_) return false;
  if (coords_.has_value() != other.coords_.has_value()) return false;
  if (coords_ && *coords_ != *other.coords_) return false;
  return true;
}

LinearMap::LinearMap(DiscretizedSpace source_, DiscretizedSpace target_,
                     Eigen::MatrixXd matrix_)
    : source(std::move(source_)),
      target(std::move(target_)),
      matrix(std::move(matrix_)) {
  if (matrix.rows() != target.dim() || matrix.cols() != source.dim()) {
    throw std::invalid_argument("matrix shape does not match spaces");
  }
  check_finite(matrix, "operator matrix");
}

LinearMap LinearMap::identity(const DiscretizedSpace& space) {
  return LinearMap(space, space,
                   Eigen::MatrixXd::Identity(space.dim(), space.dim()));
}

DomainOperator::DomainOperator(DiscretizedSpace source_,
                               DiscretizedSpace target_,
                               Eigen::MatrixXd domain_basis_,
                               Eigen::MatrixXd action_)
    : source(std::move(source_)),
      target(std::move(target_)),
      domain_basis(std::move(domain_basis_)),
      action(std::move(action_)) {
  if (domain_basis.rows() != source.dim()) {
    throw std::invalid_argument("domain basis rows must match source dimension");
  }
  if (action.rows() != target.dim()) {
    throw std::invalid_argument("action rows must match target dimension");
  }
  if (domain_basis.cols() != action.cols()) {
    throw std::invalid_argument("domain basis and action need equal column counts");
  }
  if (domain_basis.cols() == 0) {
    throw std::invalid_argument("domain must be nontrivial");
  }
  check_finite(domain_basis, "domain basis");
  check_finite(action, "action");
  // Full column rank check in the weighted geometry.
  Eigen::MatrixXd scaled =
      source.sqrt_weights().asDiagonal() * domain_basis;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 1e-10 * sv(0)) {
    throw std::invalid_argument("domain basis is numerically rank deficient");
  }
}

DomainOperator DomainOperator::everywhere(const LinearMap& map) {
  return DomainOperator(
      map.source, map.target,
      Eigen::MatrixXd::Identity(map.source.dim(), map.source.dim()),
      map.matrix);
}

double DomainOperator::graph_norm(const Eigen::VectorXd& c) const {
  if (c.size() != domain_dim()) {
    throw std::invalid_argument("coefficient length does not match domain");
  }
  const double a = source.norm(domain_basis * c);
  const double b = target.norm(action * c);
  return std::sqrt(a * a + b * b);
}

Subspace::Subspace(DiscretizedSpace ambient_, Eigen::MatrixXd basis_)
    : ambient(std::move(ambient_)), basis(std::move(basis_)) {
  if (basis.size() > 0 && basis.rows() != ambient.dim()) {
    throw std::invalid_argument("basis rows must match ambient dimension");
  }
  if (basis.cols() > 0) {
    check_finite(basis, "subspace basis");
    Eigen::MatrixXd gram =
        basis.transpose() * ambient.weights().asDiagonal() * basis;
    const double dev =
        (gram - Eigen::MatrixXd::Identity(basis.cols(), basis.cols()))
            .cwiseAbs()
            .maxCoeff();
    if (dev > 1e-8) {
      throw std::invalid_argument("subspace basis is not weighted-orthonormal");
    }
  } else if (basis.rows() != ambient.dim()) {
    // Normalize the representation of the zero subspace.
    basis.resize(ambient.dim(), 0);
  }
}

Subspace Subspace::zero(const DiscretizedSpace& ambient) {
  return Subspace(ambient, Eigen::MatrixXd(ambient.dim(), 0));
}

}  // namespace causalkit
