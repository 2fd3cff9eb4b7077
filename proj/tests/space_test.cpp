#include "causalkit/space.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"

using causalkit::DiscretizedSpace;
using causalkit::DomainOperator;
using causalkit::LinearMap;
using causalkit::Subspace;

TEST(DiscretizedSpace, EuclideanHasUnitWeightsAndNoCoords) {
  DiscretizedSpace s = DiscretizedSpace::euclidean(5);
  EXPECT_EQ(s.dim(), 5);
  EXPECT_FALSE(s.has_coords());
  EXPECT_DOUBLE_EQ(s.weights().minCoeff(), 1.0);
  EXPECT_DOUBLE_EQ(s.weights().maxCoeff(), 1.0);
}

TEST(DiscretizedSpace, UniformGridTrapezoidWeightsSumToLength) {
  const double extent = 3.0;
  DiscretizedSpace s = DiscretizedSpace::uniform_grid(extent, 7);
  ASSERT_TRUE(s.has_coords());
  const Eigen::VectorXd& x = *s.coords();
  EXPECT_DOUBLE_EQ(x(0), -extent);
  EXPECT_DOUBLE_EQ(x(6), extent);
  // Trapezoid rule integrates the constant 1 exactly.
  EXPECT_NEAR(s.weights().sum(), 2.0 * extent, 1e-14);
  EXPECT_NEAR(s.weights()(0), 0.5 * s.weights()(1), 1e-15);
}

TEST(DiscretizedSpace, InnerProductIsWeighted) {
  Eigen::VectorXd w(3);
  w << 2.0, 3.0, 4.0;
  DiscretizedSpace s{w};
  Eigen::VectorXd u(3), v(3);
  u << 1.0, 1.0, 1.0;
  v << 1.0, 2.0, 3.0;
  EXPECT_DOUBLE_EQ(s.inner(u, v), 2.0 + 6.0 + 12.0);
  EXPECT_DOUBLE_EQ(s.norm(u), std::sqrt(9.0));
}

TEST(DiscretizedSpace, RejectsBadInput) {
  Eigen::VectorXd w(2);
  w << 1.0, 0.0;
  EXPECT_THROW(DiscretizedSpace{w}, std::invalid_argument);
  w << 1.0, -1.0;
  EXPECT_THROW(DiscretizedSpace{w}, std::invalid_argument);
  Eigen::VectorXd good = Eigen::VectorXd::Ones(2);
  Eigen::VectorXd bad_coords(2);
  bad_coords << 1.0, 1.0;  // not strictly increasing
  EXPECT_THROW(DiscretizedSpace(good, bad_coords), std::invalid_argument);
  EXPECT_THROW(DiscretizedSpace{Eigen::VectorXd()}, std::invalid_argument);
}

TEST(DiscretizedSpace, SameAsComparesWeightsAndCoords) {
  DiscretizedSpace a = DiscretizedSpace::uniform_grid(1.0, 4);
  DiscretizedSpace b = DiscretizedSpace::uniform_grid(1.0, 4);
  DiscretizedSpace c = DiscretizedSpace::uniform_grid(2.0, 4);
  EXPECT_TRUE(a.same_as(b));
  EXPECT_FALSE(a.same_as(c));
  EXPECT_FALSE(a.same_as(DiscretizedSpace::euclidean(4)));
}

TEST(LinearMap, IdentityAndShapeChecks) {
  DiscretizedSpace s = DiscretizedSpace::euclidean(3);
  LinearMap id = LinearMap::identity(s);
  Eigen::VectorXd u(3);
  u << 1.0, 2.0, 3.0;
  EXPECT_EQ(id.apply(u), u);
  EXPECT_THROW(LinearMap(s, s, Eigen::MatrixXd::Zero(2, 3)),
               std::invalid_argument);
  EXPECT_THROW(LinearMap(s, s, Eigen::MatrixXd::Zero(3, 2)),
               std::invalid_argument);
}

TEST(DomainOperator, GraphNormMatchesDefinition) {
  testsupport::Rng rng(7);
  DiscretizedSpace s = testsupport::random_space(rng, 6);
  Eigen::MatrixXd basis = testsupport::random_matrix(rng, 6, 3);
  Eigen::MatrixXd action = testsupport::random_matrix(rng, 6, 3);
  DomainOperator op(s, s, basis, action);
  Eigen::VectorXd c = testsupport::random_vector(rng, 3);
  const double direct = std::sqrt(
      std::pow(s.norm(basis * c), 2) + std::pow(s.norm(action * c), 2));
  EXPECT_NEAR(op.graph_norm(c), direct, 1e-13);
}

TEST(DomainOperator, RejectsRankDeficientBasis) {
  DiscretizedSpace s = DiscretizedSpace::euclidean(4);
  Eigen::MatrixXd basis(4, 2);
  basis.col(0) << 1.0, 0.0, 0.0, 0.0;
  basis.col(1) << 2.0, 0.0, 0.0, 0.0;  // parallel columns
  EXPECT_THROW(DomainOperator(s, s, basis, Eigen::MatrixXd::Zero(4, 2)),
               std::invalid_argument);
}

TEST(DomainOperator, EverywhereUsesIdentityBasis) {
  DiscretizedSpace s = DiscretizedSpace::euclidean(3);
  Eigen::MatrixXd m = Eigen::MatrixXd::Random(3, 3);
  DomainOperator op = DomainOperator::everywhere(LinearMap(s, s, m));
  EXPECT_EQ(op.domain_dim(), 3);
  EXPECT_TRUE(op.domain_basis.isIdentity(0.0));
  EXPECT_EQ(op.action, m);
}

TEST(Subspace, ValidatesWeightedOrthonormality) {
  testsupport::Rng rng(11);
  DiscretizedSpace s = testsupport::random_space(rng, 5);
  // Orthonormalize two random columns in the weighted metric by hand.
  Eigen::VectorXd a = testsupport::random_vector(rng, 5);
  a /= s.norm(a);
  Eigen::VectorXd b = testsupport::random_vector(rng, 5);
  b -= s.inner(a, b) * a;
  b /= s.norm(b);
  Eigen::MatrixXd basis(5, 2);
  basis.col(0) = a;
  basis.col(1) = b;
  Subspace sub(s, basis);
  EXPECT_EQ(sub.dim(), 2);

  Eigen::MatrixXd skew = basis;
  skew.col(1) = a + b;  // not orthonormal
  EXPECT_THROW(Subspace(s, skew), std::invalid_argument);
}

TEST(Subspace, ZeroSubspace) {
  DiscretizedSpace s = DiscretizedSpace::euclidean(4);
  Subspace z = Subspace::zero(s);
  EXPECT_TRUE(z.is_zero());
  EXPECT_EQ(z.dim(), 0);
}
