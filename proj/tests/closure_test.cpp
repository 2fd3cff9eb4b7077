#include <gtest/gtest.h>

#include <cmath>

#include "causalkit/causality.hpp"
#include "causalkit/hermite.hpp"
#include "causalkit/linalg.hpp"
#include "causalkit/resolution.hpp"
#include "test_support.hpp"

using causalkit::ClosureResult;
using causalkit::closure_extension;
using causalkit::CurveClass;
using causalkit::cutoff_resolution;
using causalkit::DiscretizedSpace;
using causalkit::DomainOperator;
using causalkit::EquivalenceReport;
using causalkit::LinearMap;
using causalkit::shift_operator;
using causalkit::theorem_equivalence_check;
using causalkit::truncation_resolution;
using causalkit::Verdict;

TEST(ClosureExtension, FullDomainRoundTrips) {
  testsupport::Rng rng(51);
  DiscretizedSpace s = testsupport::random_space(rng, 6);
  Eigen::MatrixXd mat = testsupport::random_matrix(rng, 6, 6);
  DomainOperator m = DomainOperator::everywhere(LinearMap(s, s, mat));
  ClosureResult res = closure_extension(m);
  EXPECT_LT((res.extension.matrix - mat).norm(), 1e-12 * mat.norm());
  EXPECT_LT(res.consistency, 1e-12);
}

TEST(ClosureExtension, InvertibleBasisRecoversTheFullOperator) {
  testsupport::Rng rng(52);
  DiscretizedSpace s = testsupport::random_space(rng, 7);
  Eigen::MatrixXd full = testsupport::random_matrix(rng, 7, 7);
  Eigen::MatrixXd basis = testsupport::random_invertible(rng, 7);
  DomainOperator m(s, s, basis, full * basis);
  ClosureResult res = closure_extension(m);
  EXPECT_LT((res.extension.matrix - full).norm(), 1e-10 * full.norm());
  EXPECT_LT(res.consistency, 1e-10);
}

TEST(ClosureExtension, HermiteSpanExtendsTheShift) {
  // On the span of a decaying orthonormal basis the least-squares extension
  // of the restricted shift reproduces the shift on every basis column.
  DiscretizedSpace s = DiscretizedSpace::uniform_grid(10.0, 256);
  causalkit::HermiteBasis basis = causalkit::hermite_basis(s, 8, 1e-10);
  LinearMap tau = shift_operator(s, 1.0);

  // Pad the span to the whole space so the closure is defined: append the
  // weighted-orthogonal complement.
  const Eigen::Index n = s.dim();
  const Eigen::Index k = basis.columns.cols();
  Eigen::MatrixXd scaled =
      s.sqrt_weights().asDiagonal() * basis.columns;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled, Eigen::ComputeFullU);
  Eigen::MatrixXd complement =
      s.inv_sqrt_weights().asDiagonal() * svd.matrixU().rightCols(n - k);
  Eigen::MatrixXd domain(n, n);
  domain.leftCols(k) = basis.columns;
  domain.rightCols(n - k) = complement;
  DomainOperator m(s, s, domain, tau.matrix * domain);

  ClosureResult res = closure_extension(m);
  EXPECT_LT(res.consistency, 1e-9);
  EXPECT_LT((res.extension.matrix - tau.matrix).norm(),
            1e-8 * tau.matrix.norm());
}

TEST(ClosureExtension, RejectsNonSpanningDomain) {
  DiscretizedSpace s = DiscretizedSpace::euclidean(5);
  Eigen::MatrixXd basis(5, 2);
  basis.setZero();
  basis(0, 0) = 1.0;
  basis(1, 1) = 1.0;
  DomainOperator m(s, s, basis, basis);
  EXPECT_THROW(closure_extension(m), std::invalid_argument);
}

TEST(TheoremHarness, CausalInstanceAgreesOnBothSides) {
  testsupport::Rng rng(53);
  DiscretizedSpace s = testsupport::random_space(rng, 8);
  Eigen::MatrixXd full = testsupport::random_lower_triangular(rng, 8);
  Eigen::MatrixXd basis = testsupport::random_invertible(rng, 8);
  DomainOperator m(s, s, basis, full * basis);
  LinearMap p = truncation_resolution(s, {3.0}).at(3.0);
  std::vector<double> deltas = {1e-4, 1e-3, 1e-2, 0.1};

  EquivalenceReport rep =
      theorem_equivalence_check(m, p, 1.0, deltas, {}, 0.0);
  EXPECT_TRUE(rep.agree);
  EXPECT_TRUE(rep.extension_compatible);
  EXPECT_TRUE(rep.core_strongly_compatible);
  EXPECT_TRUE(rep.curves_match);
  EXPECT_EQ(rep.extension_report.verdict, Verdict::kCompatible);
  for (const causalkit::ProbeFinding& probe : rep.probes) {
    EXPECT_EQ(probe.classification, CurveClass::kDecaying);
  }
}

TEST(TheoremHarness, NonCausalInstanceAgreesOnBothSides) {
  const Eigen::Index n = 12;
  Eigen::VectorXd coords(n);
  for (Eigen::Index i = 0; i < n; ++i) coords(i) = static_cast<double>(i);
  DiscretizedSpace s(Eigen::VectorXd::Ones(n), coords);
  LinearMap tau = shift_operator(s, 1.0);
  DomainOperator m = DomainOperator::everywhere(tau);
  LinearMap p = cutoff_resolution(s, {5.5}).at(5.5);
  std::vector<double> deltas = {1e-4, 1e-3, 1e-2, 0.1};

  EquivalenceReport rep =
      theorem_equivalence_check(m, p, 1.0, deltas, {}, 0.0);
  EXPECT_TRUE(rep.agree);
  EXPECT_FALSE(rep.extension_compatible);
  EXPECT_FALSE(rep.core_strongly_compatible);
  EXPECT_EQ(rep.extension_report.verdict, Verdict::kIncompatible);
  // At least one probe must witness the obstruction.
  bool obstructed = false;
  for (const causalkit::ProbeFinding& probe : rep.probes) {
    if (probe.classification == CurveClass::kObstructed) obstructed = true;
  }
  EXPECT_TRUE(obstructed);
  // Core and extension curves coincide for an everywhere-defined operator.
  EXPECT_TRUE(rep.curves_match);
  EXPECT_LT(rep.max_curve_gap, 1e-9);
}

TEST(TheoremHarness, ScaledIdentityIsCausal) {
  DiscretizedSpace s = DiscretizedSpace::uniform_grid(2.0, 16);
  Eigen::MatrixXd mat = 3.0 * Eigen::MatrixXd::Identity(16, 16);
  DomainOperator m = DomainOperator::everywhere(LinearMap(s, s, mat));
  LinearMap p = cutoff_resolution(s, {0.1}).at(0.1);
  EquivalenceReport rep = theorem_equivalence_check(
      m, p, 2.0, {1e-5, 1e-4, 1e-3, 1e-2}, {}, 0.0);
  EXPECT_TRUE(rep.agree);
  EXPECT_TRUE(rep.extension_compatible);
  EXPECT_TRUE(rep.core_strongly_compatible);
}

TEST(TheoremHarness, RestrictedDomainCurvesTrackTheExtension) {
  testsupport::Rng rng(54);
  for (int trial = 0; trial < 6; ++trial) {
    DiscretizedSpace s = testsupport::random_space(rng, 7);
    Eigen::MatrixXd full = (trial % 2 == 0)
                               ? testsupport::random_lower_triangular(rng, 7)
                               : testsupport::random_noncausal(rng, 7);
    Eigen::MatrixXd basis = testsupport::random_invertible(rng, 7);
    DomainOperator m(s, s, basis, full * basis);
    LinearMap p = truncation_resolution(s, {2.0}).at(2.0);
    EquivalenceReport rep = theorem_equivalence_check(
        m, p, 1.0, {1e-4, 1e-3, 1e-2, 0.1, 0.5}, {}, 0.0);
    EXPECT_TRUE(rep.agree) << "trial " << trial;
    EXPECT_TRUE(rep.curves_match) << "trial " << trial;
    EXPECT_EQ(rep.extension_compatible, trial % 2 == 0) << "trial " << trial;
  }
}
