#include "causalkit/causality.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "causalkit/hermite.hpp"
#include "causalkit/linalg.hpp"
#include "causalkit/resolution.hpp"
#include "oracle.hpp"
#include "test_support.hpp"

using causalkit::AggregateCausality;
using causalkit::CausalityReport;
using causalkit::compatibility_defect;
using causalkit::cutoff_resolution;
using causalkit::DiscretizedSpace;
using causalkit::DomainOperator;
using causalkit::factorization_defect;
using causalkit::is_causal;
using causalkit::LinearMap;
using causalkit::pq_compatibility_defect;
using causalkit::shift_operator;
using causalkit::truncation_resolution;
using causalkit::Verdict;

namespace {

DomainOperator everywhere(const DiscretizedSpace& s, Eigen::MatrixXd m) {
  return DomainOperator::everywhere(LinearMap(s, s, std::move(m)));
}

}  // namespace

// On an unweighted grid with unit step, shifting toward earlier times by
// one step has defect exactly 1/sqrt(2) at interior cutoffs: the optimal
// witness is a single spike just past the cutoff, with graph norm
// sqrt(1 + 1) times its size while its image lands entirely in the past.
TEST(CompatibilityDefect, UpShiftDefectIsInverseSqrtTwo) {
  const Eigen::Index n = 16;
  Eigen::VectorXd coords(n);
  for (Eigen::Index i = 0; i < n; ++i) coords(i) = static_cast<double>(i);
  DiscretizedSpace s(Eigen::VectorXd::Ones(n), coords);
  LinearMap tau = shift_operator(s, 1.0);
  LinearMap p = cutoff_resolution(s, {7.5}).at(7.5);
  CausalityReport report =
      compatibility_defect(DomainOperator::everywhere(tau), p, 0.0);
  EXPECT_EQ(report.verdict, Verdict::kIncompatible);
  EXPECT_NEAR(report.defect0, 1.0 / std::sqrt(2.0), 1e-12);

  // Witness invariants: unit graph norm, vanishing past, image size equal
  // to the defect.
  ASSERT_GT(report.witness.size(), 0);
  const Eigen::VectorXd& u = report.witness;
  const Eigen::VectorXd mu = tau.apply(u);
  const double graph =
      std::sqrt(std::pow(s.norm(u), 2) + std::pow(s.norm(mu), 2));
  EXPECT_NEAR(graph, 1.0, 1e-10);
  EXPECT_LT(s.norm(p.apply(u)), 1e-10);
  EXPECT_NEAR(s.norm(p.apply(mu)), report.defect0, 1e-10);
}

TEST(CompatibilityDefect, UpShiftAgreesWithSamplingOracle) {
  const Eigen::Index n = 10;
  Eigen::VectorXd coords(n);
  for (Eigen::Index i = 0; i < n; ++i) coords(i) = static_cast<double>(i);
  DiscretizedSpace s(Eigen::VectorXd::Ones(n), coords);
  LinearMap tau = shift_operator(s, 1.0);
  LinearMap p = cutoff_resolution(s, {4.5}).at(4.5);
  DomainOperator m = DomainOperator::everywhere(tau);
  CausalityReport report = compatibility_defect(m, p, 0.0);
  testsupport::Rng rng(31);
  const double sampled = testsupport::defect_oracle(m, p, rng);
  EXPECT_LE(sampled, report.defect0 * (1.0 + 1e-9));
  EXPECT_GE(sampled, report.defect0 * 0.98);
}

TEST(CompatibilityDefect, DownShiftIsCompatible) {
  const Eigen::Index n = 16;
  Eigen::VectorXd coords(n);
  for (Eigen::Index i = 0; i < n; ++i) coords(i) = static_cast<double>(i);
  DiscretizedSpace s(Eigen::VectorXd::Ones(n), coords);
  LinearMap tau = shift_operator(s, -1.0);
  LinearMap p = cutoff_resolution(s, {7.5}).at(7.5);
  CausalityReport report =
      compatibility_defect(DomainOperator::everywhere(tau), p, 0.0);
  EXPECT_EQ(report.verdict, Verdict::kCompatible);
  EXPECT_LT(report.defect0, 1e-12);
}

TEST(CompatibilityDefect, LowerTriangularCompatibleAtEveryTruncation) {
  testsupport::Rng rng(32);
  DiscretizedSpace s = testsupport::random_space(rng, 9);
  DomainOperator m = everywhere(s, testsupport::random_lower_triangular(rng, 9));
  for (double t : {0.0, 3.0, 7.0}) {
    LinearMap p = truncation_resolution(s, {t}).at(t);
    CausalityReport report = compatibility_defect(m, p, 0.0);
    EXPECT_EQ(report.verdict, Verdict::kCompatible) << "t = " << t;
    EXPECT_LT(report.defect0, 1e-12);
  }
}

TEST(CompatibilityDefect, VacuousWhenDomainMissesKernel) {
  // Domain spanned by a vector with no component in N(P) beyond zero:
  // with P = diag(1, 1, 0) and domain span{(1, 0, 1)}, P u = 0 forces u = 0.
  DiscretizedSpace s = DiscretizedSpace::euclidean(3);
  Eigen::MatrixXd basis(3, 1);
  basis << 1.0, 0.0, 1.0;
  Eigen::MatrixXd action(3, 1);
  action << 0.0, 1.0, 0.0;
  DomainOperator m(s, s, basis, action);
  Eigen::VectorXd d(3);
  d << 1.0, 1.0, 0.0;
  LinearMap p(s, s, d.asDiagonal());
  CausalityReport report = compatibility_defect(m, p, 0.0);
  EXPECT_EQ(report.verdict, Verdict::kVacuous);
  EXPECT_EQ(report.defect0, 0.0);
  EXPECT_EQ(report.witness.size(), 0);
}

TEST(PqCompatibility, TwoProjectionExample) {
  // M swaps the two coordinates; N(P) = span(e2) maps to span(e1).
  // Q = diag(1, 0) sees that image fully: defect 1/sqrt(2) in graph norm.
  DiscretizedSpace s = DiscretizedSpace::euclidean(2);
  Eigen::MatrixXd swap(2, 2);
  swap << 0.0, 1.0, 1.0, 0.0;
  LinearMap p(s, s, Eigen::Vector2d(1.0, 0.0).asDiagonal());
  LinearMap q(s, s, Eigen::Vector2d(1.0, 0.0).asDiagonal());
  CausalityReport report =
      pq_compatibility_defect(everywhere(s, swap), p, q, 0.0);
  EXPECT_EQ(report.verdict, Verdict::kIncompatible);
  EXPECT_NEAR(report.defect0, 1.0 / std::sqrt(2.0), 1e-13);

  // With Q annihilating the image the same operator is compatible.
  LinearMap q0(s, s, Eigen::Vector2d(0.0, 1.0).asDiagonal());
  CausalityReport ok =
      pq_compatibility_defect(everywhere(s, swap), p, q0, 0.0);
  EXPECT_EQ(ok.verdict, Verdict::kCompatible);
  EXPECT_LT(ok.defect0, 1e-14);
}

TEST(PqCompatibility, SingleProjectionCaseIsTheSpecialCase) {
  testsupport::Rng rng(33);
  DiscretizedSpace s = testsupport::random_space(rng, 7);
  DomainOperator m = everywhere(s, testsupport::random_matrix(rng, 7, 7));
  LinearMap p = truncation_resolution(s, {3.0}).at(3.0);
  CausalityReport single = compatibility_defect(m, p, 0.0);
  CausalityReport pq = pq_compatibility_defect(m, p, p, 0.0);
  EXPECT_EQ(single.verdict, pq.verdict);
  EXPECT_EQ(single.defect0, pq.defect0);
}

TEST(PqCompatibility, DefectAgreesWithSamplingOracleOnDenseInstances) {
  testsupport::Rng rng(34);
  for (int trial = 0; trial < 5; ++trial) {
    DiscretizedSpace s = testsupport::random_grid_space(rng, 8);
    DomainOperator m = everywhere(s, testsupport::random_matrix(rng, 8, 8));
    const double t = (*s.coords())(3) + 0.01;
    LinearMap p = cutoff_resolution(s, {t}).at(t);
    CausalityReport report = compatibility_defect(m, p, 0.0);
    ASSERT_EQ(report.verdict, Verdict::kIncompatible);
    testsupport::Rng sample_rng(100 + trial);
    const double sampled = testsupport::defect_oracle(m, p, sample_rng);
    EXPECT_LE(sampled, report.defect0 * (1.0 + 1e-9)) << "trial " << trial;
    EXPECT_GE(sampled, report.defect0 * 0.95) << "trial " << trial;
  }
}

TEST(FactorizationDefect, KnownValues) {
  const Eigen::Index n = 12;
  Eigen::VectorXd coords(n);
  for (Eigen::Index i = 0; i < n; ++i) coords(i) = static_cast<double>(i);
  DiscretizedSpace s(Eigen::VectorXd::Ones(n), coords);
  LinearMap p = cutoff_resolution(s, {5.5}).at(5.5);

  // Up-shift by one step: ||PM - PMP|| = 1 (the column just past the
  // cutoff maps entirely into the past).
  EXPECT_NEAR(factorization_defect(shift_operator(s, 1.0), p), 1.0, 1e-13);
  // Down-shift: exactly causal.
  EXPECT_EQ(factorization_defect(shift_operator(s, -1.0), p), 0.0);
  // Identity: causal.
  EXPECT_EQ(factorization_defect(LinearMap::identity(s), p), 0.0);
}

TEST(FactorizationDefect, LowerTriangularIsZero) {
  testsupport::Rng rng(35);
  DiscretizedSpace s = testsupport::random_space(rng, 10);
  LinearMap m(s, s, testsupport::random_lower_triangular(rng, 10));
  for (double t : {-1.0, 2.0, 6.0, 9.0}) {
    LinearMap p = truncation_resolution(s, {t}).at(t);
    EXPECT_LE(factorization_defect(m, p), 1e-13) << "t = " << t;
  }
}

TEST(FactorizationDefect, RejectsNonIdempotentP) {
  DiscretizedSpace s = DiscretizedSpace::euclidean(3);
  LinearMap half(s, s, 0.5 * Eigen::MatrixXd::Identity(3, 3));
  LinearMap m(s, s, Eigen::MatrixXd::Identity(3, 3));
  EXPECT_THROW(factorization_defect(m, half), std::invalid_argument);
}

// Verdict agreement between the null-space route and the factorization
// route on random full-domain instances.
TEST(VerdictAgreement, NullSpaceAndFactorizationRoutesMatch) {
  testsupport::Rng rng(36);
  for (int trial = 0; trial < 20; ++trial) {
    DiscretizedSpace s = testsupport::random_space(rng, 8);
    Eigen::MatrixXd mat = (trial % 2 == 0)
                              ? testsupport::random_lower_triangular(rng, 8)
                              : testsupport::random_noncausal(rng, 8);
    LinearMap m(s, s, mat);
    LinearMap p = truncation_resolution(s, {3.0}).at(3.0);
    CausalityReport report =
        compatibility_defect(DomainOperator::everywhere(m), p, 0.0);
    const bool null_route = report.verdict != Verdict::kIncompatible;
    const bool fact_route =
        factorization_defect(m, p) <= 1e-9 * causalkit::op_norm(m);
    EXPECT_EQ(null_route, fact_route) << "trial " << trial;
  }
}

TEST(IsCausal, ShiftFamilySweep) {
  DiscretizedSpace s = DiscretizedSpace::uniform_grid(6.0, 49);
  std::vector<double> times;
  for (int i = 0; i <= 16; ++i) times.push_back(-6.5 + 13.0 * i / 16.0);
  causalkit::ProjectionFamily fam = cutoff_resolution(s, times);
  const double step = 12.0 / 48.0;

  AggregateCausality up = is_causal(
      DomainOperator::everywhere(shift_operator(s, step)), fam, 0.0);
  EXPECT_FALSE(up.causal);
  EXPECT_GE(up.max_defect, 0.70);
  EXPECT_EQ(up.reports.size(), times.size());

  AggregateCausality down = is_causal(
      DomainOperator::everywhere(shift_operator(s, -step)), fam, 0.0);
  EXPECT_TRUE(down.causal);
  EXPECT_LE(down.max_defect, 1e-12);

  AggregateCausality zero = is_causal(
      DomainOperator::everywhere(shift_operator(s, 0.0)), fam, 0.0);
  EXPECT_TRUE(zero.causal);
  EXPECT_EQ(zero.max_defect, 0.0);

  // Each report carries its sweep time in order.
  for (std::size_t i = 0; i < times.size(); ++i) {
    ASSERT_TRUE(up.reports[i].time.has_value());
    EXPECT_EQ(*up.reports[i].time, times[i]);
  }
}

TEST(DefaultVerdictTol, ScalesWithOperator) {
  DiscretizedSpace s = DiscretizedSpace::euclidean(4);
  DomainOperator small = everywhere(s, Eigen::MatrixXd::Identity(4, 4));
  DomainOperator big =
      everywhere(s, 1e6 * Eigen::MatrixXd::Identity(4, 4));
  EXPECT_LT(causalkit::default_verdict_tol(small),
            causalkit::default_verdict_tol(big));
  EXPECT_GT(causalkit::default_verdict_tol(small), 0.0);
}
