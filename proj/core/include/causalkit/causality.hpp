#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "causalkit/linalg.hpp"
#include "causalkit/resolution.hpp"
#include "causalkit/space.hpp"

namespace causalkit {

enum class Verdict { kCompatible, kIncompatible, kVacuous };

std::string verdict_name(Verdict v);

// Outcome of a single compatibility check against one projection.
struct CausalityReport {
  Verdict verdict = Verdict::kCompatible;
  // Largest |P M u| over graph-norm-1 elements u of N(P) within the domain;
  // 0 when that intersection is trivial (vacuous).
  double defect0 = 0.0;
  // Domain element realizing defect0 (ambient source coordinates) and its
  // coefficients w.r.t. the domain basis; empty when vacuous.
  Eigen::VectorXd witness;
  Eigen::VectorXd witness_coeffs;
  std::optional<double> time;  // set when driven by a family sweep
  double tolerance = 0.0;
  double rank_tolerance = 0.0;
};

// Verdict threshold scaled to the operator: defects below this are roundoff.
double default_verdict_tol(const DomainOperator& m);

// Compatibility of M with the projection P on its source space (which must
// also be its target space): does P u = 0 inside the domain force P M u = 0?
// Reports the worst violation per unit graph norm.
CausalityReport compatibility_defect(const DomainOperator& m,
                                     const LinearMap& p, double tol,
                                     double rank_tol = kDefaultRankTol);

// Two-projection variant: P on the source, Q on the target; measures the
// failure of N(P) (within the domain) to land inside N(Q M).
CausalityReport pq_compatibility_defect(const DomainOperator& m,
                                        const LinearMap& p,
                                        const LinearMap& q, double tol,
                                        double rank_tol = kDefaultRankTol);

// ||P M - P M P|| in the weighted operator norm, for everywhere-defined M
// and idempotent P: zero exactly when M is P-compatible.
double factorization_defect(const LinearMap& m, const LinearMap& p,
                            double idempotency_tol = 1e-8);

struct AggregateCausality {
  std::vector<CausalityReport> reports;  // one per sampled time
  bool causal = true;                    // no incompatible verdict
  double max_defect = 0.0;
  double tolerance = 0.0;
};

// Compatibility sweep across a projection family; causal iff every per-time
// verdict is compatible or vacuous.  Pass tol <= 0 to use the default
// operator-scaled threshold.
AggregateCausality is_causal(const DomainOperator& m,
                             const ProjectionFamily& fam, double tol,
                             double rank_tol = kDefaultRankTol);

// One sample of the strong-causality modulus: the best value of the pairing
// |<P M u, x_probe>| over domain differences u constrained to the graph
// ball (|u|^2 + |Mu|^2 <= (2R)^2) and to |P u| <= delta.
struct StrongModulusResult {
  double omega = 0.0;
  Eigen::VectorXd witness;         // ambient source coordinates of u
  Eigen::VectorXd witness_coeffs;  // coefficients w.r.t. the domain basis
  double dual_bound = 0.0;         // certified upper bound from the search
  double gap = 0.0;                // dual_bound - omega (>= 0 up to roundoff)
  bool converged = true;
  double multiplier = 0.0;         // optimal constraint multiplier
};

StrongModulusResult strong_modulus(const DomainOperator& m,
                                   const LinearMap& p,
                                   const Eigen::VectorXd& x_probe, double r,
                                   double delta,
                                   double rank_tol = kDefaultRankTol);

struct ModulusCurve {
  double r = 0.0;
  Eigen::VectorXd probe;
  std::vector<double> deltas;
  std::vector<StrongModulusResult> samples;
  // Least-squares line omega ~ slope*delta + intercept through the samples
  // at the three smallest deltas.
  double slope = 0.0;
  double intercept = 0.0;
};

// Samples strong_modulus across a sorted nonnegative delta list.
ModulusCurve modulus_curve(const DomainOperator& m, const LinearMap& p,
                           const Eigen::VectorXd& x_probe, double r,
                           const std::vector<double>& deltas,
                           double rank_tol = kDefaultRankTol);

enum class CurveClass { kDecaying, kObstructed, kInconclusive };

std::string curve_class_name(CurveClass c);

// Finite-sample trichotomy: decaying when the small-delta fit has intercept
// within tol of zero, obstructed when omega never drops below 10*tol,
// inconclusive otherwise.
CurveClass classify_curve(const ModulusCurve& curve, double tol);

// Scale-aware default tolerance for classify_curve on a given instance.
double default_curve_tol(const DomainOperator& m, const LinearMap& p,
                         const Eigen::VectorXd& x_probe, double r);

struct ClosureResult {
  LinearMap extension;
  // max over domain basis columns d_j of |extension d_j - M d_j| / |d_j|.
  double consistency = 0.0;
};

// Least-squares extension of M to the whole source space; requires the
// domain to span the source at rank tolerance.
ClosureResult closure_extension(const DomainOperator& m,
                                double rank_tol = kDefaultRankTol);

// Weighted-orthonormal probe directions for dual-pairing sweeps: a basis of
// range(P), optionally preceded by a data-driven direction, capped in count.
std::vector<Eigen::VectorXd> probe_set(
    const LinearMap& p,
    const std::optional<Eigen::VectorXd>& data_direction = std::nullopt,
    std::size_t cap = 32);

// One probe's worth of evidence in an equivalence check.
struct ProbeFinding {
  Eigen::VectorXd direction;
  CurveClass classification = CurveClass::kInconclusive;
  double slope = 0.0;
  double intercept = 0.0;
  double min_omega = 0.0;
  double max_curve_gap = 0.0;  // worst |omega_core - omega_extension|
};

struct EquivalenceReport {
  bool agree = false;
  // Side (a): the closure extension is P-compatible.
  bool extension_compatible = false;
  CausalityReport extension_report;
  double closure_consistency = 0.0;
  // Side (b): every probe's core modulus curve decays.
  bool core_strongly_compatible = false;
  std::vector<ProbeFinding> probes;
  // Core-vs-extension curve agreement across probes and deltas.
  bool curves_match = false;
  double max_curve_gap = 0.0;
  double tolerance = 0.0;
};

// Finite-dimensional check that compatibility of the closure coincides with
// decay of the core's modulus curves, probe by probe, and that core and
// extension curves agree closely.  Empty x_probes requests the canonical
// probe set.
EquivalenceReport theorem_equivalence_check(
    const DomainOperator& m, const LinearMap& p, double r,
    const std::vector<double>& deltas,
    const std::vector<Eigen::VectorXd>& x_probes, double tol,
    double rank_tol = kDefaultRankTol);

}  // namespace causalkit
