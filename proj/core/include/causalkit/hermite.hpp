#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "causalkit/space.hpp"

namespace causalkit {

struct HermiteBasis {
  DiscretizedSpace space;
  int degree;              // highest degree n_max; degree+1 columns
  Eigen::MatrixXd columns; // weighted-orthonormal after requadrature
  double gram_deviation;   // max |C' W C - I| after re-orthonormalization
};

// Hermite functions psi_0..psi_n_max evaluated on the grid via the
// three-term recurrence, then re-orthonormalized against the quadrature.
// The grid must be symmetric about 0 and wide enough that every requested
// degree has decayed below decay_tol at the endpoints.
HermiteBasis hermite_basis(const DiscretizedSpace& space, int n_max,
                           double decay_tol = 1e-12);

// Translation f -> f(. + h) on a uniform grid (h > 0 moves support toward
// earlier times): an exact index shift with zero padding when h is a whole
// number of grid steps, linear interpolation with zero padding otherwise.
// Requires |h| < the grid span.
LinearMap shift_operator(const DiscretizedSpace& space, double h);

// Smallest singular value of P restricted to the span of the basis, in the
// weighted norms.  Strictly positive means the span meets N(P) only in 0,
// so every operator on the span is vacuously compatible with P.
double injectivity_margin(const LinearMap& p, const HermiteBasis& basis);

// Smooth compactly supported bump on [support_lo, support_hi], normalized
// to unit weighted norm.
Eigen::VectorXd mollifier_bump(const DiscretizedSpace& space,
                               double support_lo, double support_hi);

struct CounterexampleConfig {
  double extent = 12.0;     // grid half-width L
  int dim = 2048;
  double shift = 1.0;       // h
  double cut = 0.0;         // cutoff time a
  double support_lo = 0.5;  // bump support [s0, s1]
  double support_hi = 1.5;
  int max_degree = 40;      // degrees 0..max_degree
  double decay_tol = 1e-6;  // endpoint decay required of the basis
  double in_frac = 0.05;    // past_in(final) threshold, fraction of |bump|
  double out_frac = 0.8;    // past_out threshold, fraction of |P tau bump|
  int out_min_degree = 10;  // degrees the out threshold applies from

  // Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
};

struct CounterexampleRow {
  int degree;
  double past_in;          // |P_a f_n|
  double past_out;         // |P_a tau_h f_n|
  double margin;           // injectivity margin at this degree
  double modulus_pairing;  // |<P_a tau_h f_n, x'>|
};

enum class CounterexampleVerdict {
  kClosureNoncausalCoreCausal,
  kCausalOnBoth,
  kInconclusive,
};

std::string counterexample_verdict_name(CounterexampleVerdict v);

struct CounterexampleTable {
  CounterexampleConfig config;
  std::vector<CounterexampleRow> rows;
  double bump_norm;          // 1 after normalization, recorded as computed
  double shifted_past_norm;  // |P_a tau_h bump|
  double shift_op_norm;      // ||tau_h||
  bool margins_positive;     // every margin strictly > 0
  bool past_in_ok;           // past_in(max_degree) <= in_frac * bump_norm
  bool past_out_ok;  // past_out(n) >= out_frac * shifted_past_norm, n >= cutoff
  CounterexampleVerdict verdict;
};

// The closure counterexample experiment: projects a one-sided bump onto
// growing Hermite spans and tracks how much of it, and of its shift, sits
// before the cut.  past_in decays to zero while (for a forward shift)
// past_out stays bounded below: the core never violates causality, the
// closure does.
CounterexampleTable counterexample_run(const CounterexampleConfig& config);

}  // namespace causalkit
