#pragma once

#include <string>
#include <utility>
#include <vector>

#include "causalkit/causality.hpp"
#include "causalkit/space.hpp"

namespace causalkit {

// Finite impulse response: sparse taps indexed over the integers.
struct ImpulseResponse {
  // Sorted by index, unique indices, at least one nonzero value.
  std::vector<std::pair<int, double>> taps;

  explicit ImpulseResponse(std::vector<std::pair<int, double>> taps_);

  int min_index() const;
  int max_index() const;

  // Lines "index,value"; blank lines and #-comments ignored.
  static ImpulseResponse parse_csv(const std::string& text);
};

// Convolution by the impulse response truncated to dim coordinates (no
// circular wrap): T[i][j] = tap value at i - j.  Euclidean weights.
// Requires dim > max |tap index| so every tap is visible in the matrix.
LinearMap toeplitz_operator(const ImpulseResponse& ir, Eigen::Index dim);

struct FirVerdict {
  bool causal;           // agreed verdict
  double defect;         // max over cut times of ||P T (I - P)||
  bool support_causal;   // all tap indices >= 0
  bool operator_causal;  // is_causal against the truncation family
  double tolerance;
  Eigen::Index dim;
};

// Causality of the truncated convolution operator, decided by the
// compatibility sweep and cross-checked against the tap-support test.
// The two routes disagreeing is an internal error (thrown), not a verdict.
FirVerdict fir_causal(const ImpulseResponse& ir, Eigen::Index dim,
                      double tol = 0.0);

}  // namespace causalkit
