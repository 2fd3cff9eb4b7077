#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "causalkit/space.hpp"

namespace causalkit {

// Finite sample of a resolution of the identity: projections P_t indexed by
// a strictly increasing list of times, intended to run from (near) zero to
// (near) the identity.
class ProjectionFamily {
 public:
  ProjectionFamily(DiscretizedSpace space, std::vector<double> times,
                   std::vector<Eigen::MatrixXd> projections);

  const DiscretizedSpace& space() const { return space_; }
  const std::vector<double>& times() const { return times_; }
  std::size_t size() const { return times_.size(); }

  // Projection matrix at times()[i].
  const Eigen::MatrixXd& matrix_at(std::size_t i) const;
  // Projection at an exact member of times(); throws on other values.
  LinearMap at(double t) const;

 private:
  DiscretizedSpace space_;
  std::vector<double> times_;
  std::vector<Eigen::MatrixXd> projections_;
};

// Multiplication by the indicator of { coords < t }: the grid version of
// cutting off at time t.  Strict inequality: a grid point exactly at t is
// not part of the past.
ProjectionFamily cutoff_resolution(const DiscretizedSpace& space,
                                   std::vector<double> times);

// Which side a truncation keeps.  Past-keeping (indices <= t) is the
// orientation under which ranges grow with t; future-keeping reverses the
// containment and exists so that the validator can demonstrate the failure.
enum class TruncationOrientation { kPastKeeping, kFutureKeeping };

// Coordinate truncations on index space: P_t keeps indices k <= t (past
// orientation).  t below 0 gives the zero map, t >= dim-1 the identity.
ProjectionFamily truncation_resolution(
    const DiscretizedSpace& space, std::vector<double> times,
    TruncationOrientation orientation = TruncationOrientation::kPastKeeping);

struct ResolutionCheck {
  std::string check_name;
  double defect;
  double tolerance;
  bool pass;
};

struct ValidationReport {
  std::vector<ResolutionCheck> checks;
  bool pass;
  double tolerance;
  std::string note;
};

// Scores a family against the resolution axioms: idempotency of every P_t,
// nestedness P_s P_t = P_t = P_t P_s for all pairs t <= s, and the endpoint
// surrogates ||P_first|| ~ 0, ||P_last - I|| ~ 0.  Failures are report
// content, not errors.
ValidationReport validate_resolution(const ProjectionFamily& fam, double tol);

}  // namespace causalkit
