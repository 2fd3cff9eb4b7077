#include "causalkit/resolution.hpp"

#include <cmath>
#include <stdexcept>

#include "causalkit/linalg.hpp"

namespace causalkit {

namespace {

void check_times(const std::vector<double>& times) {
  if (times.empty()) {
    throw std::invalid_argument("time list must be nonempty");
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i])) {
      throw std::invalid_argument("times must be finite");
    }
    if (i > 0 && times[i] <= times[i - 1]) {
      throw std::invalid_argument("times must be strictly increasing");
    }
  }
}

bool family_is_diagonal(const std::vector<Eigen::MatrixXd>& mats) {
  for (const Eigen::MatrixXd& m : mats) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (i != j && m(i, j) != 0.0) return false;
      }
    }
  }
  return true;
}

}  // namespace

ProjectionFamily::ProjectionFamily(DiscretizedSpace space,
                                   std::vector<double> times,
                                   std::vector<Eigen::MatrixXd> projections)
    : space_(std::move(space)),
      times_(std::move(times)),
      projections_(std::move(projections)) {
  check_times(times_);
  if (projections_.size() != times_.size()) {
    throw std::invalid_argument("one projection required per time");
  }
  for (const Eigen::MatrixXd& p : projections_) {
    if (p.rows() != space_.dim() || p.cols() != space_.dim()) {
      throw std::invalid_argument("projection shape does not match space");
    }
    if (!p.allFinite()) {
      throw std::invalid_argument("projection has non-finite entries");
    }
  }
}

const Eigen::MatrixXd& ProjectionFamily::matrix_at(std::size_t i) const {
  if (i >= projections_.size()) {
    throw std::out_of_range("projection index out of range");
  }
  return projections_[i];
}

LinearMap ProjectionFamily::at(double t) const {
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (times_[i] == t) return LinearMap(space_, space_, projections_[i]);
  }
  throw std::invalid_argument("time is not in the sampled list");
}

ProjectionFamily cutoff_resolution(const DiscretizedSpace& space,
                                   std::vector<double> times) {
  if (!space.has_coords()) {
    throw std::invalid_argument("cutoff_resolution needs grid coordinates");
  }
  check_times(times);
  const Eigen::VectorXd& x = *space.coords();
  std::vector<Eigen::MatrixXd> projections;
  projections.reserve(times.size());
  for (double t : times) {
    Eigen::VectorXd diag(space.dim());
    for (Eigen::Index i = 0; i < space.dim(); ++i) {
      diag(i) = x(i) < t ? 1.0 : 0.0;
    }
    projections.push_back(Eigen::MatrixXd(diag.asDiagonal()));
  }
  return ProjectionFamily(space, std::move(times), std::move(projections));
}

ProjectionFamily truncation_resolution(const DiscretizedSpace& space,
                                       std::vector<double> times,
                                       TruncationOrientation orientation) {
  check_times(times);
  std::vector<Eigen::MatrixXd> projections;
  projections.reserve(times.size());
  for (double t : times) {
    Eigen::VectorXd diag(space.dim());
    for (Eigen::Index i = 0; i < space.dim(); ++i) {
      const double k = static_cast<double>(i);
      const bool keep = orientation == TruncationOrientation::kPastKeeping
                            ? k <= t
                            : k >= t;
      diag(i) = keep ? 1.0 : 0.0;
    }
    projections.push_back(Eigen::MatrixXd(diag.asDiagonal()));
  }
  return ProjectionFamily(space, std::move(times), std::move(projections));
}

ValidationReport validate_resolution(const ProjectionFamily& fam, double tol) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("validate_resolution: tol must be > 0");
  }
  const std::size_t count = fam.size();
  const Eigen::Index n = fam.space().dim();
  const Eigen::VectorXd& sw = fam.space().sqrt_weights();
  const Eigen::VectorXd& isw = fam.space().inv_sqrt_weights();

  std::vector<Eigen::MatrixXd> mats;
  mats.reserve(count);
  for (std::size_t i = 0; i < count; ++i) mats.push_back(fam.matrix_at(i));
  const bool all_diagonal = family_is_diagonal(mats);

  // Weighted operator norm; for an exactly diagonal matrix with the diagonal
  // metric this is just the largest |entry|, computed without dense algebra.
  auto weighted_norm = [&](const Eigen::MatrixXd& m) {
    return spectral_norm(sw.asDiagonal() * m * isw.asDiagonal());
  };

  double idem = 0.0;
  double nested = 0.0;
  std::string nested_note;
  if (all_diagonal) {
    for (const Eigen::MatrixXd& m : mats) {
      for (Eigen::Index i = 0; i < n; ++i) {
        const double d = m(i, i);
        idem = std::max(idem, std::abs(d * d - d));
      }
    }
    for (std::size_t a = 0; a < count; ++a) {
      for (std::size_t b = a + 1; b < count; ++b) {
        // t = times[a] <= s = times[b]; diagonal products commute, both
        // directions of the nestedness identity collapse to one defect.
        double pair_defect = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          pair_defect = std::max(
              pair_defect, std::abs(mats[b](i, i) * mats[a](i, i) - mats[a](i, i)));
        }
        if (pair_defect > nested) {
          nested = pair_defect;
          nested_note = "worst pair t=" + std::to_string(fam.times()[a]) +
                        ", s=" + std::to_string(fam.times()[b]);
        }
      }
    }
  } else {
    for (const Eigen::MatrixXd& m : mats) {
      idem = std::max(idem, weighted_norm(m * m - m));
    }
    for (std::size_t a = 0; a < count; ++a) {
      for (std::size_t b = a + 1; b < count; ++b) {
        const double d1 = weighted_norm(mats[b] * mats[a] - mats[a]);
        const double d2 = weighted_norm(mats[a] * mats[b] - mats[a]);
        const double pair_defect = std::max(d1, d2);
        if (pair_defect > nested) {
          nested = pair_defect;
          nested_note = "worst pair t=" + std::to_string(fam.times()[a]) +
                        ", s=" + std::to_string(fam.times()[b]);
        }
      }
    }
  }

  double initial = 0.0;
  double final_id = 0.0;
  if (all_diagonal) {
    for (Eigen::Index i = 0; i < n; ++i) {
      initial = std::max(initial, std::abs(mats.front()(i, i)));
      final_id = std::max(final_id, std::abs(mats.back()(i, i) - 1.0));
    }
  } else {
    initial = weighted_norm(mats.front());
    final_id = weighted_norm(mats.back() -
                             Eigen::MatrixXd::Identity(n, n));
  }

  ValidationReport report;
  report.tolerance = tol;
  report.checks = {
      {"idempotent", idem, tol, idem <= tol},
      {"nested", nested, tol, nested <= tol},
      {"initial_zero", initial, tol, initial <= tol},
      {"final_identity", final_id, tol, final_id <= tol},
  };
  report.pass = true;
  std::string note;
  for (const ResolutionCheck& c : report.checks) {
    if (!c.pass) {
      report.pass = false;
      if (!note.empty()) note += "; ";
      note += c.check_name + " defect " + std::to_string(c.defect);
      if (c.check_name == "nested" && !nested_note.empty()) {
        note += " (" + nested_note + ")";
      }
      if (c.check_name == "initial_zero" || c.check_name == "final_identity") {
        note += " (time grid may not cover the coordinate range)";
      }
    }
  }
  report.note = note;
  return report;
}

}  // namespace causalkit
