#include "causalkit/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "causalkit/resolution.hpp"

namespace causalkit {

ImpulseResponse::ImpulseResponse(std::vector<std::pair<int, double>> taps_)
    : taps(std::move(taps_)) {
  if (taps.empty()) {
    throw std::invalid_argument("impulse response needs at least one tap");
  }
  std::sort(taps.begin(), taps.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  bool any_nonzero = false;
  for (std::size_t i = 0; i < taps.size(); ++i) {
    if (!std::isfinite(taps[i].second)) {
      throw std::invalid_argument("tap values must be finite");
    }
    if (i > 0 && taps[i].first == taps[i - 1].first) {
      throw std::invalid_argument("duplicate tap index " +
                                  std::to_string(taps[i].first));
    }
    if (taps[i].second != 0.0) any_nonzero = true;
  }
  if (!any_nonzero) {
    throw std::invalid_argument("impulse response needs a nonzero tap");
  }
}

int ImpulseResponse::min_index() const { return taps.front().first; }
int ImpulseResponse::max_index() const { return taps.back().first; }

ImpulseResponse ImpulseResponse::parse_csv(const std::string& text) {
  std::vector<std::pair<int, double>> taps;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // Trim whitespace.
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument("tap line " + std::to_string(lineno) +
                                  ": expected \"index,value\"");
    }
    try {
      std::size_t used = 0;
      const std::string idx_text = line.substr(0, comma);
      const std::string val_text = line.substr(comma + 1);
      const int idx = std::stoi(idx_text, &used);
      if (used != idx_text.size()) throw std::invalid_argument("trailing text");
      const double val = std::stod(val_text, &used);
      if (used != val_text.size()) throw std::invalid_argument("trailing text");
      taps.emplace_back(idx, val);
    } catch (const std::exception&) {
      throw std::invalid_argument("tap line " + std::to_string(lineno) +
                                  ": could not parse \"" + line + "\"");
    }
  }
  return ImpulseResponse(std::move(taps));
}

LinearMap toeplitz_operator(const ImpulseResponse& ir, Eigen::Index dim) {
  const int reach =
      std::max(std::abs(ir.min_index()), std::abs(ir.max_index()));
  if (dim <= reach) {
    throw std::invalid_argument(
        "toeplitz_operator: dim must exceed the largest |tap index|");
  }
  DiscretizedSpace space = DiscretizedSpace::euclidean(dim);
  Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& [index, value] : ir.taps) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      const Eigen::Index i = j + index;
      if (i >= 0 && i < dim) mat(i, j) = value;
    }
  }
  return LinearMap(space, space, std::move(mat));
}

FirVerdict fir_causal(const ImpulseResponse& ir, Eigen::Index dim,
                      double tol) {
  LinearMap t = toeplitz_operator(ir, dim);
  DomainOperator op = DomainOperator::everywhere(t);
  std::vector<double> times;
  times.reserve(dim + 1);
  for (Eigen::Index i = -1; i < dim; ++i) {
    times.push_back(static_cast<double>(i));
  }
  ProjectionFamily fam = truncation_resolution(t.source, times);
  AggregateCausality agg = is_causal(op, fam, tol);

  FirVerdict verdict;
  verdict.dim = dim;
  verdict.tolerance = agg.tolerance;
  verdict.support_causal = ir.min_index() >= 0;
  verdict.operator_causal = agg.causal;
  if (verdict.operator_causal != verdict.support_causal) {
    throw std::logic_error(
        "fir_causal: operator sweep and support test disagree "
        "(implementation bug)");
  }
  verdict.causal = verdict.support_causal;
  verdict.defect = 0.0;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    verdict.defect = std::max(
        verdict.defect,
        factorization_defect(t, LinearMap(t.source, t.source,
                                          fam.matrix_at(i))));
  }
  return verdict;
}

}  // namespace causalkit
