#include "causalkit/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace causalkit {

namespace {

nlohmann::json finite_or_null(double value) {
  if (!std::isfinite(value)) return nullptr;
  return value;
}

nlohmann::json vector_json(const Eigen::VectorXd& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

}  // namespace

std::string fmt_g17(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void atomic_write(const std::filesystem::path& path,
                  const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot write to '" + tmp.string() + "'");
    }
    out << content;
    out.flush();
    if (!out) {
      throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
  }
  std::filesystem::rename(tmp, path);
}

nlohmann::json validation_report_json(const ValidationReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const ResolutionCheck& c : report.checks) {
    checks.push_back({{"check_name", c.check_name},
                      {"defect", c.defect},
                      {"tolerance", c.tolerance},
                      {"pass", c.pass}});
  }
  return {{"pass", report.pass},
          {"tolerance", report.tolerance},
          {"note", report.note},
          {"checks", checks}};
}

nlohmann::json causality_report_json(const CausalityReport& report,
                                     bool include_witness) {
  nlohmann::json j = {{"verdict", verdict_name(report.verdict)},
                      {"defect0", report.defect0},
                      {"tolerance", report.tolerance},
                      {"rank_tolerance", report.rank_tolerance}};
  j["time"] = report.time ? nlohmann::json(*report.time)
                          : nlohmann::json(nullptr);
  if (include_witness) {
    j["witness"] = report.witness.size() > 0 ? vector_json(report.witness)
                                             : nlohmann::json(nullptr);
  }
  return j;
}

nlohmann::json aggregate_causality_json(const AggregateCausality& agg) {
  nlohmann::json reports = nlohmann::json::array();
  const CausalityReport* worst = nullptr;
  for (const CausalityReport& rep : agg.reports) {
    reports.push_back(causality_report_json(rep, /*include_witness=*/false));
    if (worst == nullptr || rep.defect0 > worst->defect0) worst = &rep;
  }
  nlohmann::json j = {{"causal", agg.causal},
                      {"max_defect", agg.max_defect},
                      {"tolerance", agg.tolerance},
                      {"reports", reports}};
  j["worst"] = worst != nullptr ? causality_report_json(*worst)
                                : nlohmann::json(nullptr);
  return j;
}

nlohmann::json modulus_curve_json(const ModulusCurve& curve,
                                  CurveClass classification) {
  nlohmann::json samples = nlohmann::json::array();
  for (std::size_t i = 0; i < curve.samples.size(); ++i) {
    const StrongModulusResult& s = curve.samples[i];
    samples.push_back({{"delta", curve.deltas[i]},
                       {"omega", s.omega},
                       {"dual_bound", s.dual_bound},
                       {"gap", s.gap},
                       {"converged", s.converged},
                       {"multiplier", finite_or_null(s.multiplier)}});
  }
  return {{"R", curve.r},
          {"probe", vector_json(curve.probe)},
          {"slope", curve.slope},
          {"intercept", curve.intercept},
          {"classification", curve_class_name(classification)},
          {"samples", samples}};
}

nlohmann::json equivalence_report_json(const EquivalenceReport& report) {
  nlohmann::json probes = nlohmann::json::array();
  for (const ProbeFinding& p : report.probes) {
    probes.push_back({{"classification", curve_class_name(p.classification)},
                      {"slope", p.slope},
                      {"intercept", p.intercept},
                      {"min_omega", p.min_omega},
                      {"max_curve_gap", p.max_curve_gap}});
  }
  return {{"agree", report.agree},
          {"extension_compatible", report.extension_compatible},
          {"core_strongly_compatible", report.core_strongly_compatible},
          {"curves_match", report.curves_match},
          {"max_curve_gap", report.max_curve_gap},
          {"closure_consistency", report.closure_consistency},
          {"tolerance", report.tolerance},
          {"extension_report",
           causality_report_json(report.extension_report,
                                 /*include_witness=*/false)},
          {"probes", probes}};
}

nlohmann::json counterexample_summary_json(const CounterexampleTable& table) {
  const CounterexampleConfig& c = table.config;
  nlohmann::json config = {{"L", c.extent},
                           {"dim", c.dim},
                           {"h", c.shift},
                           {"a", c.cut},
                           {"support", {c.support_lo, c.support_hi}},
                           {"max_degree", c.max_degree},
                           {"decay_tol", c.decay_tol},
                           {"in_frac", c.in_frac},
                           {"out_frac", c.out_frac},
                           {"out_min_degree", c.out_min_degree}};
  return {{"verdict", counterexample_verdict_name(table.verdict)},
          {"bump_norm", table.bump_norm},
          {"shifted_past_norm", table.shifted_past_norm},
          {"shift_op_norm", table.shift_op_norm},
          {"margins_positive", table.margins_positive},
          {"past_in_ok", table.past_in_ok},
          {"past_out_ok", table.past_out_ok},
          {"past_in_final", table.rows.back().past_in},
          {"in_threshold", c.in_frac * table.bump_norm},
          {"out_threshold", c.out_frac * table.shifted_past_norm},
          {"config", config}};
}

nlohmann::json fir_verdict_json(const FirVerdict& verdict) {
  return {{"causal", verdict.causal},
          {"defect", verdict.defect},
          {"support_causal", verdict.support_causal},
          {"operator_causal", verdict.operator_causal},
          {"tolerance", verdict.tolerance},
          {"dim", static_cast<std::int64_t>(verdict.dim)}};
}

std::string modulus_curve_csv(const ModulusCurve& curve) {
  std::string out = "delta,omega,slope_fit\n";
  for (std::size_t i = 0; i < curve.samples.size(); ++i) {
    const double fit = curve.slope * curve.deltas[i] + curve.intercept;
    out += fmt_g17(curve.deltas[i]);
    out += ',';
    out += fmt_g17(curve.samples[i].omega);
    out += ',';
    out += fmt_g17(fit);
    out += '\n';
  }
  return out;
}

std::string counterexample_csv(const CounterexampleTable& table) {
  std::string out = "degree,past_in,past_out,margin,modulus_pairing\n";
  for (const CounterexampleRow& row : table.rows) {
    out += std::to_string(row.degree);
    out += ',';
    out += fmt_g17(row.past_in);
    out += ',';
    out += fmt_g17(row.past_out);
    out += ',';
    out += fmt_g17(row.margin);
    out += ',';
    out += fmt_g17(row.modulus_pairing);
    out += '\n';
  }
  return out;
}

}  // namespace causalkit
