#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>

#include "causalkit/causality.hpp"
#include "causalkit/discrete.hpp"
#include "causalkit/hermite.hpp"
#include "causalkit/resolution.hpp"

namespace causalkit {

// Doubles formatted with 17 significant digits (round-trip exact).
std::string fmt_g17(double value);

// Write-to-temp-then-rename so readers never observe a partial file.
void atomic_write(const std::filesystem::path& path,
                  const std::string& content);

nlohmann::json validation_report_json(const ValidationReport& report);
nlohmann::json causality_report_json(const CausalityReport& report,
                                     bool include_witness = true);
nlohmann::json aggregate_causality_json(const AggregateCausality& agg);
nlohmann::json modulus_curve_json(const ModulusCurve& curve,
                                  CurveClass classification);
nlohmann::json equivalence_report_json(const EquivalenceReport& report);
nlohmann::json counterexample_summary_json(const CounterexampleTable& table);
nlohmann::json fir_verdict_json(const FirVerdict& verdict);

// CSV exports; columns documented in the shipped schema files.
std::string modulus_curve_csv(const ModulusCurve& curve);
std::string counterexample_csv(const CounterexampleTable& table);

}  // namespace causalkit
