// Batch front end: reads a key-value config, runs one analysis, writes
// CSV/JSON reports.  Exit codes: 0 pass / positive finding, 1 negative
// finding, 2 configuration or usage error.

#include <CLI11.hpp>
#include <Eigen/Dense>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "causalkit/causality.hpp"
#include "causalkit/discrete.hpp"
#include "causalkit/hermite.hpp"
#include "causalkit/io.hpp"
#include "causalkit/kvfile.hpp"
#include "causalkit/linalg.hpp"
#include "causalkit/resolution.hpp"
#include "causalkit/space.hpp"

namespace {

using causalkit::KeyValueFile;

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  double tol = 0.0;       // 0 = use config / operator-scaled default
  long seed = 0;          // accepted for interface stability; the pipeline
                          // is deterministic and does not consume it
  bool seed_given = false;
};

std::filesystem::path resolve_out_dir(const CommonFlags& flags) {
  std::string dir = flags.out_dir;
  if (dir.empty()) {
    if (const char* env = std::getenv("CAUSALKIT_OUT_DIR")) dir = env;
  }
  if (dir.empty()) dir = ".";
  std::filesystem::path path(dir);
  std::filesystem::create_directories(path);
  return path;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  causalkit::atomic_write(path, j.dump(2) + "\n");
}

causalkit::DiscretizedSpace load_space(const KeyValueFile& kv) {
  const int dim = kv.get_int("space.dim");
  if (kv.has("space.L")) {
    return causalkit::DiscretizedSpace::uniform_grid(kv.get_double("space.L"),
                                                     dim);
  }
  return causalkit::DiscretizedSpace::euclidean(dim);
}

Eigen::MatrixXd load_matrix_file(const std::string& path, Eigen::Index dim) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open matrix file '" + path + "'");
  }
  std::vector<double> values;
  std::string line;
  Eigen::Index rows = 0;
  while (std::getline(in, line)) {
    for (char& c : line) {
      if (c == ',') c = ' ';
    }
    std::istringstream ls(line);
    double v;
    Eigen::Index cols = 0;
    while (ls >> v) {
      values.push_back(v);
      ++cols;
    }
    if (cols == 0) continue;
    if (cols != dim) {
      throw std::invalid_argument("matrix file '" + path + "' row " +
                                  std::to_string(rows + 1) + " has " +
                                  std::to_string(cols) + " entries, expected " +
                                  std::to_string(dim));
    }
    ++rows;
  }
  if (rows != dim) {
    throw std::invalid_argument("matrix file '" + path + "' has " +
                                std::to_string(rows) + " rows, expected " +
                                std::to_string(dim));
  }
  Eigen::MatrixXd m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      m(i, j) = values[static_cast<std::size_t>(i * dim + j)];
    }
  }
  return m;
}

// The operator named by operator.kind, as an everywhere-defined map.
causalkit::LinearMap load_operator(const KeyValueFile& kv,
                                   const causalkit::DiscretizedSpace& space) {
  const std::string kind = kv.get_string("operator.kind");
  if (kind == "shift") {
    return causalkit::shift_operator(space, kv.get_double("operator.h"));
  }
  if (kind == "toeplitz") {
    std::ifstream in(kv.get_string("operator.taps_file"));
    if (!in) {
      throw std::invalid_argument("cannot open taps file '" +
                                  kv.get_string("operator.taps_file") + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    causalkit::ImpulseResponse ir =
        causalkit::ImpulseResponse::parse_csv(buffer.str());
    causalkit::LinearMap t = causalkit::toeplitz_operator(ir, space.dim());
    if (!t.source.same_as(space)) {
      throw std::invalid_argument(
          "operator.kind=toeplitz requires a plain (weightless) space");
    }
    return t;
  }
  if (kind == "matrix-file") {
    Eigen::MatrixXd m =
        load_matrix_file(kv.get_string("operator.matrix_file"), space.dim());
    return causalkit::LinearMap(space, space, std::move(m));
  }
  throw std::invalid_argument("operator.kind must be shift, toeplitz, or "
                              "matrix-file (got '" +
                              kind + "')");
}

std::vector<double> default_cutoff_times(
    const causalkit::DiscretizedSpace& space, std::size_t count = 33) {
  const Eigen::VectorXd& x = *space.coords();
  const double step =
      (x(x.size() - 1) - x(0)) / static_cast<double>(x.size() - 1);
  const double lo = x(0) - step;
  const double hi = x(x.size() - 1) + step;
  std::vector<double> times;
  times.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    times.push_back(lo + (hi - lo) * static_cast<double>(i) /
                             static_cast<double>(count - 1));
  }
  return times;
}

std::vector<double> default_truncation_times(
    const causalkit::DiscretizedSpace& space) {
  std::vector<double> times;
  times.reserve(space.dim() + 1);
  for (Eigen::Index i = -1; i < space.dim(); ++i) {
    times.push_back(static_cast<double>(i));
  }
  return times;
}

causalkit::ProjectionFamily load_family(
    const KeyValueFile& kv, const causalkit::DiscretizedSpace& space,
    const std::string& default_kind) {
  const std::string kind = kv.get_string("family.kind", default_kind);
  std::vector<double> times;
  if (kv.has("family.times")) {
    times = kv.get_double_list("family.times");
  } else if (kind == "cutoff") {
    times = default_cutoff_times(space);
  } else {
    times = default_truncation_times(space);
  }
  if (kind == "cutoff") {
    return causalkit::cutoff_resolution(space, std::move(times));
  }
  if (kind == "truncation") {
    const std::string orientation =
        kv.get_string("family.orientation", "past");
    causalkit::TruncationOrientation o;
    if (orientation == "past") {
      o = causalkit::TruncationOrientation::kPastKeeping;
    } else if (orientation == "future") {
      o = causalkit::TruncationOrientation::kFutureKeeping;
    } else {
      throw std::invalid_argument(
          "family.orientation must be past or future (got '" + orientation +
          "')");
    }
    return causalkit::truncation_resolution(space, std::move(times), o);
  }
  throw std::invalid_argument("family.kind must be cutoff or truncation "
                              "(got '" +
                              kind + "')");
}

void reject_unknown_keys(const KeyValueFile& kv) {
  const std::vector<std::string> extra = kv.unconsumed();
  if (extra.empty()) return;
  std::string msg = "unknown config keys:";
  for (const std::string& key : extra) msg += " " + key;
  throw std::invalid_argument(msg);
}

int cmd_validate(const CommonFlags& flags) {
  KeyValueFile kv = KeyValueFile::parse_file(flags.config_path);
  causalkit::DiscretizedSpace space = load_space(kv);
  if (!kv.has("family.kind")) {
    throw std::invalid_argument("cmd validate requires family.kind");
  }
  causalkit::ProjectionFamily fam = load_family(kv, space, "");
  double tol = kv.get_double("analysis.tol", 1e-12);
  if (flags.tol > 0.0) tol = flags.tol;
  reject_unknown_keys(kv);

  causalkit::ValidationReport report =
      causalkit::validate_resolution(fam, tol);
  const std::filesystem::path out =
      resolve_out_dir(flags) / "validation_report.json";
  write_json(out, causalkit::validation_report_json(report));
  std::cout << (report.pass ? "pass" : "fail")
            << " (tolerance " << causalkit::fmt_g17(tol) << "); report: "
            << out.string() << "\n";
  return report.pass ? 0 : 1;
}

int cmd_causal(const CommonFlags& flags) {
  KeyValueFile kv = KeyValueFile::parse_file(flags.config_path);
  causalkit::DiscretizedSpace space = load_space(kv);
  const std::string kind = kv.get_string("operator.kind");
  const std::filesystem::path out_dir = resolve_out_dir(flags);
  double tol = kv.get_double("analysis.tol", 0.0);
  if (flags.tol > 0.0) tol = flags.tol;
  const double rank_tol = kv.get_double("analysis.rank_tol", 1e-10);

  if (kind == "toeplitz" && !kv.has("family.kind") &&
      !kv.has("family.times")) {
    // Default discrete route: compatibility sweep cross-checked against the
    // tap-support test, plus the factorization defect.
    std::ifstream in(kv.get_string("operator.taps_file"));
    if (!in) {
      throw std::invalid_argument("cannot open taps file '" +
                                  kv.get_string("operator.taps_file") + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    causalkit::ImpulseResponse ir =
        causalkit::ImpulseResponse::parse_csv(buffer.str());
    reject_unknown_keys(kv);
    causalkit::FirVerdict verdict =
        causalkit::fir_causal(ir, space.dim(), tol);
    const std::filesystem::path out = out_dir / "fir_verdict.json";
    write_json(out, causalkit::fir_verdict_json(verdict));
    std::cout << (verdict.causal ? "causal" : "not causal") << " (defect "
              << causalkit::fmt_g17(verdict.defect) << "); report: "
              << out.string() << "\n";
    return verdict.causal ? 0 : 1;
  }

  causalkit::LinearMap op = load_operator(kv, space);
  causalkit::ProjectionFamily fam =
      load_family(kv, space, kind == "shift" ? "cutoff" : "truncation");
  reject_unknown_keys(kv);

  causalkit::AggregateCausality agg = causalkit::is_causal(
      causalkit::DomainOperator::everywhere(op), fam, tol, rank_tol);
  const std::filesystem::path out = out_dir / "causality_report.json";
  write_json(out, causalkit::aggregate_causality_json(agg));
  std::cout << (agg.causal ? "causal" : "not causal") << " (max defect "
            << causalkit::fmt_g17(agg.max_defect) << "); report: "
            << out.string() << "\n";
  return agg.causal ? 0 : 1;
}

int cmd_modulus(const CommonFlags& flags) {
  KeyValueFile kv = KeyValueFile::parse_file(flags.config_path);
  causalkit::DiscretizedSpace space = load_space(kv);
  causalkit::LinearMap op = load_operator(kv, space);
  causalkit::ProjectionFamily fam = load_family(
      kv, space,
      kv.get_string("operator.kind") == "shift" ? "cutoff" : "truncation");
  if (fam.size() != 1) {
    throw std::invalid_argument(
        "cmd modulus needs exactly one time in family.times (one projection)");
  }
  const double r = kv.get_double("analysis.R", 1.0);
  if (!kv.has("analysis.deltas")) {
    throw std::invalid_argument("cmd modulus requires analysis.deltas");
  }
  std::vector<double> deltas = kv.get_double_list("analysis.deltas");
  double tol = kv.get_double("analysis.tol", 0.0);
  if (flags.tol > 0.0) tol = flags.tol;
  const double rank_tol = kv.get_double("analysis.rank_tol", 1e-10);
  reject_unknown_keys(kv);

  causalkit::DomainOperator dom = causalkit::DomainOperator::everywhere(op);
  causalkit::LinearMap p = fam.at(fam.times()[0]);

  // The canonical probe set leads with the violation direction when the
  // operator is incompatible, so the headline curve is representative.
  causalkit::EquivalenceReport equivalence =
      causalkit::theorem_equivalence_check(dom, p, r, deltas, {}, tol,
                                           rank_tol);
  if (equivalence.probes.empty()) {
    throw std::invalid_argument(
        "projection has trivial range; no probe directions exist");
  }
  const Eigen::VectorXd& probe = equivalence.probes[0].direction;
  causalkit::ModulusCurve curve =
      causalkit::modulus_curve(dom, p, probe, r, deltas, rank_tol);
  const causalkit::CurveClass cls = equivalence.probes[0].classification;

  const std::filesystem::path out_dir = resolve_out_dir(flags);
  causalkit::atomic_write(out_dir / "modulus_curve.csv",
                          causalkit::modulus_curve_csv(curve));
  write_json(out_dir / "modulus_report.json",
             causalkit::modulus_curve_json(curve, cls));
  write_json(out_dir / "equivalence_report.json",
             causalkit::equivalence_report_json(equivalence));
  std::cout << causalkit::curve_class_name(cls) << " (intercept "
            << causalkit::fmt_g17(curve.intercept) << ", slope "
            << causalkit::fmt_g17(curve.slope) << "); curve: "
            << (out_dir / "modulus_curve.csv").string() << "\n";
  return cls == causalkit::CurveClass::kDecaying ? 0 : 1;
}

int cmd_counterexample(const CommonFlags& flags) {
  KeyValueFile kv = KeyValueFile::parse_file(flags.config_path);
  causalkit::CounterexampleConfig config;
  config.extent = kv.get_double("counterexample.L", config.extent);
  config.dim = kv.get_int("counterexample.dim", config.dim);
  config.shift = kv.get_double("counterexample.h", config.shift);
  config.cut = kv.get_double("counterexample.a", config.cut);
  if (kv.has("counterexample.support")) {
    const std::vector<double> support =
        kv.get_double_list("counterexample.support");
    if (support.size() != 2) {
      throw std::invalid_argument(
          "counterexample.support must be two numbers 's0,s1'");
    }
    config.support_lo = support[0];
    config.support_hi = support[1];
  }
  if (kv.has("counterexample.degrees")) {
    const std::vector<int> degrees = kv.get_int_list("counterexample.degrees");
    for (std::size_t i = 0; i < degrees.size(); ++i) {
      if (degrees[i] != static_cast<int>(i)) {
        throw std::invalid_argument(
            "counterexample.degrees must be the contiguous range 0..n");
      }
    }
    config.max_degree = static_cast<int>(degrees.size()) - 1;
  }
  config.max_degree =
      kv.get_int("counterexample.max_degree", config.max_degree);
  config.decay_tol =
      kv.get_double("counterexample.decay_tol", config.decay_tol);
  config.in_frac = kv.get_double("counterexample.in_frac", config.in_frac);
  config.out_frac = kv.get_double("counterexample.out_frac", config.out_frac);
  config.out_min_degree =
      kv.get_int("counterexample.out_min_degree", config.out_min_degree);
  reject_unknown_keys(kv);
  config.validate();

  causalkit::CounterexampleTable table = causalkit::counterexample_run(config);
  const std::filesystem::path out_dir = resolve_out_dir(flags);
  causalkit::atomic_write(out_dir / "counterexample.csv",
                          causalkit::counterexample_csv(table));
  write_json(out_dir / "counterexample_summary.json",
             causalkit::counterexample_summary_json(table));
  std::cout << causalkit::counterexample_verdict_name(table.verdict)
            << "; table: " << (out_dir / "counterexample.csv").string()
            << "\n";
  return table.verdict == causalkit::CounterexampleVerdict::kInconclusive ? 1
                                                                          : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Causality toolkit for weighted discretizations"};
  app.require_subcommand(1);

  CommonFlags flags;
  auto add_common = [&flags](CLI::App* sub) {
    sub->add_option("--config", flags.config_path, "key-value config file")
        ->required();
    sub->add_option("--out-dir", flags.out_dir,
                    "output directory (default: $CAUSALKIT_OUT_DIR or .)");
    sub->add_option("--tol", flags.tol, "override the decision tolerance");
    sub->add_option("--seed", flags.seed, "random seed (recorded only)");
  };

  CLI::App* validate =
      app.add_subcommand("validate", "score a projection family");
  CLI::App* causal =
      app.add_subcommand("causal", "causality verdict for an operator");
  CLI::App* modulus =
      app.add_subcommand("modulus", "strong-causality modulus curve");
  CLI::App* counterexample = app.add_subcommand(
      "counterexample", "closure non-causality experiment");
  add_common(validate);
  add_common(causal);
  add_common(modulus);
  add_common(counterexample);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (validate->parsed()) return cmd_validate(flags);
    if (causal->parsed()) return cmd_causal(flags);
    if (modulus->parsed()) return cmd_modulus(flags);
    return cmd_counterexample(flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
