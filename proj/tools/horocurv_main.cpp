// horocurv - command-line front end: model listing, the verification suite,
// per-direction scans, and single-direction Riccati diagnostics.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "horocurv/liouville.hpp"
#include "horocurv/report.hpp"

namespace {

using horocurv::SuiteConfig;

void emit(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::fputs(text.c_str(), stdout);
    return;
  }
  horocurv::atomic_write(out, text);
}

int cmd_models(const SuiteConfig& cfg) {
  struct Entry {
    const char* name;
    const char* description;
  };
  static constexpr Entry entries[] = {
      {"hyperbolic",
       "real hyperbolic half-space; constant sectional curvature -k^2"},
      {"complex-hyperbolic",
       "complex hyperbolic plane on the unit ball; holomorphic curvature -4, "
       "sectional curvature in [-4, -1]"},
      {"perturbed",
       "hyperbolic half-space under a compactly supported conformal bump of "
       "the given amplitude"},
  };
  if (cfg.format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const Entry& e : entries)
      arr.push_back({{"name", e.name}, {"description", e.description}});
    emit(cfg.out, nlohmann::json{{"models", arr}}.dump(2) + "\n");
  } else {
    std::string text;
    for (const Entry& e : entries)
      text += std::string(e.name) + ": " + e.description + "\n";
    emit(cfg.out, text);
  }
  return 0;
}

int cmd_verify(const SuiteConfig& cfg) {
  const horocurv::VerificationReport rep = horocurv::run_suite(cfg);
  const std::string text =
      cfg.format == "csv" ? rep.to_csv() : rep.to_json().dump(2) + "\n";
  emit(cfg.out, text);
  if (rep.aborted) std::cerr << "verify: aborted; partial report emitted\n";
  return rep.overall_pass ? 0 : 1;
}

int cmd_scan(const SuiteConfig& cfg) {
  const auto rows = horocurv::run_scan(cfg);
  const int dim = cfg.model_params().dim;
  const std::string text = cfg.format == "csv"
                               ? horocurv::scan_to_csv(rows, dim)
                               : horocurv::scan_to_json(rows).dump(2) + "\n";
  emit(cfg.out, text);
  return 0;
}

// One row per stored integration sample: time, chart position, trace S, and
// the full S matrix row-major.
std::string trajectory_csv(const horocurv::RiccatiRun& run) {
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  const int n = run.trajectory.front().position.dim();
  const int m = static_cast<int>(run.trajectory.front().S.rows());
  std::string text = "t";
  for (int i = 0; i < n; ++i) text += ",x_" + std::to_string(i);
  text += ",trace_S";
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      text += ",S_" + std::to_string(a) + "_" + std::to_string(b);
  text += "\n";
  for (const horocurv::RiccatiSample& s : run.trajectory) {
    text += num(s.t);
    for (int i = 0; i < n; ++i) text += "," + num(s.position.x[i]);
    text += "," + num(s.trace_S);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) text += "," + num(s.S(a, b));
    text += "\n";
  }
  return text;
}

int cmd_riccati(const SuiteConfig& cfg, const std::string& initial_condition,
                std::optional<double> initial_multiple) {
  const horocurv::ModelPtr model =
      horocurv::make_model(cfg.model, cfg.model_params());
  const horocurv::SphereSampler sampler(*model, model->default_base(),
                                        cfg.seed);
  const horocurv::TangentVector v = sampler.sample(0);

  horocurv::RiccatiConfig rc = cfg.riccati_config();
  rc.horizon = horocurv::chart_safe_horizon(*model, rc.horizon);
  rc.initial_condition =
      initial_condition == "guess"
          ? horocurv::InitialConditionKind::kConstantCurvatureGuess
          : horocurv::InitialConditionKind::kLargeMultipleOfIdentity;
  rc.initial_multiple = initial_multiple;

  const horocurv::RiccatiRun run =
      horocurv::stable_shape_operator(*model, v, rc);
  if (cfg.format == "csv") {
    emit(cfg.out, trajectory_csv(run));
    return 0;
  }
  nlohmann::json j;
  to_json(j, run);
  j["direction"] = std::vector<double>(v.v.data(), v.v.data() + v.v.size());
  j["traced_residual"] = horocurv::traced_riccati_residual(
      *model, run, std::min(2.0, run.horizon / 2.0));
  emit(cfg.out, j.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "horocurv: horosphere shape operators and intrinsic curvature in "
      "negatively curved model geometries"};
  app.fallthrough();
  app.set_config("--config", "", "Read options from an INI/TOML file")
      ->envname("HOROCURV_CONFIG");

  SuiteConfig cfg;
  app.add_option("--model", cfg.model, "Model geometry")
      ->check(CLI::IsMember(horocurv::model_names()))
      ->capture_default_str();
  app.add_option("--dim", cfg.dim,
                 "Chart dimension (defaults per model: 3, or 4 for the "
                 "complex hyperbolic plane)")
      ->check(CLI::Range(3, 16));
  app.add_option("--k", cfg.k, "Hyperbolic curvature scale (curvature -k^2)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--amplitude", cfg.amplitude,
                 "Perturbation amplitude (perturbed model)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_option("--samples", cfg.samples,
                 "Direction count for scans and sphere averages")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "Sampling seed")->capture_default_str();
  app.add_option("--step", cfg.step, "Integrator step size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--horizon", cfg.horizon,
                 "Riccati horizon T (integration starts at -T)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--tol", cfg.tol, "Riccati convergence tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--out", cfg.out,
                 "Output file (atomic write); stdout when omitted");

  app.add_subcommand("models", "List the registered model geometries");
  app.add_subcommand(
      "verify", "Run the identity and inequality checks and emit a report");
  app.add_subcommand("scan",
                     "Per-direction horosphere reports at the default base");
  CLI::App* riccati_cmd = app.add_subcommand(
      "riccati", "Stable shape operator for a single sampled direction");
  std::string initial_condition = "large";
  std::optional<double> initial_multiple;
  riccati_cmd
      ->add_option("--initial-condition", initial_condition,
                   "Initial value at -T: 'large' (10 sqrt|K| Id) or 'guess' "
                   "(sqrt|K| Id)")
      ->check(CLI::IsMember({"large", "guess"}))
      ->capture_default_str();
  riccati_cmd
      ->add_option("--initial-multiple", initial_multiple,
                   "Explicit multiple c for the initial value c Id")
      ->check(CLI::PositiveNumber);

  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand("models")) return cmd_models(cfg);
    if (app.got_subcommand("verify")) return cmd_verify(cfg);
    if (app.got_subcommand("scan")) return cmd_scan(cfg);
    return cmd_riccati(cfg, initial_condition, initial_multiple);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
