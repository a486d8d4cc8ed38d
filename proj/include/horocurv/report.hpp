// report.hpp - verification suite orchestration and report serialization.
// A suite run executes the identity checks in dependency order (geodesic
// transport feeds Riccati, Riccati feeds Gauss, Gauss feeds the integrated
// identities), tags every record with the identity it verifies, and emits a
// deterministic JSON/CSV report.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "horocurv/analysis.hpp"
#include "horocurv/model.hpp"
#include "horocurv/riccati.hpp"

namespace horocurv {

inline constexpr int kReportSchemaVersion = 1;

// The fixed set of identity tags a check record may carry.
const std::vector<std::string>& equation_tags();

struct SuiteConfig {
  std::string model = "hyperbolic";
  std::optional<int> dim;      // defaulted per model
  double k = 1.0;
  double amplitude = 0.05;
  int samples = 100;
  std::uint64_t seed = 0;
  double step = 1e-3;
  double horizon = 30.0;
  double tol = 1e-6;           // Riccati convergence tolerance
  std::string format = "json";
  std::string out;             // empty = stdout

  ModelParams model_params() const;
  RiccatiConfig riccati_config() const;
  nlohmann::json echo() const;  // effective values, for provenance
};

struct CheckRecord {
  std::string name;
  std::string equation;    // one of equation_tags()
  double residual = 0.0;
  double tolerance = 0.0;
  // "le": pass iff residual <= tolerance; "ge": pass iff residual >= tolerance
  // (threshold checks such as the perturbed-model curvature spread).
  std::string comparison = "le";
  bool pass = false;
  bool diagnostic = false;  // reported but never gates the suite
  nlohmann::json details;   // per-check extras (sampling stats, values, ...)
  double seconds = 0.0;     // wall clock; serialized only in the timing section
};

struct VerificationReport {
  int schema_version = kReportSchemaVersion;
  nlohmann::json model_info;
  nlohmann::json config;
  std::vector<CheckRecord> checks;
  nlohmann::json riccati_diagnostics;
  nlohmann::json sampling;
  bool overall_pass = false;
  bool aborted = false;        // a check raised a hard error; report is partial

  // Timing lives in its own section so the rest of the document is
  // byte-identical across runs with the same config and seed.
  nlohmann::json to_json(bool include_timing = true) const;
  std::string to_csv() const;  // one row per check record
};

// Runs the full check suite for the configured model. Hard errors inside a
// check mark the report aborted (partial) instead of propagating.
VerificationReport run_suite(const SuiteConfig& cfg);

// Per-direction scan at the model's default base point.
std::vector<HorosphereReport> run_scan(const SuiteConfig& cfg);
std::string scan_to_csv(const std::vector<HorosphereReport>& rows, int dim);
nlohmann::json scan_to_json(const std::vector<HorosphereReport>& rows);

// Writes text to path atomically (temp file + rename, same directory).
void atomic_write(const std::string& path, const std::string& text);

}  // namespace horocurv
