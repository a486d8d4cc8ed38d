#include "horocurv/report.hpp"

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <stdexcept>

#include "horocurv/errors.hpp"
#include "horocurv/liouville.hpp"
#include "horocurv/parallel.hpp"
#include "horocurv/rng.hpp"

namespace horocurv {

const std::vector<std::string>& equation_tags() {
  static const std::vector<std::string> tags = {"Eq1",   "Eq3",    "Eq4",
                                                "Eq5-6", "Eq7",    "Lemma1",
                                                "Schur"};
  return tags;
}

ModelParams SuiteConfig::model_params() const {
  ModelParams p;
  p.dim = dim.value_or(model == "complex-hyperbolic" ? 4 : 3);
  p.k = k;
  p.amplitude = amplitude;
  return p;
}

RiccatiConfig SuiteConfig::riccati_config() const {
  RiccatiConfig rc;
  rc.horizon = horizon;
  rc.convergence_tol = tol;
  rc.integrator.step = step;
  return rc;
}

nlohmann::json SuiteConfig::echo() const {
  return nlohmann::json{
      {"model", model},     {"dim", model_params().dim},
      {"k", k},             {"amplitude", amplitude},
      {"samples", samples}, {"seed", seed},
      {"step", step},       {"horizon", horizon},
      {"tol", tol},         {"format", format},
      {"out", out},
  };
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Per-model residual gates. The closed-form homogenous models are held to
// integrator-accuracy tolerances; the perturbed family runs against the wider
// finite-difference budget, and some checks change meaning there (no closed
// target for the intrinsic curvature, spread must be bounded AWAY from zero).
struct Gates {
  double matrix_tol = 1e-8;
  double traced_tol = 1e-8;
  bool flow_gate = true;
  double flow_tol = 1e-8;
  bool gauss_expected_known = true;
  double gauss_expected = 0.0;
  double gauss_tol = 1e-5;
  enum class Spread { kZero, kFixedValue, kAtLeast } spread_kind = Spread::kZero;
  double spread_value = 0.0;  // target (kFixedValue) or threshold (kAtLeast)
  double spread_tol = 1e-8;
  bool integrated = true;
  double integrated_tol = 1e-5;
};

Gates gates_for(const Model& m) {
  Gates g;
  if (m.name() == "complex-hyperbolic") {
    g.matrix_tol = 1e-6;
    g.traced_tol = 1e-6;
    // The ball chart caps the horizon (T = 8), so the check window still sees
    // the tail of the convergence transient ~ e^{-2(T-2)} in the derivative.
    g.flow_tol = 1e-3;
    g.gauss_expected = -2.0;
    g.gauss_tol = 1e-3;
    g.spread_kind = Gates::Spread::kFixedValue;
    g.spread_value = 3.0;
    g.spread_tol = 1e-6;
    g.integrated_tol = 1e-3;
    return g;
  }
  if (m.name() == "perturbed" && !m.locally_symmetric()) {
    g.matrix_tol = 1e-3;
    g.traced_tol = 1e-3;
    g.flow_gate = false;  // trace of S genuinely drifts along the flow
    g.gauss_expected_known = false;
    g.gauss_tol = 1e-9;  // decomposition consistency only
    g.spread_kind = Gates::Spread::kAtLeast;
    g.spread_value = 1e-4;
    g.integrated = false;  // integrand is not constant over directions
    return g;
  }
  if (m.name() == "perturbed") {
    // amplitude 0: hyperbolic geometry, slightly relaxed eigen-diagnostics
    g.flow_tol = 1e-5;
    g.spread_tol = 1e-5;
    return g;
  }
  return g;  // hyperbolic defaults
}

double elapsed_seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::vector<double> to_std(const Vec& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

VerificationReport run_suite(const SuiteConfig& cfg) {
  if (cfg.samples < 1)
    throw std::invalid_argument("samples must be >= 1");

  VerificationReport rep;
  rep.config = cfg.echo();

  const ModelPtr model = make_model(cfg.model, cfg.model_params());
  const Model& m = *model;
  rep.model_info = nlohmann::json{
      {"name", m.name()},
      {"dim", m.dim()},
      {"curvature_mode", to_string(m.curvature_mode())},
      {"locally_symmetric", m.locally_symmetric()},
      {"parameters", m.parameters()},
  };

  const Gates gates = gates_for(m);
  const Point base = m.default_base();
  RiccatiConfig rcfg = cfg.riccati_config();
  rcfg.horizon = chart_safe_horizon(m, rcfg.horizon);
  rep.config["horizon"] = rcfg.horizon;  // echo the effective value
  const double window = std::min(2.0, rcfg.horizon / 2.0);

  std::optional<TangentVector> v0;
  std::optional<RiccatiRun> run;

  const auto check = [&](const std::string& name, const std::string& tag,
                         auto&& body) {
    if (rep.aborted) return;
    CheckRecord rec;
    rec.name = name;
    rec.equation = tag;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      body(rec);
      rec.pass = rec.diagnostic || (rec.comparison == "ge"
                                        ? rec.residual >= rec.tolerance
                                        : rec.residual <= rec.tolerance);
    } catch (const std::exception& e) {
      rec.pass = false;
      rec.details["error"] = e.what();
      rep.aborted = true;
    }
    rec.seconds = elapsed_seconds(t0);
    rep.checks.push_back(std::move(rec));
  };

  // -- stable limit of the Riccati flow (shared by the later checks) --------
  check("riccati_stable_limit", "Eq1", [&](CheckRecord& rec) {
    const SphereSampler sampler(m, base, cfg.seed);
    v0 = sampler.sample(0);
    run = stable_shape_operator(m, *v0, rcfg);
    rec.residual = run->convergence_gap;
    rec.tolerance = rcfg.convergence_tol;
    nlohmann::json diag;
    to_json(diag, *run);
    rep.riccati_diagnostics = std::move(diag);
    rec.details["principal_curvatures"] = to_std(run->S0.eigenvalues());
  });

  check("riccati_matrix_residual", "Eq1", [&](CheckRecord& rec) {
    rec.residual = matrix_riccati_residual(m, *run, window);
    rec.tolerance = gates.matrix_tol;
    rec.details["window"] = window;
  });

  check("riccati_traced_residual", "Eq3", [&](CheckRecord& rec) {
    rec.residual = traced_riccati_residual(m, *run, window);
    rec.tolerance = gates.traced_tol;
    rec.details["window"] = window;
  });

  check("trace_flow_invariance", "Eq4", [&](CheckRecord& rec) {
    rec.residual = flow_derivative_check(*run);
    if (gates.flow_gate) {
      rec.tolerance = gates.flow_tol;
    } else {
      rec.diagnostic = true;
      rec.details["note"] =
          "trace varies along the flow off the symmetric models; "
          "magnitude reported without a gate";
    }
  });

  check("gauss_scalar_curvature", "Eq7", [&](CheckRecord& rec) {
    const RicciScalar rs = ricci_and_scalar(m, *v0);
    const double tr = run->S0.matrix.trace();
    const double tr2 = (run->S0.matrix * run->S0.matrix).trace();
    const double s = tr * tr - tr2 - 2.0 * rs.ricci + rs.scalar;
    rec.details = nlohmann::json{{"s", s},
                                 {"trace_S", tr},
                                 {"trace_S2", tr2},
                                 {"ricci_v", rs.ricci},
                                 {"scalar", rs.scalar}};
    if (gates.gauss_expected_known) {
      rec.residual = std::abs(s - gates.gauss_expected);
      rec.details["expected"] = gates.gauss_expected;
    } else {
      // No closed-form target off the homogeneous models; require the
      // published value to match its own decomposition exactly.
      rec.residual =
          std::abs((tr * tr - tr2 - 2.0 * rs.ricci + rs.scalar) - s);
      rec.details["note"] = "decomposition consistency; no closed-form target";
    }
    rec.tolerance = gates.gauss_tol;
  });

  check("eigenvalue_gap_model", "Lemma1", [&](CheckRecord& rec) {
    const Vec ev = run->S0.eigenvalues();
    rec.residual = lemma_gap(ev);
    rec.comparison = "ge";
    rec.tolerance = -1e-10;
    rec.details["principal_curvatures"] = to_std(ev);
  });

  check("eigenvalue_gap_random", "Lemma1", [&](CheckRecord& rec) {
    CounterRng rng(cfg.seed, 1001);
    const int entries = m.dim() - 1;
    double min_gap = std::numeric_limits<double>::infinity();
    for (int t = 0; t < 1000; ++t) {
      Vec lam(entries);
      for (int i = 0; i < entries; ++i) lam[i] = -3.0 + 6.0 * rng.next_double();
      min_gap = std::min(min_gap, lemma_gap(lam));
    }
    rec.residual = min_gap;
    rec.comparison = "ge";
    rec.tolerance = -1e-12;
    rec.details["tuples"] = 1000;
  });

  check("eigenvalue_gap_equal_tuples", "Lemma1", [&](CheckRecord& rec) {
    CounterRng rng(cfg.seed, 1002);
    const int entries = m.dim() - 1;
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
      const Vec lam = Vec::Constant(entries, -3.0 + 6.0 * rng.next_double());
      worst = std::max(worst, std::abs(lemma_gap(lam)));
    }
    rec.residual = worst;
    rec.tolerance = 1e-12;
    rec.details["tuples"] = 1000;
  });

  check("sectional_spread", "Schur", [&](CheckRecord& rec) {
    // Deterministic probes: the base point plus two offsets that land inside
    // the perturbed model's bump support (and are generic for the others).
    std::vector<Point> probes;
    probes.push_back(base);
    Vec off = base.x;
    off[0] += 0.375;
    probes.emplace_back(off);
    off = base.x;
    off[0] += 0.3;
    off[m.dim() - 1] -= 0.2;
    probes.emplace_back(off);

    double spread = 0.0;
    for (std::size_t i = 0; i < probes.size(); ++i)
      spread = std::max(
          spread, sectional_spread(m, probes[i], 32, cfg.seed + 31 * i));
    rec.details["spread"] = spread;
    rec.details["probes"] = probes.size();
    switch (gates.spread_kind) {
      case Gates::Spread::kZero:
        rec.residual = spread;
        rec.tolerance = gates.spread_tol;
        break;
      case Gates::Spread::kFixedValue:
        rec.residual = std::abs(spread - gates.spread_value);
        rec.tolerance = gates.spread_tol;
        rec.details["expected"] = gates.spread_value;
        break;
      case Gates::Spread::kAtLeast:
        rec.residual = spread;
        rec.comparison = "ge";
        rec.tolerance = gates.spread_value;
        break;
    }
  });

  if (gates.integrated) {
    check("integrated_trace_square", "Eq5-6", [&](CheckRecord& rec) {
      const MonteCarloEstimate est = sphere_average(
          m, base, cfg.seed, static_cast<std::uint64_t>(cfg.samples),
          [&](const TangentVector& v) {
            const RiccatiRun r = stable_shape_operator(m, v, rcfg);
            return (r.S0.matrix * r.S0.matrix).trace();
          });
      const RicciScalar rs = ricci_and_scalar(m, *v0);
      const double target = -rs.scalar / m.dim();
      rec.residual = std::abs(est.mean - target);
      rec.tolerance = gates.integrated_tol;
      rec.details = nlohmann::json{{"mean", est.mean},
                                   {"std_error", est.std_error},
                                   {"count", est.count},
                                   {"target", target}};
      rep.sampling = nlohmann::json{
          {"seed", cfg.seed},
          {"count", est.count},
          {"trace_square_mean", est.mean},
          {"trace_square_std_error", est.std_error},
      };
    });
  } else {
    rep.sampling = nlohmann::json{
        {"seed", cfg.seed},
        {"skipped",
         "direction average of trace(S^2) has no constant target off the "
         "locally symmetric models"},
    };
  }

  check("ricci_mean_fubini", "Eq5-6", [&](CheckRecord& rec) {
    const std::uint64_t count =
        std::max<std::uint64_t>(static_cast<std::uint64_t>(cfg.samples), 1000);
    const MonteCarloEstimate est =
        sphere_average(m, base, cfg.seed, count,
                       [&](const TangentVector& v) { return ricci(m, v); });
    const RicciScalar rs = ricci_and_scalar(m, *v0);
    const double target = rs.scalar / m.dim();
    rec.residual = std::abs(est.mean - target);
    // Statistical gate: three standard errors plus an absolute floor for
    // constant integrands (where the standard error vanishes).
    rec.tolerance = 3.0 * est.std_error + 1e-12;
    rec.details = nlohmann::json{{"mean", est.mean},
                                 {"std_error", est.std_error},
                                 {"count", est.count},
                                 {"target", target}};
  });

  rep.overall_pass =
      !rep.aborted &&
      std::all_of(rep.checks.begin(), rep.checks.end(),
                  [](const CheckRecord& r) { return r.pass; });
  return rep;
}

nlohmann::json VerificationReport::to_json(bool include_timing) const {
  nlohmann::json checks_json = nlohmann::json::array();
  for (const CheckRecord& c : checks) {
    checks_json.push_back(nlohmann::json{
        {"name", c.name},
        {"equation", c.equation},
        {"residual", c.residual},
        {"tolerance", c.tolerance},
        {"comparison", c.comparison},
        {"pass", c.pass},
        {"diagnostic", c.diagnostic},
        {"details", c.details},
    });
  }
  nlohmann::json j{
      {"schema_version", schema_version},
      {"model", model_info},
      {"config", config},
      {"checks", std::move(checks_json)},
      {"riccati", riccati_diagnostics},
      {"sampling", sampling},
      {"overall_pass", overall_pass},
      {"aborted", aborted},
  };
  if (include_timing) {
    nlohmann::json per_check;
    double total = 0.0;
    for (const CheckRecord& c : checks) {
      per_check[c.name] = c.seconds;
      total += c.seconds;
    }
    j["timing"] =
        nlohmann::json{{"per_check_seconds", std::move(per_check)},
                       {"total_seconds", total}};
  }
  return j;
}

std::string VerificationReport::to_csv() const {
  std::string text = "name,equation,residual,tolerance,comparison,pass,diagnostic\n";
  for (const CheckRecord& c : checks) {
    text += c.name + "," + c.equation + "," + num(c.residual) + "," +
            num(c.tolerance) + "," + c.comparison + "," +
            (c.pass ? "true" : "false") + "," +
            (c.diagnostic ? "true" : "false") + "\n";
  }
  return text;
}

std::vector<HorosphereReport> run_scan(const SuiteConfig& cfg) {
  if (cfg.samples < 1)
    throw std::invalid_argument("samples must be >= 1");
  const ModelPtr model = make_model(cfg.model, cfg.model_params());
  const SphereSampler sampler(*model, model->default_base(), cfg.seed);
  RiccatiConfig rcfg = cfg.riccati_config();
  rcfg.horizon = chart_safe_horizon(*model, rcfg.horizon);
  std::vector<HorosphereReport> rows(static_cast<std::size_t>(cfg.samples));
  parallel_for(rows.size(), [&](std::size_t i) {
    rows[i] = analyze_direction(*model, sampler.sample(i), rcfg);
  });
  return rows;
}

std::string scan_to_csv(const std::vector<HorosphereReport>& rows, int dim) {
  std::string text = HorosphereReport::csv_header(dim) + "\n";
  for (const HorosphereReport& r : rows) text += r.csv_row() + "\n";
  return text;
}

nlohmann::json scan_to_json(const std::vector<HorosphereReport>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const HorosphereReport& r : rows) {
    nlohmann::json item;
    to_json(item, r);
    arr.push_back(std::move(item));
  }
  return nlohmann::json{{"schema_version", kReportSchemaVersion},
                        {"rows", std::move(arr)}};
}

void atomic_write(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp(target);
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw std::runtime_error("cannot open '" + tmp.string() +
                               "' for writing");
    out << text;
    out.flush();
    if (!out)
      throw std::runtime_error("failed writing '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

}  // namespace horocurv
