#include "finsler/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <nlohmann/json.hpp>

namespace finsler {

const int kReportSchemaVersion = 1;

std::string format_double(double x) {
  std::array<char, 32> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

std::string curve_csv(const NormCurve& curve, int rows) {
  if (rows < 2) throw ValidationError("curve_csv: need at least 2 rows");
  std::string out = "t,f,df,d2f,d3f,margin\n";
  const Interval dom = curve.domain();
  for (int i = 0; i < rows; ++i) {
    const double t = grid_point(dom, i, rows);
    const NormJet j = curve.jet_at(t);
    out += format_double(t);
    out += ',';
    out += format_double(j.f);
    out += ',';
    out += format_double(j.df);
    out += ',';
    out += format_double(j.d2f);
    out += ',';
    out += format_double(j.d3f);
    out += ',';
    out += format_double(convexity_margin(j));
    out += '\n';
  }
  return out;
}

std::string report_json(const BatchReport& report) {
  using json = nlohmann::ordered_json;
  json root;
  root["schema_version"] = kReportSchemaVersion;

  const RunConfig& cfg = report.config;
  json config;
  config["rng_seed"] = cfg.rng_seed;
  config["n_cases"] = cfg.n_cases;
  config["t_half_width"] = cfg.t_half_width;
  config["tol_ode"] = cfg.tol_ode;
  config["tol_compare"] = cfg.tol_compare;
  config["seed_box"] = {
      {"a0", {cfg.seed_box.a0_lo, cfg.seed_box.a0_hi}},
      {"a1_abs", {cfg.seed_box.a1_abs_lo, cfg.seed_box.a1_abs_hi}},
      {"a2", {cfg.seed_box.a2_lo, cfg.seed_box.a2_hi}},
      {"a3", {cfg.seed_box.a3_lo, cfg.seed_box.a3_hi}},
      {"margin", cfg.seed_box.margin},
  };
  root["config"] = config;

  json cases = json::array();
  for (const CaseReport& c : report.cases) {
    json entry;
    entry["seed"] = {c.seed.a0, c.seed.a1, c.seed.a2, c.seed.a3};
    entry["matrix"] = {
        {"a", c.matrix.a}, {"b", c.matrix.b}, {"c", c.matrix.c}, {"d", c.matrix.d}};
    entry["sup_error"] = c.sup_error;
    entry["status"] = to_string(c.status);
    entry["diagnostics"] = {
        {"spray_quadratic_residual", c.spray_quadratic_residual},
        {"landsberg_drift", c.landsberg_drift},
        {"covered", {c.covered.lo, c.covered.hi}},
    };
    cases.push_back(entry);
  }
  root["cases"] = cases;

  root["summary"] = {
      {"pass", report.pass},
      {"fail", report.fail},
      {"truncated", report.truncated},
      {"max_sup_error", report.max_sup_error},
  };
  return root.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open " + path + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ValidationError("failed writing " + path);
}

}  // namespace finsler
