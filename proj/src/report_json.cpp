#include "recmle/report_json.hpp"

namespace recmle {

Json to_json(const EstimateReport& r) {
  Json j;
  j["family"] = r.family;
  j["source"] = to_string(r.source);
  j["n_or_m"] = r.count;
  j["sufficient_stat"] = r.sufficient_stat;
  j["theta_hat"] = r.theta_hat;
  return j;
}

Json to_json(const SeriesValue& s) {
  Json j;
  j["value"] = s.value;
  j["terms_used"] = s.terms_used;
  j["in_natural_bounds"] = s.in_natural_bounds;
  j["regime_note"] = to_string(s.regime);
  return j;
}

Json to_json(const ExperimentConfig& c) {
  Json j;
  j["family"] = c.family_text;
  j["theta"] = c.theta;
  j["sizes"] = c.sizes;
  j["x_grid"] = c.x_grid;
  j["reps"] = c.reps;
  j["seed"] = c.seed;
  j["quad_tol"] = c.quad_tol;
  j["g_base"] = c.g_base;
  return j;
}

Json to_json(const MomentReport& r) {
  Json j;
  j["target"] = to_string(r.target);
  j["source"] = to_string(r.source);
  j["size"] = r.size;
  j["x"] = r.x;
  if (r.series) {
    j["series_value"] = to_json(*r.series);
  }
  switch (r.quad_status) {
    case QuadStatus::converged:
      j["quad_status"] = "converged";
      j["quad_value"] = {{"value", r.quad->value}, {"error_bound", r.quad->error_bound}};
      break;
    case QuadStatus::divergent:
      j["quad_status"] = "divergent";
      break;
    case QuadStatus::not_applicable:
      j["quad_status"] = "not_applicable";
      break;
  }
  j["mc_value"] = r.mc_value;
  j["mc_stderr"] = r.mc_stderr;
  j["reps"] = r.reps;
  j["failures"] = r.failures;
  j["config"] = to_json(r.config);
  return j;
}

Json to_json(const ValidationReport& r) {
  Json j;
  j["family"] = r.family;
  j["passed"] = r.passed();
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json cj;
    cj["name"] = c.name;
    cj["passed"] = c.passed;
    cj["residual"] = c.residual;
    if (c.first_failure) {
      cj["first_failure"] = *c.first_failure;
    }
    if (!c.detail.empty()) {
      cj["detail"] = c.detail;
    }
    checks.push_back(std::move(cj));
  }
  j["checks"] = std::move(checks);
  return j;
}

Json to_json(const ConsistencyPoint& p) {
  Json j;
  j["size"] = p.size;
  j["probability"] = p.probability;
  j["failures"] = p.failures;
  return j;
}

}  // namespace recmle
