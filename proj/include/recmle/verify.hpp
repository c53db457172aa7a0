#pragma once

// Reproducible verification experiments, one suite per claim. Each suite
// pins its sizes, replication counts and tolerances; only the seed (and the
// worker count, which never changes results) comes from the caller.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "recmle/montecarlo.hpp"
#include "recmle/report_json.hpp"

namespace recmle {

struct VerifyOptions {
  std::uint64_t seed = 0;
  unsigned workers = 1;
  // Record simulator override. theorem1 defaults to the sequential
  // generator, every other suite to direct simulation.
  std::optional<DataSource> records_mode;
};

struct CheckOutcome {
  std::string name;
  double value = 0.0;
  std::string relation;  // "<", ">", "in", "decreasing", ...
  double threshold = 0.0;
  bool passed = false;
  bool divergent = false;  // a required quadrature failed to converge
  std::vector<double> values;
  std::string note;
};

struct SuiteReport {
  std::string suite;
  std::string claim;
  std::vector<CheckOutcome> checks;

  bool passed() const;
  bool divergent() const;
};

const std::vector<std::string>& suite_names();

// Throws ArgumentError for an unknown suite name.
SuiteReport run_suite(const std::string& name, const VerifyOptions& options);

// "all" runs every suite in suite_names() order.
std::vector<SuiteReport> run_suites(const std::string& selector, const VerifyOptions& options);

Json to_json(const SuiteReport& report);

// 0 when every check passes, 2 when a required quadrature diverged, else 1.
int verify_exit_code(const std::vector<SuiteReport>& reports);

// 2 K_1(2) via the trapezoid rule on K_1(z) = int_0^inf exp(-z cosh u) cosh u du
// in extended precision. Reference value for the quadrature self-check.
double bessel_reference_2k1_2();

}  // namespace recmle
