// recmle: command-line front end for estimation, simulation, closed-form
// tables and the verification suites.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or input error.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "manifest.hpp"
#include "recmle/closedform.hpp"
#include "recmle/csv.hpp"
#include "recmle/error.hpp"
#include "recmle/estimate.hpp"
#include "recmle/family.hpp"
#include "recmle/format.hpp"
#include "recmle/records.hpp"
#include "recmle/report_json.hpp"
#include "recmle/rng.hpp"
#include "recmle/verify.hpp"

namespace recmle::cli {
namespace {

constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

struct Flags {
  std::string family = "exponential";
  double theta = std::numeric_limits<double>::quiet_NaN();
  std::optional<std::uint64_t> seed;
  std::string out;
  bool json = false;
  bool manifest = false;
  unsigned workers = 1;

  // simulate
  std::optional<std::size_t> n;
  std::optional<std::size_t> records;
  std::string records_mode = "direct";

  // fit / eval
  std::string input;
  bool use_records = false;
  std::string what;
  std::optional<double> from;
  std::optional<double> to;
  std::size_t points = 101;

  // table
  std::string formula;
  std::string sizes;
  double x = 1.0;
  double k = std::numbers::e;
  std::string form = "proof";

  // verify
  std::string suite;
};

class Output {
 public:
  Output(const Flags& flags, RunManifest& manifest) : flags_(flags), manifest_(manifest) {}

  void emit(const std::string& text) {
    if (flags_.out.empty()) {
      std::cout << text << std::flush;
      manifest_.add_output("<stdout>", text);
      return;
    }
    std::ofstream f(flags_.out, std::ios::binary);
    if (!f || !(f << text) || !f.flush()) {
      throw ArgumentError("cannot write '" + flags_.out + "'");
    }
    manifest_.add_output(flags_.out, text);
  }

 private:
  const Flags& flags_;
  RunManifest& manifest_;
};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    throw ArgumentError("cannot read '" + path + "'");
  }
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

double require_theta_flag(const Flags& f) {
  if (std::isnan(f.theta)) {
    throw ArgumentError("--theta is required");
  }
  return f.theta;
}

std::uint64_t require_seed(const Flags& f) {
  if (!f.seed) {
    throw ArgumentError("--seed is required for randomized commands");
  }
  return *f.seed;
}

// "a..b" or "a", comma separated.
std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  const auto to_size = [&](const std::string& s) {
    const double v = parse_double(s).value_or(-1.0);
    if (!(v >= 0.0) || v != std::floor(v) || v > 1e9) {
      throw ArgumentError("bad size '" + s + "' in --sizes");
    }
    return static_cast<std::size_t>(v);
  };
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_size(item));
      continue;
    }
    const std::size_t a = to_size(item.substr(0, dots));
    const std::size_t b = to_size(item.substr(dots + 2));
    if (b < a) {
      throw ArgumentError("empty size range '" + item + "'");
    }
    for (std::size_t n = a; n <= b; ++n) {
      out.push_back(n);
    }
  }
  if (out.empty()) {
    throw ArgumentError("--sizes is empty");
  }
  return out;
}

EstimateReport fit_input(const FamilySpec& fam, const Flags& f) {
  if (f.input.empty()) {
    throw ArgumentError("--input is required");
  }
  const auto values = parse_value_column(read_file(f.input));
  if (f.use_records) {
    return mle_theta_records(fam, extract_upper_records(values));
  }
  return mle_theta_sample(fam, values);
}

int cmd_families(const Flags& f, Output& out) {
  if (f.json) {
    Json arr = Json::array();
    for (const auto& e : family_registry()) {
      Json j;
      j["name"] = e.name;
      j["A"] = e.transform_text;
      j["B"] = e.rate_text;
      j["support"] = e.support_text;
      Json params = Json::array();
      for (const auto& p : e.parameters) {
        params.push_back(
            {{"key", p.key}, {"default", p.default_value}, {"description", p.description}});
      }
      j["parameters"] = std::move(params);
      arr.push_back(std::move(j));
    }
    out.emit(arr.dump(2) + "\n");
    return 0;
  }
  std::string text;
  for (const auto& e : family_registry()) {
    std::string grammar = e.name;
    for (std::size_t i = 0; i < e.parameters.size(); ++i) {
      grammar += (i == 0 ? "[:" : ",") + e.parameters[i].key + "=" +
                 format_double(e.parameters[i].default_value);
    }
    if (!e.parameters.empty()) {
      grammar += "]";
    }
    text += grammar + "\t" + e.transform_text + "\t" + e.rate_text +
            "\tsupport " + e.support_text + "\n";
  }
  out.emit(text);
  return 0;
}

int cmd_simulate(const Flags& f, Output& out, RunManifest& manifest) {
  const FamilySpec fam = parse_family(f.family);
  const double theta = require_theta_flag(f);
  require_theta(fam, theta);
  const std::uint64_t seed = require_seed(f);
  manifest.set_seed(seed);
  if (f.n.has_value() == f.records.has_value()) {
    throw ArgumentError("exactly one of --n and --records is required");
  }
  RngStream rng(seed, 0);
  if (f.n) {
    if (*f.n == 0) {
      throw ArgumentError("--n must be at least 1");
    }
    out.emit(to_csv(sample_iid(fam, theta, *f.n, rng)));
    return 0;
  }
  if (*f.records == 0) {
    throw ArgumentError("--records must be at least 1");
  }
  const RecordSequence rs = f.records_mode == "sequential"
                                ? sample_records_sequential(fam, theta, *f.records, rng)
                                : sample_records_direct(fam, theta, *f.records, rng);
  out.emit(to_csv(rs));
  return 0;
}

int cmd_fit(const Flags& f, Output& out) {
  const FamilySpec fam = parse_family(f.family);
  out.emit(to_json(fit_input(fam, f)).dump(2) + "\n");
  return 0;
}

int cmd_eval(const Flags& f, Output& out) {
  const FamilySpec fam = parse_family(f.family);
  const bool plugin = f.what == "pdf-hat" || f.what == "cdf-hat";
  std::optional<EstimateReport> est;
  double theta = 0.0;
  if (plugin) {
    est = fit_input(fam, f);
    theta = est->theta_hat;
  } else {
    theta = require_theta_flag(f);
    require_theta(fam, theta);
  }

  const double lo = f.from.value_or(fam.support_lo);
  const double hi = f.to.value_or(quantile(fam, theta, 0.99));
  if (!(lo >= fam.support_lo) || !(hi <= fam.support_hi) || !(lo <= hi) || !std::isfinite(hi)) {
    throw ArgumentError("grid [" + format_double(lo) + ", " + format_double(hi) +
                        "] is outside the support of " + fam.name);
  }
  if (f.points == 0) {
    throw ArgumentError("--points must be at least 1");
  }

  std::string text = "x,value\n";
  for (std::size_t i = 0; i < f.points; ++i) {
    const double x =
        f.points == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(f.points - 1);
    double v = 0.0;
    if (f.what == "pdf") {
      v = pdf(fam, theta, x);
    } else if (f.what == "cdf") {
      v = cdf(fam, theta, x);
    } else if (f.what == "pdf-hat") {
      v = plugin_pdf(fam, est->count, est->sufficient_stat, x);
    } else {
      v = plugin_cdf(fam, est->count, est->sufficient_stat, x);
    }
    text += format_double(x) + "," + format_double(v) + "\n";
  }
  out.emit(text);
  return 0;
}

int cmd_table(const Flags& f, Output& out, const CLI::App& sub) {
  const std::vector<std::size_t> sizes = parse_sizes(f.sizes);
  const double theta = require_theta_flag(f);
  const MseForm form = f.form == "as-printed" ? MseForm::as_printed : MseForm::proof;
  const bool family_given = sub.count("--family") > 0;
  const FamilySpec fam = parse_family(f.family);
  require_theta(fam, theta);

  std::size_t min_size = 1;
  if (f.formula == "E-pdf") {
    min_size = 2;
  } else if (f.formula == "MSE-pdf") {
    min_size = 3;
  }
  for (const std::size_t n : sizes) {
    if (n < min_size) {
      throw ArgumentError(f.formula + " needs size >= " + std::to_string(min_size));
    }
  }
  if (f.formula == "alpha-n" && fam.rate_map != RateMap::reciprocal) {
    throw ArgumentError("alpha-n applies to families with B(theta) = 1/theta");
  }
  if (f.formula == "mse-g" && family_given && fam.rate_map != RateMap::identity) {
    throw ArgumentError("mse-g applies to families with B(theta) = theta");
  }

  std::vector<SeriesValue> rows;
  for (const std::size_t n : sizes) {
    if (f.formula == "E-cdf") {
      rows.push_back(expected_cdf_hat_series(fam, theta, f.x, n));
    } else if (f.formula == "E-pdf") {
      rows.push_back(expected_pdf_hat_series(fam, theta, f.x, n));
    } else if (f.formula == "MSE-cdf") {
      rows.push_back(mse_cdf_hat_series(fam, theta, f.x, n, form));
    } else if (f.formula == "MSE-pdf") {
      rows.push_back(mse_pdf_hat_series(fam, theta, f.x, n, form));
    } else if (f.formula == "alpha-n") {
      rows.push_back(SeriesValue{alpha_n_exponential(theta, n), 1, true, Regime::asymptotic_ok});
    } else {
      rows.push_back(mse_g_power_series(theta, n, f.k));
    }
  }

  if (f.json) {
    Json arr = Json::array();
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      Json j;
      j["size"] = sizes[i];
      j["series_value"] = to_json(rows[i]);
      arr.push_back(std::move(j));
    }
    out.emit(arr.dump(2) + "\n");
    return 0;
  }
  std::string text = "size,value,in_bounds,regime\n";
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    text += std::to_string(sizes[i]) + "," + format_double(rows[i].value) + "," +
            (rows[i].in_natural_bounds ? "true" : "false") + "," + to_string(rows[i].regime) +
            "\n";
  }
  out.emit(text);
  return 0;
}

int cmd_verify(const Flags& f, Output& out, RunManifest& manifest, const CLI::App& sub) {
  VerifyOptions opt;
  opt.seed = require_seed(f);
  manifest.set_seed(opt.seed);
  opt.workers = f.workers;
  if (sub.count("--records-mode") > 0) {
    opt.records_mode =
        f.records_mode == "sequential" ? DataSource::records : DataSource::records_direct;
  }
  const auto reports = run_suites(f.suite, opt);

  if (f.json) {
    Json arr = Json::array();
    for (const auto& r : reports) {
      arr.push_back(to_json(r));
    }
    out.emit(arr.dump(2) + "\n");
  } else {
    std::string text;
    for (const auto& r : reports) {
      text += r.suite + ": " + (r.passed() ? "PASS" : "FAIL") + "  (" + r.claim + ")\n";
      for (const auto& c : r.checks) {
        text += std::string("  ") + (c.passed ? "PASS" : "FAIL") + "  " + c.name + ": " +
                format_double(c.value) + " " + c.relation;
        if (c.relation.find('<') != std::string::npos || c.relation == "in" ||
            c.relation == "outside") {
          text += " " + format_double(c.threshold);
        }
        if (c.divergent) {
          text += "  [divergent]";
        }
        text += "\n";
      }
    }
    out.emit(text);
  }
  const int code = verify_exit_code(reports);
  return code == 2 ? kExitUsage : code == 1 ? kExitVerifyFailed : 0;
}

// Expands `--config path` into explicit flags. Keys are option names without
// the leading dashes; flags given on the command line win.
std::vector<std::string> expand_config(const CLI::App& app, std::vector<std::string> args) {
  std::optional<std::string> path;
  for (auto it = args.begin(); it != args.end();) {
    if (*it == "--config") {
      if (std::next(it) == args.end()) {
        throw ArgumentError("--config needs a path");
      }
      path = *std::next(it);
      it = args.erase(it, it + 2);
    } else if (it->rfind("--config=", 0) == 0) {
      path = it->substr(9);
      it = args.erase(it);
    } else {
      ++it;
    }
  }
  if (!path) {
    return args;
  }
  if (args.empty()) {
    throw ArgumentError("--config needs a subcommand");
  }
  const CLI::App* sub = nullptr;
  for (const CLI::App* s : app.get_subcommands({})) {
    if (s->get_name() == args.front()) {
      sub = s;
    }
  }
  if (sub == nullptr) {
    return args;
  }

  std::istringstream in(read_file(*path));
  for (const CLI::ConfigItem& item : CLI::ConfigINI().from_config(in)) {
    const std::string flag = "--" + item.name;
    const bool given = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (given) {
      continue;
    }
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    if (opt == nullptr || item.inputs.empty()) {
      throw ArgumentError("config key '" + item.name + "' is not an option of " + sub->get_name());
    }
    if (opt->get_expected_max() == 0) {
      const std::string& v = item.inputs.front();
      if (v == "true" || v == "1" || v == "on" || v == "yes") {
        args.push_back(flag);
      }
      continue;
    }
    for (const auto& v : item.inputs) {
      args.push_back(flag);
      args.push_back(v);
    }
  }
  return args;
}

int run(int argc, char** argv) {
  CLI::App app{"Maximum-likelihood estimation from samples and upper records", "recmle"};
  app.set_version_flag("--version", RECMLE_VERSION);
  app.require_subcommand(1);

  Flags f;
  const auto common = [&f](CLI::App* s, bool family, bool random) {
    if (family) {
      s->add_option("--family", f.family, "family, e.g. exponential, weibull:alpha=2");
      s->add_option("--theta", f.theta, "parameter value");
    }
    if (random) {
      s->add_option("--seed", f.seed, "RNG seed (required)");
      s->add_option("--workers", f.workers, "worker threads")->check(CLI::Range(1u, 256u));
    }
    s->add_option("--out", f.out, "write output here instead of stdout");
    s->add_flag("--json", f.json, "JSON output");
    s->add_flag("--manifest", f.manifest, "print a run manifest to stderr");
  };

  CLI::App* families = app.add_subcommand("families", "list builtin families");
  common(families, false, false);

  CLI::App* simulate = app.add_subcommand("simulate", "draw a sample or record sequence as CSV");
  common(simulate, true, true);
  simulate->add_option("--n", f.n, "sample size");
  simulate->add_option("--records", f.records, "number of upper records");
  simulate->add_option("--records-mode", f.records_mode, "record simulator")
      ->check(CLI::IsMember({"direct", "sequential"}));

  CLI::App* fit = app.add_subcommand("fit", "MLE of theta from a CSV with a value column");
  common(fit, true, false);
  fit->add_option("--input", f.input, "input CSV")->required();
  fit->add_flag("--records", f.use_records, "extract upper records and fit from them");

  CLI::App* eval = app.add_subcommand("eval", "evaluate pdf, cdf or plug-in estimates on a grid");
  common(eval, true, false);
  eval->add_option("--what", f.what, "pdf, cdf, pdf-hat or cdf-hat")
      ->required()
      ->check(CLI::IsMember({"pdf", "cdf", "pdf-hat", "cdf-hat"}));
  eval->add_option("--from", f.from, "grid start (default: support start)");
  eval->add_option("--to", f.to, "grid end (default: 0.99 quantile)");
  eval->add_option("--points", f.points, "grid points");
  eval->add_option("--input", f.input, "data CSV for pdf-hat and cdf-hat");
  eval->add_flag("--records", f.use_records, "fit from the upper records of --input");

  CLI::App* table = app.add_subcommand("table", "closed-form series over a range of sizes");
  common(table, true, false);
  table->add_option("--formula", f.formula, "E-cdf, E-pdf, MSE-cdf, MSE-pdf, alpha-n or mse-g")
      ->required()
      ->check(CLI::IsMember({"E-cdf", "E-pdf", "MSE-cdf", "MSE-pdf", "alpha-n", "mse-g"}));
  table->add_option("--sizes", f.sizes, "sizes, e.g. 4..12 or 4,5,7,12")->required();
  table->add_option("--x", f.x, "evaluation point");
  table->add_option("--k", f.k, "base k for mse-g");
  table->add_option("--form", f.form, "MSE series form")
      ->check(CLI::IsMember({"proof", "as-printed"}));

  CLI::App* verify = app.add_subcommand("verify", "run verification suites");
  common(verify, false, true);
  std::vector<std::string> suites = suite_names();
  suites.emplace_back("all");
  verify->add_option("--suite", f.suite, "suite name or all")
      ->required()
      ->check(CLI::IsMember(suites));
  verify->add_option("--records-mode", f.records_mode, "record simulator override")
      ->check(CLI::IsMember({"direct", "sequential"}));

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = expand_config(app, std::move(args));
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  const std::vector<std::string> recorded = args;
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  const CLI::App* sub = app.get_subcommands().front();
  RunManifest manifest(sub->get_name(), recorded);
  Output out(f, manifest);
  int code = 0;
  try {
    if (sub == families) {
      code = cmd_families(f, out);
    } else if (sub == simulate) {
      code = cmd_simulate(f, out, manifest);
    } else if (sub == fit) {
      code = cmd_fit(f, out);
    } else if (sub == eval) {
      code = cmd_eval(f, out);
    } else if (sub == table) {
      code = cmd_table(f, out, *table);
    } else {
      code = cmd_verify(f, out, manifest, *verify);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (f.manifest) {
    std::cerr << manifest.finish().dump(2) << "\n";
  }
  return code;
}

}  // namespace
}  // namespace recmle::cli

int main(int argc, char** argv) {
  return recmle::cli::run(argc, argv);
}
