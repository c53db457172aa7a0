#include "recmle/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "recmle/error.hpp"
#include "recmle/estimate.hpp"
#include "recmle/records.hpp"

namespace recmle {

std::uint64_t block_stream(std::uint64_t lane, std::uint64_t block) {
  return (lane << 32) + block;
}

const char* to_string(DataSource s) {
  switch (s) {
    case DataSource::sample:
      return "sample";
    case DataSource::records:
      return "records";
    case DataSource::records_direct:
      return "records_direct";
  }
  return "?";
}

const char* to_string(MomentTarget t) {
  switch (t) {
    case MomentTarget::E_cdf_hat:
      return "E_cdf_hat";
    case MomentTarget::E_pdf_hat:
      return "E_pdf_hat";
    case MomentTarget::MSE_cdf_hat:
      return "MSE_cdf_hat";
    case MomentTarget::MSE_pdf_hat:
      return "MSE_pdf_hat";
    case MomentTarget::MSE_theta_hat:
      return "MSE_theta_hat";
    case MomentTarget::MSE_g_hat:
      return "MSE_g_hat";
  }
  return "?";
}

std::optional<DataSource> parse_data_source(const std::string& text) {
  for (auto s : {DataSource::sample, DataSource::records, DataSource::records_direct}) {
    if (text == to_string(s)) {
      return s;
    }
  }
  return std::nullopt;
}

std::optional<MomentTarget> parse_moment_target(const std::string& text) {
  for (auto t : {MomentTarget::E_cdf_hat, MomentTarget::E_pdf_hat, MomentTarget::MSE_cdf_hat,
                 MomentTarget::MSE_pdf_hat, MomentTarget::MSE_theta_hat, MomentTarget::MSE_g_hat}) {
    if (text == to_string(t)) {
      return t;
    }
  }
  return std::nullopt;
}

namespace {

// Runs fn(block, begin, end) for every block and returns the results in
// block order, whatever the worker count.
template <typename Result, typename Fn>
std::vector<Result> run_blocks(std::uint64_t reps, unsigned workers, Fn&& fn) {
  const std::uint64_t blocks = (reps + kBlockSize - 1) / kBlockSize;
  std::vector<Result> out(blocks);
  auto run_one = [&](std::uint64_t b) {
    const std::uint64_t begin = b * kBlockSize;
    const std::uint64_t end = std::min(reps, begin + kBlockSize);
    out[b] = fn(b, begin, end);
  };

  const unsigned threads = static_cast<unsigned>(
      std::min<std::uint64_t>(std::max(1u, workers), std::max<std::uint64_t>(blocks, 1)));
  if (threads <= 1) {
    for (std::uint64_t b = 0; b < blocks; ++b) {
      run_one(b);
    }
    return out;
  }

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::uint64_t b = next.fetch_add(1);
          if (b >= blocks) {
            return;
          }
          try {
            run_one(b);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) {
              failure = std::current_exception();
            }
            next.store(blocks);
            return;
          }
        }
      });
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
  return out;
}

double one_replication(const ReplicationPlan& plan, RngStream& rng) {
  const FamilySpec& spec = *plan.family;
  EstimateReport est;
  try {
    switch (plan.source) {
      case DataSource::sample: {
        const auto xs = sample_iid(spec, plan.theta, plan.size, rng);
        est = mle_theta_sample(spec, xs.values);
        break;
      }
      case DataSource::records:
        est = mle_theta_records(spec, sample_records_sequential(spec, plan.theta, plan.size, rng));
        break;
      case DataSource::records_direct:
        est = mle_theta_records(spec, sample_records_direct(spec, plan.theta, plan.size, rng));
        break;
    }
  } catch (const DegenerateSampleError&) {
    return std::nan("");
  } catch (const RecordCapExceeded&) {
    return std::nan("");
  } catch (const RangeError&) {
    return std::nan("");
  }

  double v = 0.0;
  switch (plan.statistic.kind) {
    case Statistic::Kind::theta_hat:
      v = est.theta_hat;
      break;
    case Statistic::Kind::cdf_hat:
      v = plugin_cdf(spec, est.count, est.sufficient_stat, plan.statistic.x);
      break;
    case Statistic::Kind::pdf_hat:
      v = plugin_pdf(spec, est.count, est.sufficient_stat, plan.statistic.x);
      break;
    case Statistic::Kind::g_hat:
      v = std::pow(plan.statistic.k, est.theta_hat);
      break;
  }
  return std::isfinite(v) ? v : std::nan("");
}

void check_plan(const ReplicationPlan& plan) {
  if (plan.family == nullptr) {
    throw ArgumentError("replication plan has no family");
  }
  if (plan.size == 0) {
    throw ArgumentError("replication plan: size must be >= 1");
  }
  require_theta(*plan.family, plan.theta);
}

}  // namespace

std::vector<double> replicate_statistic(const ReplicationPlan& plan) {
  check_plan(plan);
  auto blocks = run_blocks<std::vector<double>>(
      plan.reps, plan.workers, [&](std::uint64_t b, std::uint64_t begin, std::uint64_t end) {
        RngStream rng(plan.seed, block_stream(plan.lane, b));
        std::vector<double> vals;
        vals.reserve(end - begin);
        for (std::uint64_t r = begin; r < end; ++r) {
          vals.push_back(one_replication(plan, rng));
        }
        return vals;
      });
  std::vector<double> out;
  out.reserve(plan.reps);
  for (const auto& b : blocks) {
    out.insert(out.end(), b.begin(), b.end());
  }
  return out;
}

void PowerSums::add(double e) {
  if (!std::isfinite(e)) {
    ++failures;
    return;
  }
  ++count;
  const double e2 = e * e;
  s1.add(e);
  s2.add(e2);
  s3.add(e2 * e);
  s4.add(e2 * e2);
}

void PowerSums::merge(const PowerSums& other) {
  s1.merge(other.s1);
  s2.merge(other.s2);
  s3.merge(other.s3);
  s4.merge(other.s4);
  count += other.count;
  failures += other.failures;
}

double PowerSums::mean() const {
  return count == 0 ? std::nan("") : s1.value() / static_cast<double>(count);
}

double PowerSums::square_mean() const {
  return count == 0 ? std::nan("") : s2.value() / static_cast<double>(count);
}

double PowerSums::mean_stderr() const {
  if (count < 2) {
    return std::nan("");
  }
  const double n = static_cast<double>(count);
  const double var = std::max(0.0, (s2.value() - s1.value() * s1.value() / n) / (n - 1.0));
  return std::sqrt(var / n);
}

double PowerSums::square_stderr() const {
  if (count < 2) {
    return std::nan("");
  }
  const double n = static_cast<double>(count);
  const double var = std::max(0.0, (s4.value() - s2.value() * s2.value() / n) / (n - 1.0));
  return std::sqrt(var / n);
}

PowerSums accumulate_errors(const ReplicationPlan& plan, double centre) {
  check_plan(plan);
  const auto blocks = run_blocks<PowerSums>(
      plan.reps, plan.workers, [&](std::uint64_t b, std::uint64_t begin, std::uint64_t end) {
        RngStream rng(plan.seed, block_stream(plan.lane, b));
        PowerSums acc;
        for (std::uint64_t r = begin; r < end; ++r) {
          acc.add(one_replication(plan, rng) - centre);
        }
        return acc;
      });
  PowerSums total;
  for (const auto& b : blocks) {
    total.merge(b);
  }
  return total;
}

void ExperimentConfig::validate() const {
  if (reps < 100) {
    throw ArgumentError("experiment config: reps must be >= 100");
  }
  if (sizes.empty()) {
    throw ArgumentError("experiment config: sizes must be nonempty");
  }
  if (x_grid.empty()) {
    throw ArgumentError("experiment config: x_grid must be nonempty");
  }
  if (!(quad_tol > 0.0 && quad_tol <= 1e-4)) {
    throw ArgumentError("experiment config: quad_tol must lie in (0, 1e-4]");
  }
}

namespace {

void fail_on_excess(std::uint64_t failures, std::uint64_t reps) {
  if (static_cast<double>(failures) > 0.01 * static_cast<double>(reps)) {
    throw RunError(std::to_string(failures) + " of " + std::to_string(reps) +
                   " replications failed (limit 1%)");
  }
}

void attach_quad(MomentReport& r, const GammaExpectation& q) {
  if (q.divergent) {
    r.quad_status = QuadStatus::divergent;
    r.quad.reset();
  } else {
    r.quad_status = QuadStatus::converged;
    r.quad = q;
  }
}

}  // namespace

MomentReport mc_estimate(const ExperimentConfig& config, MomentTarget target, DataSource source,
                         std::uint64_t lane) {
  config.validate();
  const FamilySpec spec = parse_family(config.family_text);
  const std::size_t size = config.sizes.front();
  const double x = config.x_grid.front();
  const double theta = config.theta;
  require_theta(spec, theta);

  MomentReport r;
  r.target = target;
  r.source = source;
  r.size = size;
  r.x = x;
  r.config = config;

  ReplicationPlan plan;
  plan.family = &spec;
  plan.theta = theta;
  plan.size = size;
  plan.source = source;
  plan.reps = config.reps;
  plan.seed = config.seed;
  plan.lane = lane;
  plan.workers = config.workers;

  const double tol = config.quad_tol;
  bool square = true;
  double centre = 0.0;
  switch (target) {
    case MomentTarget::E_cdf_hat:
      plan.statistic = Statistic::cdf_at(x);
      square = false;
      r.series = expected_cdf_hat_series(spec, theta, x, size);
      attach_quad(r, exact_expected_cdf_hat(spec, theta, x, size, tol));
      break;
    case MomentTarget::E_pdf_hat:
      plan.statistic = Statistic::pdf_at(x);
      square = false;
      if (size >= 2) {
        r.series = expected_pdf_hat_series(spec, theta, x, size);
      }
      attach_quad(r, exact_expected_pdf_hat(spec, theta, x, size, tol));
      break;
    case MomentTarget::MSE_cdf_hat:
      plan.statistic = Statistic::cdf_at(x);
      centre = cdf(spec, theta, x);
      r.series = mse_cdf_hat_series(spec, theta, x, size);
      attach_quad(r, exact_mse_cdf_hat(spec, theta, x, size, tol));
      break;
    case MomentTarget::MSE_pdf_hat:
      plan.statistic = Statistic::pdf_at(x);
      centre = pdf(spec, theta, x);
      if (size >= 3) {
        r.series = mse_pdf_hat_series(spec, theta, x, size);
      }
      attach_quad(r, exact_mse_pdf_hat(spec, theta, x, size, tol));
      break;
    case MomentTarget::MSE_theta_hat:
      plan.statistic = Statistic::theta();
      centre = theta;
      if (spec.rate_map == RateMap::reciprocal) {
        SeriesValue s;
        s.value = alpha_n_exponential(theta, size);
        s.terms_used = 1;
        r.series = s;
      }
      attach_quad(r, exact_mse_theta_hat(spec, theta, size, tol));
      break;
    case MomentTarget::MSE_g_hat:
      plan.statistic = Statistic::g_power(config.g_base);
      centre = std::pow(config.g_base, theta);
      if (spec.rate_map == RateMap::identity) {
        r.series = mse_g_power_series(theta, size, config.g_base);
        attach_quad(r, exact_mse_g_hat(theta, size, config.g_base, tol));
      }
      break;
  }

  const PowerSums sums = accumulate_errors(plan, centre);
  fail_on_excess(sums.failures, config.reps);
  r.reps = config.reps;
  r.failures = sums.failures;
  if (square) {
    r.mc_value = sums.square_mean();
    r.mc_stderr = sums.square_stderr();
  } else {
    r.mc_value = sums.mean();
    r.mc_stderr = sums.mean_stderr();
  }
  return r;
}

std::vector<ConsistencyPoint> consistency_curve(const FamilySpec& spec, double theta, double eps,
                                                const std::vector<std::size_t>& sizes,
                                                std::uint64_t reps, std::uint64_t seed,
                                                unsigned workers, Statistic statistic,
                                                std::uint64_t lane_base) {
  if (!(eps > 0.0)) {
    throw ArgumentError("consistency_curve: eps must be > 0");
  }
  if (sizes.empty()) {
    throw ArgumentError("consistency_curve: sizes must be nonempty");
  }
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) {
      throw ArgumentError("consistency_curve: sizes must be strictly increasing");
    }
  }
  if (reps == 0) {
    throw ArgumentError("consistency_curve: reps must be >= 1");
  }
  require_theta(spec, theta);

  double truth = theta;
  if (statistic.kind == Statistic::Kind::cdf_hat) {
    truth = cdf(spec, theta, statistic.x);
  } else if (statistic.kind == Statistic::Kind::pdf_hat) {
    truth = pdf(spec, theta, statistic.x);
  } else if (statistic.kind == Statistic::Kind::g_hat) {
    truth = std::pow(statistic.k, theta);
  }

  std::vector<ConsistencyPoint> out;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    ReplicationPlan plan;
    plan.family = &spec;
    plan.theta = theta;
    plan.size = sizes[i];
    plan.source = DataSource::records_direct;
    plan.statistic = statistic;
    plan.reps = reps;
    plan.seed = seed;
    plan.lane = lane_base + i;
    plan.workers = workers;
    const auto values = replicate_statistic(plan);

    ConsistencyPoint p;
    p.size = sizes[i];
    std::uint64_t exceed = 0;
    for (double v : values) {
      if (std::isnan(v)) {
        ++p.failures;
      } else if (std::abs(v - truth) > eps) {
        ++exceed;
      }
    }
    fail_on_excess(p.failures, reps);
    p.probability = static_cast<double>(exceed) / static_cast<double>(reps - p.failures);
    out.push_back(p);
  }
  return out;
}

}  // namespace recmle
