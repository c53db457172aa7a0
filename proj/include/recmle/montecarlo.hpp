#pragma once

// Replicated experiments with a fixed replication-to-stream assignment.
//
// Replications are cut into contiguous blocks of kBlockSize by replication
// index. Block b of lane L draws from RngStream(seed, (L << 32) + b), and the
// per-block accumulators are merged in block order, so results do not depend
// on how many workers ran the blocks. Lanes keep independent arms of one
// experiment (sample vs records, different sizes) on disjoint streams.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "recmle/closedform.hpp"
#include "recmle/family.hpp"
#include "recmle/oracle.hpp"
#include "recmle/summation.hpp"

namespace recmle {

inline constexpr std::uint64_t kBlockSize = 1024;

std::uint64_t block_stream(std::uint64_t lane, std::uint64_t block);

enum class DataSource { sample, records, records_direct };
enum class MomentTarget { E_cdf_hat, E_pdf_hat, MSE_cdf_hat, MSE_pdf_hat, MSE_theta_hat, MSE_g_hat };

const char* to_string(DataSource s);
const char* to_string(MomentTarget t);
std::optional<DataSource> parse_data_source(const std::string& text);
std::optional<MomentTarget> parse_moment_target(const std::string& text);

// What each replication computes from its (count, T).
struct Statistic {
  enum class Kind { theta_hat, cdf_hat, pdf_hat, g_hat };
  Kind kind = Kind::theta_hat;
  double x = 0.0;  // evaluation point for cdf_hat / pdf_hat
  double k = 0.0;  // base for g_hat = k^theta_hat

  static Statistic theta() { return {Kind::theta_hat, 0.0, 0.0}; }
  static Statistic cdf_at(double x) { return {Kind::cdf_hat, x, 0.0}; }
  static Statistic pdf_at(double x) { return {Kind::pdf_hat, x, 0.0}; }
  static Statistic g_power(double k) { return {Kind::g_hat, 0.0, k}; }
};

struct ReplicationPlan {
  const FamilySpec* family = nullptr;
  double theta = 1.0;
  std::size_t size = 1;
  DataSource source = DataSource::sample;
  Statistic statistic;
  std::uint64_t reps = 0;
  std::uint64_t seed = 0;
  std::uint64_t lane = 0;
  unsigned workers = 1;
};

// One value per replication in replication order; failed replications
// (degenerate data, record draw cap, non-finite statistic) are NaN.
std::vector<double> replicate_statistic(const ReplicationPlan& plan);

// Power sums of the per-replication error e = statistic - centre.
struct PowerSums {
  CompensatedSum s1, s2, s3, s4;
  std::uint64_t count = 0;
  std::uint64_t failures = 0;

  void add(double e);
  void merge(const PowerSums& other);

  double mean() const;
  double mean_stderr() const;    // stderr of mean(e)
  double square_mean() const;    // mean(e^2)
  double square_stderr() const;  // stderr of mean(e^2), via the fourth moment
};

PowerSums accumulate_errors(const ReplicationPlan& plan, double centre);

struct ExperimentConfig {
  std::string family_text = "exponential";
  double theta = 1.0;
  std::vector<std::size_t> sizes{10};
  std::vector<double> x_grid{1.0};
  std::uint64_t reps = 10000;
  std::uint64_t seed = 0;
  double quad_tol = kDefaultQuadTol;
  double g_base = 2.718281828459045;  // k for MSE_g_hat
  unsigned workers = 1;

  // Throws ArgumentError: reps >= 100, sizes nonempty, quad_tol in (0, 1e-4].
  void validate() const;
};

enum class QuadStatus { converged, divergent, not_applicable };

struct MomentReport {
  MomentTarget target = MomentTarget::MSE_theta_hat;
  DataSource source = DataSource::sample;
  std::size_t size = 0;
  double x = 0.0;
  std::optional<SeriesValue> series;
  QuadStatus quad_status = QuadStatus::not_applicable;
  std::optional<GammaExpectation> quad;  // present only when converged
  double mc_value = 0.0;
  double mc_stderr = 0.0;
  std::uint64_t reps = 0;
  std::uint64_t failures = 0;
  ExperimentConfig config;
};

// Evaluates one moment at sizes.front() and x_grid.front() three ways:
// closed-form series (when it applies to the family), quadrature, and Monte
// Carlo. Throws RunError when more than 1% of replications fail.
MomentReport mc_estimate(const ExperimentConfig& config, MomentTarget target, DataSource source,
                         std::uint64_t lane = 0);

struct ConsistencyPoint {
  std::size_t size = 0;
  double probability = 0.0;  // empirical P(|estimate - truth| > eps)
  std::uint64_t failures = 0;
};

// Record-based (direct simulation) exceedance probabilities per size. The
// statistic is theta_hat by default or F_hat / f_hat at a fixed x. Size
// index i runs on lane `lane_base + i`.
std::vector<ConsistencyPoint> consistency_curve(const FamilySpec& spec, double theta, double eps,
                                                const std::vector<std::size_t>& sizes,
                                                std::uint64_t reps, std::uint64_t seed,
                                                unsigned workers = 1,
                                                Statistic statistic = Statistic::theta(),
                                                std::uint64_t lane_base = 0);

}  // namespace recmle
