#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "recmle/csv.hpp"
#include "recmle/error.hpp"
#include "recmle/family.hpp"
#include "recmle/oracle.hpp"
#include "recmle/records.hpp"
#include "recmle/rng.hpp"
#include "support/oracles.hpp"

using namespace recmle;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("records of a short sequence") {
  const std::vector<double> xs{3, 1, 4, 1, 5};
  const auto rs = extract_upper_records(xs);
  CHECK(rs.values == std::vector<double>{3, 4, 5});
  CHECK(rs.indices == std::vector<std::size_t>{0, 2, 4});
  CHECK(rs.last() == 5);

  const std::vector<double> ties{2, 2, 1, 3, 3};
  CHECK(extract_upper_records(ties).values == std::vector<double>{2, 3});

  CHECK_THROWS_AS(extract_upper_records(std::vector<double>{}), ArgumentError);
  CHECK_THROWS_AS(extract_upper_records(std::vector<double>{1.0, std::nan("")}), ArgumentError);
}

TEST_CASE("extract_upper_records equals the brute-force definition") {
  RngStream rng(2024, 1);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.next_u64() % 60;
    std::vector<double> xs(n);
    for (auto& x : xs) {
      // Coarse values so that ties occur often.
      x = std::floor(rng.uniform() * 12.0);
    }
    const auto rs = extract_upper_records(xs);
    const auto expect = oracle::brute_force_record_indices(xs);
    REQUIRE(rs.indices == expect);
    for (std::size_t i = 0; i < expect.size(); ++i) {
      REQUIRE(rs.values[i] == xs[expect[i]]);
    }
    // Idempotence.
    REQUIRE(extract_upper_records(rs.values).values == rs.values);
  }
}

TEST_CASE("records are invariant under the monotone transform A") {
  const auto fam = weibull_family(1.7);
  RngStream rng(5, 5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = sample_iid(fam, 1.0, 40, rng);
    std::vector<double> ax;
    for (const double x : s.values) {
      ax.push_back(fam.transform(x));
    }
    REQUIRE(extract_upper_records(s.values).indices == extract_upper_records(ax).indices);
  }
}

TEST_CASE("inverse-CDF sampling from given uniforms") {
  const std::vector<double> u{0.5};
  const auto s = sample_iid_from_uniforms(exponential_family(), 1.0, u);
  REQUIRE(s.size() == 1);
  CHECK_THAT(s.values[0], WithinRel(std::numbers::ln2, 1e-15));
  CHECK(s.provenance.kind == Provenance::Kind::simulated);
}

TEST_CASE("streams are reproducible and distinct") {
  const auto fam = lomax_family();
  RngStream a(7, 0);
  RngStream b(7, 0);
  RngStream c(7, 1);
  const auto sa = sample_iid(fam, 2.0, 50, a);
  const auto sb = sample_iid(fam, 2.0, 50, b);
  const auto sc = sample_iid(fam, 2.0, 50, c);
  CHECK(sa.values == sb.values);
  CHECK(sa.values != sc.values);
  CHECK(sa.provenance.kind == Provenance::Kind::simulated);
  CHECK(sa.provenance.seed == 7);
  CHECK(sc.provenance.stream == 1);
  CHECK(mix_stream(7, 0) != mix_stream(7, 1));
  CHECK(mix_stream(7, 0) != mix_stream(8, 0));
}

TEST_CASE("uniforms are strictly inside (0, 1)") {
  RngStream rng(0, 0);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("direct record simulation") {
  const auto fam = pareto_family(2.0);
  RngStream rng(11, 3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto rs = sample_records_direct(fam, 1.5, 8, rng);
    REQUIRE(rs.size() == 8);
    for (std::size_t i = 0; i < rs.size(); ++i) {
      REQUIRE(rs.values[i] >= fam.support_lo);
      REQUIRE(rs.indices[i] == i);
      if (i > 0) {
        REQUIRE(fam.transform(rs.values[i]) - fam.transform(rs.values[i - 1]) > 0.0);
      }
    }
  }
}

TEST_CASE("A(R_m) has the Gamma(m, B) mean") {
  // A(R_m) is a sum of m exponentials with rate B(theta).
  const auto fam = exponential_family();
  const double theta = 2.0;
  const std::size_t m = 4;
  const int reps = 20000;
  RngStream rng(99, 0);
  double sum = 0.0;
  double sum2 = 0.0;
  for (int r = 0; r < reps; ++r) {
    const double t = fam.transform(sample_records_direct(fam, theta, m, rng).last());
    sum += t;
    sum2 += t * t;
  }
  const double mean = sum / reps;
  const double expect = m / fam.rate(theta);
  const double se = std::sqrt((sum2 / reps - mean * mean) / reps);
  CHECK(std::abs(mean - expect) < 5.0 * se);
}

TEST_CASE("sequential and direct record simulation agree in distribution") {
  const auto fam = exponential_family();
  const std::size_t m = 3;
  std::vector<double> seq;
  std::vector<double> dir;
  RngStream r1(31, 0);
  RngStream r2(31, 1);
  for (int i = 0; i < 20000; ++i) {
    seq.push_back(sample_records_sequential(fam, 1.0, m, r1).last());
    dir.push_back(sample_records_direct(fam, 1.0, m, r2).last());
  }
  CHECK(ks_two_sample(seq, dir) < 0.02);
}

TEST_CASE("sequential simulation respects the draw cap") {
  RngStream rng(1, 1);
  CHECK_THROWS_AS(sample_records_sequential(exponential_family(), 1.0, 30, rng, 40),
                  RecordCapExceeded);
  RngStream rng2(1, 2);
  const auto rs = sample_records_sequential(exponential_family(), 1.0, 4, rng2);
  REQUIRE(rs.size() == 4);
  CHECK(std::is_sorted(rs.indices.begin(), rs.indices.end()));
  CHECK(rs.indices.front() == 0);
}

TEST_CASE("csv round trip is byte-identical") {
  RngStream rng(3, 3);
  const auto s = sample_iid(weibull_family(2.0), 1.0, 25, rng);
  const std::string text = to_csv(s);
  CHECK(text.rfind("index,value\n", 0) == 0);
  const auto parsed = parse_index_value_csv(text);
  CHECK(parsed.value == s.values);
  CHECK(to_csv(parsed) == text);

  const auto rs = sample_records_direct(lomax_family(), 1.0, 6, rng);
  const std::string rtext = to_csv(rs);
  CHECK(to_csv(parse_index_value_csv(rtext)) == rtext);

  // Extremes survive shortest round-trip formatting.
  IndexedValues iv;
  iv.index = {0, 1, 2};
  iv.value = {std::numeric_limits<double>::denorm_min(), 1e308, 0.1};
  CHECK(parse_index_value_csv(to_csv(iv)).value == iv.value);
}

TEST_CASE("csv parsing") {
  CHECK(parse_index_value_csv("index,value\r\n0,1.5\r\n1,2\r\n\r\n").value ==
        std::vector<double>{1.5, 2.0});
  CHECK(parse_value_column("name,value\na,3\nb,4\n") == std::vector<double>{3.0, 4.0});
  CHECK_THROWS_AS(parse_index_value_csv("i,v\n0,1\n"), ArgumentError);
  CHECK_THROWS_AS(parse_index_value_csv("index,value\n0,abc\n"), ArgumentError);
  CHECK_THROWS_AS(parse_value_column("a,b\n1,2\n"), ArgumentError);
}
