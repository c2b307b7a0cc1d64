#include <gtest/gtest.h>

#include <cstdint>

#include "fuseplan/workload.hpp"
#include "test_support.hpp"

namespace fuseplan {
namespace {

using testing::expect_validation_error;

// Trial division on 2^p - 1; fine for p <= 31.
bool mersenne_prime_by_division(std::uint32_t p) {
  const std::uint64_t m = (std::uint64_t{1} << p) - 1;
  for (std::uint64_t d = 3; d * d <= m; d += 2) {
    if (m % d == 0) return false;
  }
  return true;
}

TEST(LucasLehmer, Examples) {
  for (std::uint32_t p : {3u, 5u, 7u, 13u}) EXPECT_TRUE(lucas_lehmer_is_prime(p)) << p;
  for (std::uint32_t p : {11u, 23u}) EXPECT_FALSE(lucas_lehmer_is_prime(p)) << p;
}

TEST(LucasLehmer, MatchesTrialDivision) {
  for (std::uint32_t p = 3; p <= 31; ++p) {
    if (!is_odd_prime(p)) continue;
    EXPECT_EQ(lucas_lehmer_is_prime(p), mersenne_prime_by_division(p)) << p;
  }
}

TEST(LucasLehmer, KnownExponentsBeyondWordSize) {
  const std::vector<std::uint32_t> mersenne{3, 5, 7, 13, 17, 19, 31, 61, 89, 107, 127, 521, 607};
  for (std::uint32_t p = 3; p <= 607; ++p) {
    if (!is_odd_prime(p)) continue;
    const bool expected = std::find(mersenne.begin(), mersenne.end(), p) != mersenne.end();
    ASSERT_EQ(lucas_lehmer_is_prime(p), expected) << p;
  }
}

TEST(LucasLehmer, RejectsNonPrimeExponent) {
  for (std::uint32_t p : {0u, 1u, 2u, 9u, 15u}) {
    expect_validation_error([&] { lucas_lehmer_is_prime(p); }, "not an odd prime");
  }
}

TEST(Calibrate, ReturnsPositiveMedian) {
  const Calibration c = calibrate_workload(521, 5);
  EXPECT_GT(c.ms_per_run, 0.0);
  EXPECT_TRUE(c.mersenne_prime);
  EXPECT_EQ(c.repetitions, 5u);
  EXPECT_FALSE(calibrate_workload(11, 1).mersenne_prime);
  expect_validation_error([] { calibrate_workload(13, 0); }, "repetitions");
  expect_validation_error([] { calibrate_workload(4, 1); }, "not an odd prime");
}

TEST(IngestTrace, Medians) {
  const AppGraph app = testing::two_task_app(CallMode::kSync);
  auto m = ingest_trace("task,duration_ms\nA,100\nB,100\n", app);
  EXPECT_EQ(m.at("A"), 100.0);
  m = ingest_trace("task,duration_ms\nA,95\nA,105\nB,100\n", app);
  EXPECT_EQ(m.at("A"), 100.0);
  EXPECT_EQ(m.at("B"), 100.0);
  m = ingest_trace("task,duration_ms\nA,1\nA,9\nA,4\nB,2\n", app);
  EXPECT_EQ(m.at("A"), 4.0);
}

TEST(IngestTrace, Errors) {
  const AppGraph app = testing::two_task_app(CallMode::kSync);
  expect_validation_error([&] { ingest_trace("task,duration_ms\nA,100\n", app); }, "missing task B");
  expect_validation_error([&] { ingest_trace("task,duration_ms\nA,0\nB,1\n", app); }, "non-positive duration");
  expect_validation_error([&] { ingest_trace("task,duration_ms\nA,1\nB,1\nZ,1\n", app); }, "unknown task");
  expect_validation_error([&] { ingest_trace("name,ms\nA,1\nB,1\n", app); }, "header");
  expect_validation_error([&] { ingest_trace("task,duration_ms\nA,fast\nB,1\n", app); }, "bad duration");
  expect_validation_error([&] { ingest_trace("", app); }, "empty");
}

TEST(IngestTrace, ApplyMeasuredWork) {
  const AppGraph app = testing::two_task_app(CallMode::kSync);
  const AppGraph measured = apply_measured_work(app, ingest_trace("task,duration_ms\nA,40\nB,60\n", app));
  EXPECT_EQ(measured.task(measured.id_of("A")).base_work_ms, 40.0);
  EXPECT_EQ(measured.task(measured.id_of("B")).base_work_ms, 60.0);
  EXPECT_EQ(measured.edges(), app.edges());
}

}  // namespace
}  // namespace fuseplan
