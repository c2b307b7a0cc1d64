#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "fuseplan/app_model.hpp"

namespace fuseplan {

// Lucas-Lehmer: s0 = 4, s(k) = s(k-1)^2 - 2 mod 2^p - 1, p - 2 steps;
// 2^p - 1 is prime iff the final residue is zero. Requires an odd prime p.
bool lucas_lehmer_is_prime(std::uint32_t prime_exponent);

struct Calibration {
  std::uint32_t prime_exponent = 0;
  std::uint32_t repetitions = 0;
  double ms_per_run = 0.0;  // median wall clock
  bool mersenne_prime = false;
};

// Times `repetitions` full Lucas-Lehmer runs, the uniform CPU-bound unit of
// work that task base_work_ms values stand for.
Calibration calibrate_workload(std::uint32_t prime_exponent, std::uint32_t repetitions);

bool is_odd_prime(std::uint32_t n);

// Externally measured task durations. CSV with header `task,duration_ms`,
// one row per measurement. Returns the per-task median; every app task must
// appear.
std::map<std::string, double> ingest_trace(std::string_view csv_text, const AppGraph& app);

// App copy whose base work is replaced by ingested medians.
AppGraph apply_measured_work(const AppGraph& app, const std::map<std::string, double>& medians);

}  // namespace fuseplan
