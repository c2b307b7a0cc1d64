#include "fuseplan/workload.hpp"

#include <gmp.h>

#include <algorithm>
#include <chrono>
#include <vector>

#include "fuseplan/error.hpp"

namespace fuseplan {

namespace {

// RAII wrapper over a GMP integer.
class BigInt {
 public:
  BigInt() { mpz_init(value_); }
  ~BigInt() { mpz_clear(value_); }
  BigInt(const BigInt&) = delete;
  BigInt& operator=(const BigInt&) = delete;

  mpz_ptr get() { return value_; }
  mpz_srcptr get() const { return value_; }

 private:
  mpz_t value_;
};

bool run_lucas_lehmer(std::uint32_t p) {
  BigInt mersenne, s, high;
  mpz_ui_pow_ui(mersenne.get(), 2, p);
  mpz_sub_ui(mersenne.get(), mersenne.get(), 1);
  mpz_set_ui(s.get(), 4);
  for (std::uint32_t step = 0; step + 2 < p; ++step) {
    mpz_mul(s.get(), s.get(), s.get());
    mpz_sub_ui(s.get(), s.get(), 2);
    if (mpz_sgn(s.get()) < 0) mpz_add(s.get(), s.get(), mersenne.get());
    // x mod 2^p - 1 == (x >> p) + (x & (2^p - 1)), folded until below 2^p.
    while (mpz_sizeinbase(s.get(), 2) > p) {
      mpz_fdiv_q_2exp(high.get(), s.get(), p);
      mpz_fdiv_r_2exp(s.get(), s.get(), p);
      mpz_add(s.get(), s.get(), high.get());
    }
    if (mpz_cmp(s.get(), mersenne.get()) == 0) mpz_set_ui(s.get(), 0);
  }
  return mpz_sgn(s.get()) == 0;
}

}  // namespace

bool is_odd_prime(std::uint32_t n) {
  if (n < 3 || n % 2 == 0) return false;
  for (std::uint32_t d = 3; d <= n / d; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

bool lucas_lehmer_is_prime(std::uint32_t prime_exponent) {
  if (!is_odd_prime(prime_exponent)) {
    throw ValidationError("exponent " + std::to_string(prime_exponent) + " is not an odd prime");
  }
  return run_lucas_lehmer(prime_exponent);
}

Calibration calibrate_workload(std::uint32_t prime_exponent, std::uint32_t repetitions) {
  if (!is_odd_prime(prime_exponent)) {
    throw ValidationError("exponent " + std::to_string(prime_exponent) + " is not an odd prime");
  }
  if (repetitions == 0) throw ValidationError("repetitions must be positive");

  Calibration result{prime_exponent, repetitions, 0.0, false};
  std::vector<double> samples;
  samples.reserve(repetitions);
  for (std::uint32_t r = 0; r < repetitions; ++r) {
    const auto start = std::chrono::steady_clock::now();
    result.mersenne_prime = run_lucas_lehmer(prime_exponent);
    const auto stop = std::chrono::steady_clock::now();
    samples.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
  }
  std::sort(samples.begin(), samples.end());
  const std::size_t mid = samples.size() / 2;
  result.ms_per_run = samples.size() % 2 == 1 ? samples[mid] : (samples[mid - 1] + samples[mid]) / 2.0;
  return result;
}

}  // namespace fuseplan
