#pragma once

// Benchmark campaigns over random MPL systems.

#include <cstdint>
#include <string>
#include <vector>

#include "mplv/bmc.hpp"
#include "mplv/model_io.hpp"

namespace mplv {

struct BenchConfig {
  std::vector<std::size_t> dims;
  RandomConfig random;
  std::size_t trials = 10;
  std::uint64_t seed = 0;
};

// Seed of one trial, derived from the campaign seed.
std::uint64_t trial_seed(std::uint64_t seed, std::size_t n, std::size_t trial);

struct AbstractionSample {
  std::size_t n = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::string phase;  // predicates, states, dynamics, total
  std::int64_t micros = 0;
};

struct AbstractionReport {
  std::vector<AbstractionSample> samples;

  // n,trial,seed,phase,micros
  std::string csv() const;
  // average and maximum of the total per n
  std::string table() const;
};

AbstractionReport bench_abstraction(const BenchConfig& config);

struct CtSample {
  std::size_t n = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::size_t ct_empirical = 0;
  std::size_t ct_lemma = 0;
  Outcome verdict = Outcome::Holds;
};

struct CtReport {
  std::vector<CtSample> samples;
  std::size_t less = 0, equal = 0, greater = 0;  // ct_empirical vs ct_lemma

  // n,trial,seed,ct_empirical,ct_lemma,verdict
  std::string csv() const;
  std::string table() const;
};

// Irreducible random systems only (resampled from the trial's generator).
CtReport bench_ct(const BenchConfig& config, const std::string& spec);

}  // namespace mplv
