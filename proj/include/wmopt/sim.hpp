#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "json.hpp"
#include "wmopt/scheme.hpp"

namespace wmopt {

// SplitMix64 in counter mode: draw i of a stream is mix(seed + (i + 1) * 0x9E3779B97F4A7C15).
class CounterRng {
 public:
  static std::uint64_t mix(std::uint64_t z);
  static std::uint64_t at(std::uint64_t seed, std::uint64_t counter);
  // 53-bit uniform in [0, 1).
  static double uniform(std::uint64_t seed, std::uint64_t counter);
};

// Inverse-CDF sampler over a finite sparse law.
class DiscreteSampler {
 public:
  explicit DiscreteSampler(const RationalVector& masses);
  std::size_t draw(double u) const;
  std::size_t size() const { return cdf_.size(); }

 private:
  std::vector<double> cdf_;
};

struct Draw {
  std::size_t token;  // 0-based
  KeyIndex key;
};

// Draws (x, zeta) from P_m for m >= 1, or from Q_X ⊗ P_Z for m = 0 (Q_X defaults to P_X).
class SchemeSampler {
 public:
  SchemeSampler(const WatermarkScheme& scheme, int m, std::optional<RationalVector> qx = std::nullopt);
  Draw draw(std::uint64_t seed, std::uint64_t trial) const;

 private:
  int m_;
  std::vector<Draw> pairs_;
  std::vector<KeyIndex> key_support_;
  std::optional<DiscreteSampler> joint_, tokens_, keys_;
};

Draw sample(const WatermarkScheme& scheme, int m, std::uint64_t seed);

struct TrialReport {
  int m = 0;
  std::uint64_t trials = 0;
  std::uint64_t errors = 0;
  double estimate = 0;
  double std_error = 0;
  Rational exact;
  double z_score = 0;
};

// Trial k uses counters 2k and 2k+1, so results do not depend on the worker count.
TrialReport monte_carlo(const WatermarkScheme& scheme, int m, std::uint64_t trials, std::uint64_t seed,
                        std::optional<RationalVector> qx = std::nullopt, unsigned workers = 1);

nlohmann::json to_json(const TrialReport& report);

}  // namespace wmopt
