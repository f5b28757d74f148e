#include "wmopt/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <unordered_map>

#include "wmopt/errors.hpp"
#include "wmopt/metrics.hpp"

namespace wmopt {

std::uint64_t CounterRng::mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t CounterRng::at(std::uint64_t seed, std::uint64_t counter) {
  return mix(seed + (counter + 1) * 0x9E3779B97F4A7C15ULL);
}

double CounterRng::uniform(std::uint64_t seed, std::uint64_t counter) {
  return static_cast<double>(at(seed, counter) >> 11) * 0x1.0p-53;
}

DiscreteSampler::DiscreteSampler(const RationalVector& masses) {
  if (masses.empty()) throw ParameterError("cannot sample from an empty law");
  Rational total;
  for (const auto& m : masses) {
    if (m.sign() < 0) throw ParameterError("negative mass in sampling law");
    total += m;
  }
  if (total.is_zero()) throw ParameterError("sampling law has zero mass");
  Rational running;
  cdf_.reserve(masses.size());
  for (const auto& m : masses) {
    running += m;
    cdf_.push_back((running / total).to_double());
  }
  cdf_.back() = 1.0;
}

std::size_t DiscreteSampler::draw(double u) const {
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return it == cdf_.end() ? cdf_.size() - 1 : static_cast<std::size_t>(it - cdf_.begin());
}

SchemeSampler::SchemeSampler(const WatermarkScheme& scheme, int m, std::optional<RationalVector> qx) : m_(m) {
  if (m < 0 || m > scheme.t()) throw ParameterError("message outside [0:T]");
  if (m >= 1) {
    RationalVector masses;
    for (const auto& [key, row] : scheme.table(m).rows()) {
      for (const auto& [x, v] : row) {
        pairs_.push_back({x, key});
        masses.push_back(v);
      }
    }
    joint_.emplace(masses);
    return;
  }
  const RationalVector q = qx ? *qx : scheme.px().probs();
  if (q.size() != scheme.n()) throw ParameterError("Q_X has the wrong length");
  tokens_.emplace(q);
  RationalVector masses;
  for (const auto& [key, p] : scheme.pz()) {
    key_support_.push_back(key);
    masses.push_back(p);
  }
  keys_.emplace(masses);
}

Draw SchemeSampler::draw(std::uint64_t seed, std::uint64_t trial) const {
  const double u1 = CounterRng::uniform(seed, 2 * trial);
  if (m_ >= 1) return pairs_[joint_->draw(u1)];
  const double u2 = CounterRng::uniform(seed, 2 * trial + 1);
  return {tokens_->draw(u1), key_support_[keys_->draw(u2)]};
}

Draw sample(const WatermarkScheme& scheme, int m, std::uint64_t seed) {
  return SchemeSampler(scheme, m).draw(seed, 0);
}

TrialReport monte_carlo(const WatermarkScheme& scheme, int m, std::uint64_t trials, std::uint64_t seed,
                        std::optional<RationalVector> qx, unsigned workers) {
  if (trials == 0) throw ParameterError("trials must be at least 1");
  const SchemeSampler sampler(scheme, m, qx);
  std::unordered_map<KeyIndex, KeyVector> decoded;
  for (const auto& table : scheme.tables()) {
    for (const auto& [key, row] : table.rows()) {
      if (!decoded.count(key)) decoded.emplace(key, scheme.keyset().key_at(key));
    }
  }

  auto run = [&](std::uint64_t begin, std::uint64_t end) {
    std::uint64_t errors = 0;
    for (std::uint64_t k = begin; k < end; ++k) {
      const Draw d = sampler.draw(seed, k);
      if (decode(d.token, decoded.at(d.key)) != m) ++errors;
    }
    return errors;
  };

  workers = std::max(1U, workers);
  std::uint64_t errors = 0;
  if (workers == 1) {
    errors = run(0, trials);
  } else {
    std::vector<std::uint64_t> partial(workers, 0);
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (trials + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t b = std::min(trials, w * chunk);
      const std::uint64_t e = std::min(trials, b + chunk);
      pool.emplace_back([&, w, b, e] { partial[w] = run(b, e); });
    }
    for (auto& th : pool) th.join();
    for (auto p : partial) errors += p;
  }

  TrialReport r;
  r.m = m;
  r.trials = trials;
  r.errors = errors;
  r.estimate = static_cast<double>(errors) / static_cast<double>(trials);
  r.std_error = std::sqrt(r.estimate * (1 - r.estimate) / static_cast<double>(trials));
  r.exact = m >= 1 ? miss_detection(scheme, m) : false_alarm(scheme, qx ? *qx : scheme.px().probs());
  const double diff = r.estimate - r.exact.to_double();
  if (r.std_error > 0) {
    r.z_score = diff / r.std_error;
  } else {
    r.z_score = diff == 0 ? 0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
  }
  return r;
}

nlohmann::json to_json(const TrialReport& report) {
  return {{"m", report.m},
          {"trials", report.trials},
          {"errors", report.errors},
          {"estimate", report.estimate},
          {"std_error", report.std_error},
          {"exact", report.exact.str()},
          {"exact_decimal", report.exact.to_double()},
          {"z_score", std::isfinite(report.z_score) ? nlohmann::json(report.z_score) : nlohmann::json(report.z_score > 0 ? "inf" : "-inf")}};
}

}  // namespace wmopt
