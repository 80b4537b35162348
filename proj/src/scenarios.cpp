#include "medstat/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

namespace medstat {

namespace {

long long round_count(const Probability& rate, long long deaths) {
  const double expected = rate.value() * static_cast<double>(deaths);
  const auto n = static_cast<long long>(std::nearbyint(expected));
  return std::clamp(n, 0LL, deaths);
}

double after_before_ratio(const Table2x2& t) {
  if (t.a == 0) {
    return t.b > 0 ? std::numeric_limits<double>::infinity()
                   : std::numeric_limits<double>::quiet_NaN();
  }
  return static_cast<double>(t.b) / static_cast<double>(t.a);
}

Probability nurse_p(const DevianceTable& table) {
  const DevianceRow& row = table.rows.back();
  if (row.term != "nurse" || !row.p_value) {
    throw std::logic_error("nurse row missing from deviance table");
  }
  return *row.p_value;
}

// SplitMix64 output function; with the Weyl increment below it forms an
// O(1)-seekable sequence, giving block b the b-th element without
// generating the earlier ones.
std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Unbiased uniform draw from {0, ..., n-1} by rejection; engine output
// and therefore the result stream are fixed by the standard.
std::uint64_t draw_uniform(std::mt19937_64& gen, std::uint64_t n) {
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t mod = (kMax % n + 1) % n;
  while (true) {
    const std::uint64_t r = gen();
    if (r <= kMax - mod) return r % n;
  }
}

constexpr long long kBlockSize = 1024;

long long simulate_block(std::uint64_t block_seed, long long block_reps,
                         long long n_events, long long n_bins,
                         long long threshold) {
  std::mt19937_64 gen(block_seed);
  std::vector<long long> counts(static_cast<std::size_t>(n_bins));
  long long hits = 0;
  for (long long rep = 0; rep < block_reps; ++rep) {
    std::fill(counts.begin(), counts.end(), 0);
    long long best = 0;
    for (long long e = 0; e < n_events; ++e) {
      const auto bin = static_cast<std::size_t>(
          draw_uniform(gen, static_cast<std::uint64_t>(n_bins)));
      best = std::max(best, ++counts[bin]);
    }
    if (best >= threshold) ++hits;
  }
  return hits;
}

}  // namespace

std::pair<Table2x2, Table2x2> classify_suspicious(long long deaths_before,
                                                  long long deaths_after,
                                                  const BiasScenario& s) {
  if (deaths_before < 0 || deaths_after < 0) {
    throw std::invalid_argument("death counts must be nonnegative");
  }
  const long long ua = round_count(s.unbiased_rate, deaths_before);
  const long long ub = round_count(s.unbiased_rate, deaths_after);
  const long long ba = round_count(s.off_duty_rate, deaths_before);
  const long long bb = round_count(s.on_duty_rate, deaths_after);
  Table2x2 unbiased(ua, ub, deaths_before - ua, deaths_after - ub);
  Table2x2 biased(ba, bb, deaths_before - ba, deaths_after - bb);
  return {unbiased, biased};
}

Example1Report evaluate_example1(long long deaths_before,
                                 long long deaths_after,
                                 const BiasScenario& s) {
  const auto [unbiased, biased] =
      classify_suspicious(deaths_before, deaths_after, s);
  Example1Report report{
      {unbiased, fisher_less(unbiased), after_before_ratio(unbiased)},
      {biased, fisher_less(biased), after_before_ratio(biased)},
  };
  return report;
}

Example2Report evaluate_example2(const FrequencyDataset& data_unbiased,
                                 const FrequencyDataset& data_biased) {
  auto arm = [](const FrequencyDataset& data) {
    Example2Arm a{anova_sequential(data, {"nurse"}),
                  anova_sequential(data, {"morning", "nurse"}),
                  Probability(),
                  Probability()};
    a.nurse_p_ignoring = nurse_p(a.ignoring_morning);
    a.nurse_p_allowing = nurse_p(a.allowing_morning);
    return a;
  };
  return Example2Report{arm(data_unbiased), arm(data_biased)};
}

std::vector<Probability> bonferroni_adjust(
    const std::vector<Probability>& p_values) {
  if (p_values.empty()) {
    throw std::invalid_argument("no p-values to adjust");
  }
  const auto m = static_cast<double>(p_values.size());
  std::vector<Probability> adjusted;
  adjusted.reserve(p_values.size());
  for (const auto& p : p_values) {
    adjusted.emplace_back(std::min(1.0, m * p.value()));
  }
  return adjusted;
}

MonteCarloEstimate max_bin_cluster_prob(long long n_events, long long n_bins,
                                        long long threshold,
                                        long long replicates,
                                        std::uint64_t seed, int workers) {
  if (n_events < 1 || n_bins < 1 || threshold < 1) {
    throw std::invalid_argument(
        "event, bin, and threshold counts must be positive");
  }
  if (replicates < 1000) {
    throw std::invalid_argument("at least 1000 replicates are required");
  }
  MonteCarloEstimate est;
  est.replicates = replicates;
  est.seed = seed;
  if (threshold > n_events) {
    est.estimate = Probability(0.0);
    return est;
  }

  const long long n_blocks = (replicates + kBlockSize - 1) / kBlockSize;
  long long n_workers = workers > 0
                            ? workers
                            : std::max(1u, std::thread::hardware_concurrency());
  n_workers = std::min<long long>(n_workers, n_blocks);

  std::atomic<long long> next_block{0};
  std::atomic<long long> total_hits{0};
  auto worker = [&] {
    long long local_hits = 0;
    while (true) {
      const long long b = next_block.fetch_add(1);
      if (b >= n_blocks) break;
      const long long reps =
          std::min(kBlockSize, replicates - b * kBlockSize);
      local_hits += simulate_block(
          splitmix64_at(seed, static_cast<std::uint64_t>(b)), reps, n_events,
          n_bins, threshold);
    }
    total_hits.fetch_add(local_hits);
  };

  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (long long i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  est.hits = total_hits.load();
  const double p = static_cast<double>(est.hits) /
                   static_cast<double>(replicates);
  est.estimate = Probability(p);
  est.std_error =
      std::sqrt(p * (1.0 - p) / static_cast<double>(replicates));
  return est;
}

Probability single_bin_cluster_prob(long long n_events, long long n_bins,
                                    long long threshold) {
  if (n_events < 1 || n_bins < 1) {
    throw std::invalid_argument("event and bin counts must be positive");
  }
  if (threshold <= 0) return Probability(1.0);
  if (threshold > n_events) return Probability(0.0);
  if (n_bins == 1) return Probability(1.0);

  const double n = static_cast<double>(n_events);
  const double log_p = -std::log(static_cast<double>(n_bins));
  const double log_q = std::log1p(-1.0 / static_cast<double>(n_bins));
  const double mean = n / static_cast<double>(n_bins);

  auto log_pmf = [&](long long k) {
    const double kd = static_cast<double>(k);
    return log_choose(n_events, k) + kd * log_p + (n - kd) * log_q;
  };
  // pmf(k+1) / pmf(k)
  auto up_ratio = [&](long long k) {
    return (n - static_cast<double>(k)) / (static_cast<double>(k) + 1.0) /
           (static_cast<double>(n_bins) - 1.0);
  };

  if (static_cast<double>(threshold) > mean) {
    // Upper tail summed from its largest term downward in magnitude.
    double term = 1.0;
    double total = 1.0;
    for (long long k = threshold; k < n_events; ++k) {
      term *= up_ratio(k);
      total += term;
      if (term < total * 1e-17) break;
    }
    const double v = std::exp(log_pmf(threshold)) * total;
    return Probability(std::min(v, 1.0));
  }

  // Below the mean the complement of the lower tail is better behaved;
  // the lower tail's largest term is its top one.
  double term = 1.0;
  double total = 1.0;
  for (long long k = threshold - 1; k > 0; --k) {
    term /= up_ratio(k - 1);
    total += term;
    if (term < total * 1e-17) break;
  }
  const double lower = std::exp(log_pmf(threshold - 1)) * total;
  return Probability(std::max(0.0, 1.0 - lower));
}

}  // namespace medstat
