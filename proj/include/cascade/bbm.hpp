#ifndef CASCADE_BBM_HPP
#define CASCADE_BBM_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "cascade/error.hpp"
#include "cascade/kpp_core.hpp"

namespace cascade {

// ---------------------------------------------------------------------------
// Counter-based random streams. A stream is fully determined by its key, so results do not
// depend on traversal order or on how replicas are distributed over threads.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t stream_key(std::uint64_t seed, std::uint64_t replica, std::uint64_t lineage) {
  return splitmix64(splitmix64(splitmix64(seed) ^ replica) ^ lineage);
}

/// Child lineage identifiers: a hash of the parent's id and the child slot.
inline std::uint64_t child_lineage(std::uint64_t parent, unsigned slot) {
  return splitmix64(parent * 0xD1B54A32D192ED03ULL + slot + 1);
}

class CounterStream {
 public:
  explicit CounterStream(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64() { return splitmix64(key_ ^ splitmix64(counter_++)); }
  /// Uniform on (0, 1).
  double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }
  double exponential(double rate) { return -std::log(uniform()) / rate; }
  double normal() {
    const double u1 = uniform(), u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// ---------------------------------------------------------------------------

struct BbmConfig {
  std::size_t k = 1;
  double alpha = 1.0;
  double binary_rate = 1.0;
  double diffusion_variance = 2.0;
  double t_max = 5.0;
  std::uint64_t seed = 1;
  std::size_t max_particles = 5'000'000;
  std::size_t initial_type = 1;  ///< 1-based
  /// Extra times (< t_max) at which Z_t and the maximum are also recorded.
  std::vector<double> observation_times;

  void validate() const {
    require(k >= 1, ErrorKind::configuration, "k must be at least 1");
    require(alpha >= 0.0 && binary_rate >= 0.0, ErrorKind::configuration, "rates must be non-negative");
    require(diffusion_variance > 0.0, ErrorKind::configuration, "diffusion variance must be positive");
    require(t_max > 0.0, ErrorKind::configuration, "t_max must be positive");
    require(initial_type >= 1 && initial_type <= k, ErrorKind::configuration, "initial type out of range");
    require(max_particles >= 1, ErrorKind::configuration, "max_particles must be positive");
    for (std::size_t m = 0; m < observation_times.size(); ++m) {
      require(observation_times[m] >= 0.0 && observation_times[m] <= t_max, ErrorKind::configuration,
              "observation times must lie in [0, t_max]");
      require(m == 0 || observation_times[m] > observation_times[m - 1], ErrorKind::configuration,
              "observation times must increase");
    }
  }

  /// Total event rate of a particle of 0-based `type`.
  double event_rate(std::size_t type) const { return binary_rate + (type + 1 < k ? alpha : 0.0); }
};

struct BbmObservation {
  double t = 0.0;
  double max_position = -INFINITY;
  double derivative_martingale = 0.0;
  std::vector<std::size_t> particle_counts;
};

struct BbmReplica {
  std::size_t index = 0;
  double max_position = -INFINITY;  ///< M_t at t_max
  std::vector<std::size_t> particle_counts;  ///< per type at t_max
  double derivative_martingale = 0.0;        ///< Z_t at t_max
  bool truncated = false;
  std::vector<BbmObservation> observations;  ///< one per configured observation time
};

/// Exact simulation of one replica. Each particle lives for an Exp(rate) time, moving by a
/// centred Gaussian increment of variance sigma^2 dt, then splits into (i, i) or, with
/// probability alpha / rate, into (i, i + 1). The genealogy is traversed depth first.
inline BbmReplica simulate_replica(const BbmConfig& cfg, std::size_t replica_index) {
  cfg.validate();
  struct Pending {
    std::size_t type;  // 0-based
    double position;
    double birth;
    std::uint64_t lineage;
  };
  const double sigma = std::sqrt(cfg.diffusion_variance);
  const double T = cfg.t_max;
  const auto& obs_t = cfg.observation_times;

  BbmReplica out;
  out.index = replica_index;
  out.particle_counts.assign(cfg.k, 0);
  out.observations.resize(obs_t.size());
  for (std::size_t m = 0; m < obs_t.size(); ++m) {
    out.observations[m].t = obs_t[m];
    out.observations[m].particle_counts.assign(cfg.k, 0);
  }

  auto record = [](BbmObservation& o, std::size_t type, double x, double t) {
    o.max_position = std::max(o.max_position, x);
    o.derivative_martingale += (2.0 * t - x) * std::exp(x - 2.0 * t);
    ++o.particle_counts[type];
  };

  std::vector<Pending> stack{{cfg.initial_type - 1, 0.0, 0.0, 1}};
  std::size_t created = 1;
  while (!stack.empty()) {
    const Pending p = stack.back();
    stack.pop_back();
    CounterStream rng(stream_key(cfg.seed, replica_index, p.lineage));
    const double rate = cfg.event_rate(p.type);
    const double life = rate > 0.0 ? rng.exponential(rate) : INFINITY;
    const double death = p.birth + life;
    const double end = std::min(death, T);

    // Positions at observation times inside [birth, end), then at the end of the segment.
    double t = p.birth, x = p.position;
    auto it = std::lower_bound(obs_t.begin(), obs_t.end(), p.birth);
    for (; it != obs_t.end() && *it < end; ++it) {
      x += sigma * std::sqrt(*it - t) * rng.normal();
      t = *it;
      record(out.observations[static_cast<std::size_t>(it - obs_t.begin())], p.type, x, t);
    }
    x += sigma * std::sqrt(end - t) * rng.normal();

    if (death >= T) {
      out.max_position = std::max(out.max_position, x);
      out.derivative_martingale += (2.0 * T - x) * std::exp(x - 2.0 * T);
      ++out.particle_counts[p.type];
      // An observation exactly at t_max is the final state.
      if (it != obs_t.end() && *it == T) record(out.observations[static_cast<std::size_t>(it - obs_t.begin())], p.type, x, T);
      continue;
    }
    const bool mutate = p.type + 1 < cfg.k && rng.uniform() * rate < cfg.alpha;
    created += 1;
    if (created > cfg.max_particles) {
      out.truncated = true;
      break;
    }
    stack.push_back({p.type, x, death, child_lineage(p.lineage, 0)});
    stack.push_back({mutate ? p.type + 1 : p.type, x, death, child_lineage(p.lineage, 1)});
  }
  return out;
}

/// Replicas [0, n) distributed over `threads` workers; the result is indexed by replica.
inline std::vector<BbmReplica> simulate_replicas(const BbmConfig& cfg, std::size_t n, std::size_t threads = 1) {
  cfg.validate();
  std::vector<BbmReplica> out(n);
  threads = std::max<std::size_t>(1, std::min(threads, n));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next++; r < n; r = next++) out[r] = simulate_replica(cfg, r);
  };
  if (threads == 1) {
    worker();
    return out;
  }
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(worker);
  pool.clear();
  return out;
}

// ---------------------------------------------------------------------------

class EmpiricalCdf {
 public:
  EmpiricalCdf() = default;
  explicit EmpiricalCdf(std::vector<double> samples, std::size_t truncated = 0)
      : sorted_(std::move(samples)), truncated_(truncated) {
    require(!sorted_.empty(), ErrorKind::no_data, "empirical distribution has no samples");
    std::sort(sorted_.begin(), sorted_.end());
  }

  std::size_t n() const { return sorted_.size(); }
  std::size_t truncated() const { return truncated_; }
  const std::vector<double>& sorted() const { return sorted_; }

  /// Fraction of samples >= x.
  double survival(double x) const {
    const auto it = std::lower_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(sorted_.end() - it) / static_cast<double>(n());
  }
  /// Fraction of samples > x.
  double survival_strict(double x) const {
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(sorted_.end() - it) / static_cast<double>(n());
  }
  double median() const {
    const std::size_t m = n() / 2;
    return n() % 2 ? sorted_[m] : 0.5 * (sorted_[m - 1] + sorted_[m]);
  }

 private:
  std::vector<double> sorted_;
  std::size_t truncated_ = 0;
};

/// Distribution of M_t over non-truncated replicas.
inline EmpiricalCdf empirical_max_cdf(const std::vector<BbmReplica>& replicas, std::size_t min_samples = 100) {
  std::vector<double> maxima;
  std::size_t truncated = 0;
  for (const auto& r : replicas) {
    if (r.truncated)
      ++truncated;
    else
      maxima.push_back(r.max_position);
  }
  require(!maxima.empty(), ErrorKind::no_data, "every replica was truncated");
  require(maxima.size() >= min_samples, ErrorKind::insufficient_data,
          "need at least " + std::to_string(min_samples) + " non-truncated replicas");
  return EmpiricalCdf(std::move(maxima), truncated);
}

struct KsComparison {
  double distance = 0.0;
  double at_x = 0.0;
  std::size_t points = 0;
  std::size_t samples = 0;
  std::size_t truncated = 0;
};

/// Sup distance between the empirical survival function and a PDE profile v(x) on the grid
/// points where v lies in [1e-3, 1 - 1e-3]. Both one-sided limits of the step function are used.
inline KsComparison compare_bbm_pde(const EmpiricalCdf& cdf, std::span<const double> pde, const Grid1D& grid) {
  require(pde.size() == grid.n, ErrorKind::invalid_input, "PDE field/grid size mismatch");
  KsComparison out;
  out.samples = cdf.n();
  out.truncated = cdf.truncated();
  for (std::size_t j = 0; j < grid.n; ++j) {
    const double v = pde[j];
    if (v < 1e-3 || v > 1.0 - 1e-3) continue;
    const double x = grid.x(j);
    const double d = std::max(std::abs(cdf.survival(x) - v), std::abs(cdf.survival_strict(x) - v));
    ++out.points;
    if (d > out.distance) {
      out.distance = d;
      out.at_x = x;
    }
  }
  require(out.points > 0, ErrorKind::invalid_input, "PDE field has no points in [1e-3, 1 - 1e-3]");
  return out;
}

struct MartingaleStats {
  double t;
  double mean;
  double stddev;
  double standard_error;
};

/// Monte Carlo mean and spread of Z_t for the single-type process (type k only).
inline std::vector<MartingaleStats> derivative_martingale_series(BbmConfig cfg, const std::vector<double>& times,
                                                                 std::size_t n_replicas, std::size_t threads = 1) {
  require(!times.empty() && n_replicas >= 2, ErrorKind::invalid_input, "need times and at least two replicas");
  cfg.initial_type = cfg.k;
  cfg.t_max = std::max(cfg.t_max, times.back());
  cfg.observation_times = times;
  const auto reps = simulate_replicas(cfg, n_replicas, threads);
  std::vector<MartingaleStats> out;
  for (std::size_t m = 0; m < times.size(); ++m) {
    double s = 0.0, s2 = 0.0;
    std::size_t used = 0;
    for (const auto& r : reps) {
      if (r.truncated) continue;
      const double z = r.observations[m].derivative_martingale;
      s += z;
      s2 += z * z;
      ++used;
    }
    require(used >= 2, ErrorKind::no_data, "too few non-truncated replicas");
    const double nn = static_cast<double>(used);
    const double mean = s / nn;
    const double var = std::max(0.0, (s2 - nn * mean * mean) / (nn - 1.0));
    out.push_back({times[m], mean, std::sqrt(var), std::sqrt(var / nn)});
  }
  return out;
}

struct FirstEvent {
  double time;
  bool mutation;
};

/// First event of `n` independent root particles of the given 1-based type.
inline std::vector<FirstEvent> sample_first_events(const BbmConfig& cfg, std::size_t type, std::size_t n) {
  cfg.validate();
  require(type >= 1 && type <= cfg.k, ErrorKind::invalid_input, "type out of range");
  std::vector<FirstEvent> out(n);
  const double rate = cfg.event_rate(type - 1);
  for (std::size_t r = 0; r < n; ++r) {
    // Same draw order as simulate_replica: lifetime first, then the type split.
    CounterStream rng(stream_key(cfg.seed, r, 1));
    out[r].time = rng.exponential(rate);
    (void)rng.normal();
    out[r].mutation = type < cfg.k && rng.uniform() * rate < cfg.alpha;
  }
  return out;
}

/// Asymptotic Kolmogorov distribution tail P(K > lambda).
inline double kolmogorov_tail(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += (j % 2 ? 1.0 : -1.0) * term;
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

struct KsTest {
  double statistic;
  double p_value;
};

/// One-sample Kolmogorov-Smirnov test against a continuous CDF.
template <typename Cdf>
KsTest ks_test(std::vector<double> samples, Cdf&& cdf) {
  require(!samples.empty(), ErrorKind::no_data, "no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const double f = cdf(samples[j]);
    d = std::max({d, static_cast<double>(j + 1) / n - f, f - static_cast<double>(j) / n});
  }
  const double rn = std::sqrt(n);
  return {d, kolmogorov_tail((rn + 0.12 + 0.11 / rn) * d)};
}

}  // namespace cascade

#endif  // CASCADE_BBM_HPP
