#include "mc.hpp"

#include <cmath>
#include <thread>
#include <vector>

#include "error.hpp"
#include "specfun.hpp"

namespace fpt {

void McConfig::validate() const {
  if (n_paths < 100) fail(errc::invalid_config, "mc: n_paths must be >= 100");
  if (!(dt > 0.0)) fail(errc::invalid_config, "mc: dt must be positive");
  if (!(horizon > 0.0)) fail(errc::invalid_config, "mc: horizon must be positive");
  if (!(dt < horizon)) fail(errc::invalid_config, "mc: dt must be < horizon");
}

double bridge_crossing_prob(double x_k, double x_k1, double c, double dt) {
  return std::exp(-2.0 * (c - x_k) * (c - x_k1) / dt);
}

namespace {

// splitmix64-style hash; (seed, counter) -> 64 random bits
std::uint64_t mix(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = seed + counter * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double uniform01(std::uint64_t seed, std::uint64_t counter) {
  return (double(mix(seed, counter) >> 11) + 0.5) * 0x1.0p-53;
}

double normal_draw(std::uint64_t seed, std::uint64_t counter) {
  return specfun::normal_quantile(uniform01(seed, counter));
}

constexpr std::uint64_t kAltStream = 0x517CC1B727220A95ull;

struct StepPlan {
  std::uint64_t n_steps;
  double dt;
  double last_dt;
  std::uint64_t stride;  // counters reserved per path
};

StepPlan plan_steps(const McConfig& cfg) {
  std::uint64_t n = std::uint64_t(std::ceil(cfg.horizon / cfg.dt - 1e-12));
  if (n == 0) n = 1;
  double last = cfg.horizon - double(n - 1) * cfg.dt;
  return {n, cfg.dt, last, 2 * n + 2};
}

// Runs one path with the given Z sign and uniform stream; returns true on
// crossing.
bool run_path(const std::function<double(double)>& mu, double x0, double c,
              const McConfig& cfg, const StepPlan& plan, std::uint64_t base,
              double z_sign, std::uint64_t u_seed) {
  double x = x0;
  for (std::uint64_t k = 0; k < plan.n_steps; ++k) {
    double h = (k + 1 == plan.n_steps) ? plan.last_dt : plan.dt;
    double z = z_sign * normal_draw(cfg.seed, base + 2 * k);
    double x_next = x + mu(x) * h + std::sqrt(h) * z;
    if (x_next >= c) return true;
    if (cfg.bridge_correction) {
      double p = bridge_crossing_prob(x, x_next, c, h);
      if (uniform01(u_seed, base + 2 * k + 1) < p) return true;
    }
    x = x_next;
  }
  return false;
}

template <typename Work>
void parallel_chunks(std::uint64_t total, const Work& work) {
  unsigned hw = std::thread::hardware_concurrency();
  unsigned n_threads = hw == 0 ? 1u : hw;
  if (total < 1024) n_threads = 1;
  std::vector<std::thread> pool;
  std::uint64_t chunk = (total + n_threads - 1) / n_threads;
  for (unsigned t = 0; t < n_threads; ++t) {
    std::uint64_t lo = t * chunk;
    std::uint64_t hi = std::min(total, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&work, t, lo, hi] { work(t, lo, hi); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

McEstimate estimate_crossing(const std::function<double(double)>& mu,
                             double x0, double c, const McConfig& cfg) {
  cfg.validate();
  if (!(x0 < c)) fail(errc::invalid_argument, "mc: x0 must be below barrier");
  StepPlan plan = plan_steps(cfg);

  unsigned hw = std::thread::hardware_concurrency();
  std::vector<std::uint64_t> counts(hw == 0 ? 1 : hw, 0);
  parallel_chunks(cfg.n_paths, [&](unsigned t, std::uint64_t lo,
                                   std::uint64_t hi) {
    std::uint64_t crossed = 0;
    for (std::uint64_t path = lo; path < hi; ++path)
      if (run_path(mu, x0, c, cfg, plan, path * plan.stride, 1.0, cfg.seed))
        ++crossed;
    counts[t] = crossed;
  });
  std::uint64_t crossed = 0;
  for (std::uint64_t v : counts) crossed += v;

  double p = double(crossed) / double(cfg.n_paths);
  double se = std::sqrt(p * (1.0 - p) / double(cfg.n_paths));
  return {p, se, cfg.n_paths};
}

McEstimate estimate_crossing_antithetic(const std::function<double(double)>& mu,
                                        double x0, double c,
                                        const McConfig& cfg) {
  cfg.validate();
  if (!(x0 < c)) fail(errc::invalid_argument, "mc: x0 must be below barrier");
  if (cfg.n_paths % 2 != 0)
    fail(errc::invalid_config, "mc: antithetic estimator needs even n_paths");
  StepPlan plan = plan_steps(cfg);
  std::uint64_t n_pairs = cfg.n_paths / 2;

  unsigned hw = std::thread::hardware_concurrency();
  std::vector<std::uint64_t> half(hw == 0 ? 1 : hw, 0);
  std::vector<std::uint64_t> full(hw == 0 ? 1 : hw, 0);
  parallel_chunks(n_pairs, [&](unsigned t, std::uint64_t lo, std::uint64_t hi) {
    std::uint64_t ones = 0, twos = 0;
    for (std::uint64_t pair = lo; pair < hi; ++pair) {
      std::uint64_t base = pair * plan.stride;
      int hits =
          int(run_path(mu, x0, c, cfg, plan, base, 1.0, cfg.seed)) +
          int(run_path(mu, x0, c, cfg, plan, base, -1.0, cfg.seed ^ kAltStream));
      if (hits == 1) ++ones;
      if (hits == 2) ++twos;
    }
    half[t] = ones;
    full[t] = twos;
  });
  std::uint64_t ones = 0, twos = 0;
  for (std::size_t i = 0; i < half.size(); ++i) {
    ones += half[i];
    twos += full[i];
  }

  // pair averages take values {0, 1/2, 1}; variance from exact counts
  double n = double(n_pairs);
  double p = (0.5 * double(ones) + double(twos)) / n;
  double mean_sq = (0.25 * double(ones) + double(twos)) / n;
  double var = std::max(0.0, mean_sq - p * p) * n / std::max(1.0, n - 1.0);
  double se = std::sqrt(var / n);
  return {p, se, cfg.n_paths};
}

}  // namespace fpt
