#include "apq/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

namespace apq {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed ^ (0xD1B54A32D192ED03ull * (stream + 1));
  const std::uint64_t a = splitmix64(s);
  const std::uint64_t b = splitmix64(s);
  const std::uint64_t c = splitmix64(s);
  const std::uint64_t d = splitmix64(s);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                    static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32),
                    static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(d >> 32)};
  return Rng(seq);
}

namespace {

double marsaglia_tsang(double shape, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal(rng);
      v = 1.0 + c * x;
    } while (v <= 1e-12);
    v = v * v * v;
    const double u = unif(rng);
    if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace

double sample_gamma(double shape, double rate, Rng& rng) {
  if (shape >= 1.0) return marsaglia_tsang(shape, rng) / rate;
  // shape < 1: Gamma(shape) = Gamma(shape+1) * U^{1/shape}
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double u;
  do {
    u = unif(rng);
  } while (u <= 0.0);
  const double g = marsaglia_tsang(shape + 1.0, rng);
  const double log_x = std::log(g) + std::log(u) / shape;
  const double x = std::exp(log_x) / rate;
  if (x > 0.0) return x;
  return std::numeric_limits<double>::denorm_min();
}

double sample_inverse_gaussian(double mu, double lambda, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double nu = normal(rng);
  const double y = nu * nu;
  const double x =
      mu + mu * mu * y / (2.0 * lambda) -
      mu / (2.0 * lambda) * std::sqrt(4.0 * mu * lambda * y + mu * mu * y * y);
  const double cand = std::max(x, std::numeric_limits<double>::denorm_min());
  const double u = unif(rng);
  if (u <= mu / (mu + cand)) return cand;
  return mu * mu / cand;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, 16);
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = std::min<std::size_t>(n, w * chunk);
    const std::size_t hi = std::min<std::size_t>(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace apq
