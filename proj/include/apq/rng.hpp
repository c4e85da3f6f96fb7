#ifndef APQ_RNG_HPP
#define APQ_RNG_HPP

#include <cstdint>
#include <functional>
#include <random>

namespace apq {

using Rng = std::mt19937_64;

// SplitMix64 step; used to derive decorrelated seed material.
std::uint64_t splitmix64(std::uint64_t& state);

// Deterministic generator for stream `stream` of a run keyed by `seed`.
// Distinct streams are statistically independent; the mapping does not depend
// on thread scheduling, so replication r always sees the same generator.
Rng make_stream(std::uint64_t seed, std::uint64_t stream);

// Gamma(shape, rate) variate. Marsaglia-Tsang (2000) squeeze for shape >= 1;
// the boost X = Gamma(shape+1) * U^(1/shape) for shape < 1, evaluated in log
// space. Grid simulation uses shapes as small as ~1e-4, where the true variate
// can fall below the smallest double; such draws are clamped to denorm_min so
// increments stay strictly positive (the mass involved is < e^{-700}).
double sample_gamma(double shape, double rate, Rng& rng);

// Inverse Gaussian(mean mu, shape lambda) variate via the two-root
// transformation of Michael, Schucany & Haas (1976).
double sample_inverse_gaussian(double mu, double lambda, Rng& rng);

// Runs fn(i) for i in [0, n) on a small thread pool. Work is chunked
// statically by index, so any state written to slot i is identical for every
// worker count. fn must be safe to call concurrently for distinct i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace apq

#endif  // APQ_RNG_HPP
