#ifndef APQ_FPT_SIM_HPP
#define APQ_FPT_SIM_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "apq/model.hpp"
#include "apq/rng.hpp"

namespace apq {

// Classification of the increment count K of the recursion
// T_{n+1} = v + J_a(T_n). K counts the strict increments; it is finite a.s.
// iff the overtaking input is pure compound Poisson, infinite otherwise, and
// cannot be observed from grid increments of an infinite-activity path.
enum class KClass { finite, infinite, unobserved };

// One simulated first-passage outcome.
struct FptSample {
  double t = 0.0;  // first-passage time T (>= v); horizon value when censored
  KClass k_class = KClass::finite;
  std::uint64_t k = 0;  // valid when k_class == finite
  std::vector<double> tn_prefix;  // leading T_n values (exact mode)
  bool censored = false;
  std::uint64_t grid_steps = 0;           // grid mode: steps simulated
  std::uint64_t grid_positive_steps = 0;  // grid mode: steps with J_a increment > 0
};

struct FptConfig {
  double v = 1.0;
  std::size_t replications = 1;
  double grid_step = 1e-3;           // h; grid mode only, h <= v/10 when v > 0
  double horizon_multiplier = 50.0;  // censoring horizon as a multiple of E T; >= 10
  std::uint64_t seed = 0;
};

enum class FptMode { exact, grid };

// One jump of the decelerated overtaking superposition, in tagged time.
struct JumpEvent {
  double time = 0.0;
  double size = 0.0;
};

// First passage of v + drift_rate*t + sum_{time_j <= t} size_j - t through
// zero, on a path whose jumps are known on [0, horizon]. Requires
// drift_rate < 1 and jumps sorted by time. Returns nothing when the path does
// not cross within the horizon. Deterministic given the path; realizes the
// coupling under which T is monotone in v.
std::optional<double> first_passage_on_path(std::span<const JumpEvent> jumps, double drift_rate,
                                            double v, double horizon);

// Exact sampler of T = inf{t : v + J_a(t) - t = 0} for a compound Poisson
// overtaking input (drift allowed while sum a_i c_i < 1): class-i jumps
// arrive at rate a_i lambda_i in tagged time and the workload is drained by
// direct depletion, equivalent in law to the recursion limit by the a.s.
// identity v + J_a(T) = T. Reusable across many v draws.
class OvertakingSampler {
 public:
  explicit OvertakingSampler(const ApModel& model);

  // First-passage time alone.
  double sample_time(double v, Rng& rng) const;
  // First-passage time plus the realized jump prefix on [0, T].
  double sample_time_recording(double v, Rng& rng, std::vector<JumpEvent>& jumps) const;

  double drift() const { return drift_; }
  double jump_rate() const { return total_rate_; }

 private:
  struct Source {
    double rate;
    JumpDist jumps;
  };
  double drift_ = 0.0;
  double total_rate_ = 0.0;
  std::vector<Source> sources_;
};

// Event-driven exact simulation of one first passage; K and the T_n prefix
// are reconstructed on the same path. Every non-tagged class must be compound
// Poisson.
FptSample simulate_fpt_exact(const ApModel& model, const FptConfig& cfg, Rng& rng);

// Grid-mode first passage: v + J_a(kh) - kh on the step grid, crossing
// linearly interpolated with the drift-only decrease inside the crossing
// step (bias O(h)). Works for any subordinator classes. Paths that do not
// cross within horizon_multiplier * E T are marked censored.
FptSample simulate_fpt_grid(const ApModel& model, const FptConfig& cfg, Rng& rng);

// cfg.replications independent samples, parallel across replications with
// per-replication generators; the result vector is indexed by replication and
// identical for every worker count.
std::vector<FptSample> run_fpt(const ApModel& model, const FptConfig& cfg, FptMode mode);

struct LstEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  // Censored samples contribute zero to e^{-alpha T}, so with censoring the
  // estimate is a lower bound of the true transform value.
  bool lower_bound = false;
};

// Sample mean and standard error of e^{-alpha T}.
LstEstimate estimate_lst(std::span<const FptSample> samples, double alpha);

struct KDistribution {
  // pmf[k] = empirical P(K = k) among finite-K samples.
  std::vector<double> pmf;
  std::size_t finite_count = 0;
  std::size_t infinite_count = 0;
  std::size_t unobserved_count = 0;
  // Per-n comparison of the no-increment probability P(T_n - T_{n-1} = 0)
  // (equivalently P(K <= n-1)) with the geometric lower bound
  // exp(-Lambda_a rho_a^{n-1} v).
  struct NoIncrementRow {
    std::size_t n = 0;
    double empirical = 0.0;
    double std_error = 0.0;
    double lower_bound = 0.0;
    std::size_t at_risk = 0;  // samples with K >= n-1
  };
  std::vector<NoIncrementRow> no_increment;
};

// Empirical distribution of K from exact-mode samples, with the appendix
// bound computed from the model's overtaking parameters and initial level v.
KDistribution k_distribution(std::span<const FptSample> samples, const ApModel& model, double v);

// CSV dump: replication, T, K, censored. `meta` lines are emitted as leading
// '#' comments (model hash, artifact version, seed).
void write_fpt_csv(std::ostream& os, std::span<const FptSample> samples,
                   const std::vector<std::string>& meta);

}  // namespace apq

#endif  // APQ_FPT_SIM_HPP
