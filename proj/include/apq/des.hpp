#ifndef APQ_DES_HPP
#define APQ_DES_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "apq/model.hpp"
#include "apq/rng.hpp"
#include "apq/stats.hpp"

namespace apq {

struct DesConfig {
  std::uint64_t num_jobs = 0;     // arrivals recorded (ids 0 .. num_jobs-1)
  std::uint64_t warmup_jobs = 0;  // leading arrivals discarded from statistics
  std::uint64_t seed = 0;
  bool allow_unstable = false;   // exploratory override for rho >= 1
  bool audit_dispatch = false;   // verify every dispatch against all waiting jobs
};

struct JobRecord {
  std::uint64_t id = 0;  // global arrival index
  std::uint32_t class_idx = 0;
  double arrival = 0.0;
  double size = 0.0;
  double wait = 0.0;             // service start - arrival
  double workload_before = 0.0;  // total workload W(s-) at the arrival epoch
};

struct DesResult {
  ApModel model;
  DesConfig config;
  // Post-warmup jobs in arrival order (ids warmup_jobs .. num_jobs-1). Waits
  // are exact: arrivals keep flowing until every recorded job is dispatched.
  std::vector<JobRecord> jobs;
  std::uint64_t jobs_simulated = 0;  // arrivals generated, including the tail
  std::uint64_t warmup_discarded = 0;
  std::uint64_t audit_checks = 0;
  std::uint64_t audit_violations = 0;
};

// Event-driven simulation of the non-preemptive accumulating-priority queue.
// Requires pure compound Poisson classes. Per-class arrival streams have
// their own generators keyed by (seed, class), so the realized arrivals do
// not depend on the priority rates; dispatch picks the head-of-line job
// maximizing b_i (now - arrival), ties broken by arrival epoch then class.
DesResult run_des(const ApModel& model, const DesConfig& cfg);
DesResult run_des(const ApModel& model, std::uint64_t num_jobs, std::uint64_t warmup_jobs,
                  std::uint64_t seed);

// Default burn-in: 10% of the jobs, at least 1e4 (capped below num_jobs).
std::uint64_t default_warmup(std::uint64_t num_jobs);

// Job-level (customer) statistics; standard errors by batch means, since
// consecutive waits are serially correlated.
Estimate class_wait_mean(const DesResult& result, std::size_t cls);
Estimate class_wait_lst(const DesResult& result, std::size_t cls, double alpha);
Estimate class_zero_wait_prob(const DesResult& result, std::size_t cls);

// E e^{-alpha W(s-)} pooled over all arrivals (PASTA view of the workload).
Estimate workload_lst(const DesResult& result, double alpha);

// Empirical E e^{-alpha (content in front of an arriving particle)}: each job
// contributes the in-batch integral e^{-alpha W}(1 - e^{-alpha X})/alpha in
// closed form, normalized by the total arriving work. Restricted to one class
// when cls is given, otherwise over the aggregate stream. Matches
// w0_lst * excess_lst of the selected stream in steady state.
Estimate tagged_particle_stat(const DesResult& result, double alpha,
                              std::optional<std::size_t> cls = std::nullopt);

// Particle-level waits of the tagged class. For each recorded tagged job one
// in-batch offset x ~ U[0, X) is drawn, weighted by the job size X (a random
// particle lands in a job size-biased); the extra delay beyond the batch head
// is an independent exact first passage of x against the decelerated
// overtaking input.
struct ParticleSamples {
  std::vector<double> waits;
  std::vector<double> weights;
};
ParticleSamples particle_wait_samples(const DesResult& result, Rng& rng);

Estimate particle_lst(const ParticleSamples& ps, double alpha);
Estimate particle_mean(const ParticleSamples& ps);

// CSV dump: job id, class, arrival, size, wait, workload_before.
void write_des_csv(std::ostream& os, const DesResult& result,
                   const std::vector<std::string>& meta);

}  // namespace apq

#endif  // APQ_DES_HPP
