#include "apq/des.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <ostream>

#include "apq/errors.hpp"
#include "apq/fpt_sim.hpp"

namespace apq {

namespace {

constexpr double kNoArrival = std::numeric_limits<double>::infinity();

// Per-class compound Poisson arrival stream: aggregate rate with jump sizes
// from the rate-weighted component mixture.
class ArrivalStream {
 public:
  ArrivalStream(const SubordinatorSpec& spec, Rng rng) : rng_(std::move(rng)) {
    for (const auto& comp : spec.components()) {
      const auto& cp = std::get<CompoundPoisson>(comp);
      rates_.push_back(cp.rate);
      jumps_.push_back(cp.jumps);
      total_rate_ += cp.rate;
    }
  }

  bool active() const { return total_rate_ > 0.0; }

  // Draws the next interarrival gap and job size.
  std::pair<double, double> next() {
    std::exponential_distribution<double> gap(total_rate_);
    const double dt = gap(rng_);
    double size;
    if (jumps_.size() == 1) {
      size = jumps_[0].sample(rng_);
    } else {
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      double pick = unif(rng_) * total_rate_;
      std::size_t idx = jumps_.size() - 1;
      for (std::size_t i = 0; i < jumps_.size(); ++i) {
        if (pick < rates_[i]) {
          idx = i;
          break;
        }
        pick -= rates_[i];
      }
      size = jumps_[idx].sample(rng_);
    }
    return {dt, size};
  }

 private:
  Rng rng_;
  double total_rate_ = 0.0;
  std::vector<double> rates_;
  std::vector<JumpDist> jumps_;
};

struct Pending {
  std::uint64_t id;
  double arrival;
  double size;
};

}  // namespace

std::uint64_t default_warmup(std::uint64_t num_jobs) {
  const std::uint64_t tenth = num_jobs / 10;
  const std::uint64_t w = std::max<std::uint64_t>(tenth, 10000);
  return num_jobs == 0 ? 0 : std::min(w, num_jobs - 1);
}

DesResult run_des(const ApModel& model, const DesConfig& cfg) {
  if (!model.all_compound_poisson()) {
    throw unsupported_model_error(
        "the discrete-event oracle requires pure compound Poisson classes");
  }
  if (!cfg.allow_unstable) model.ensure_stable();
  if (cfg.num_jobs == 0) throw validation_error("run_des: num_jobs must be positive");
  if (cfg.warmup_jobs >= cfg.num_jobs) {
    throw validation_error("run_des: warmup_jobs must be smaller than num_jobs");
  }

  const std::size_t n_classes = model.num_classes();
  std::vector<ArrivalStream> streams;
  std::vector<double> next_arrival(n_classes, kNoArrival);
  std::vector<double> next_size(n_classes, 0.0);
  streams.reserve(n_classes);
  for (std::size_t c = 0; c < n_classes; ++c) {
    streams.emplace_back(model.classes()[c].input, make_stream(cfg.seed, c));
    if (streams[c].active()) {
      auto [dt, size] = streams[c].next();
      next_arrival[c] = dt;
      next_size[c] = size;
    }
  }
  {
    bool any = false;
    for (std::size_t c = 0; c < n_classes; ++c) any = any || streams[c].active();
    if (!any) throw validation_error("run_des: no class generates arrivals");
  }

  DesResult result{model, cfg, {}, 0, cfg.warmup_jobs, 0, 0};
  result.jobs.resize(cfg.num_jobs - cfg.warmup_jobs);

  std::vector<std::deque<Pending>> queue(n_classes);
  bool busy = false;
  double completion = 0.0;
  std::uint64_t arrivals = 0;
  std::uint64_t dispatched_recorded = 0;  // dispatched jobs with id < num_jobs

  // Workload is piecewise linear between arrivals; the Lindley update at
  // arrivals is exact and completions never change it.
  double workload_after = 0.0;
  double last_arrival_epoch = 0.0;

  auto dispatch = [&](double now) {
    std::size_t best = n_classes;
    double best_priority = -1.0;
    for (std::size_t c = 0; c < n_classes; ++c) {
      if (queue[c].empty()) continue;
      const Pending& head = queue[c].front();
      const double priority = model.classes()[c].b * (now - head.arrival);
      // ties: earlier arrival wins, then the lower class index (classes are
      // scanned in index order, so keeping the incumbent settles full ties)
      const bool wins = best == n_classes || priority > best_priority ||
                        (priority == best_priority && head.arrival < queue[best].front().arrival);
      if (wins) {
        best = c;
        best_priority = priority;
      }
    }
    if (best == n_classes) return;  // idle
    if (cfg.audit_dispatch) {
      ++result.audit_checks;
      for (std::size_t c = 0; c < n_classes; ++c) {
        for (const Pending& job : queue[c]) {
          if (model.classes()[c].b * (now - job.arrival) > best_priority) {
            ++result.audit_violations;
          }
        }
      }
    }
    Pending job = queue[best].front();
    queue[best].pop_front();
    busy = true;
    completion = now + job.size;
    if (job.id < cfg.num_jobs) {
      ++dispatched_recorded;
      if (job.id >= cfg.warmup_jobs) {
        result.jobs[job.id - cfg.warmup_jobs].wait = now - job.arrival;
      }
    }
  };

  while (dispatched_recorded < cfg.num_jobs) {
    std::size_t arrival_class = n_classes;
    double arrival_epoch = kNoArrival;
    for (std::size_t c = 0; c < n_classes; ++c) {
      if (next_arrival[c] < arrival_epoch) {
        arrival_epoch = next_arrival[c];
        arrival_class = c;
      }
    }
    if (busy && completion <= arrival_epoch) {
      busy = false;
      dispatch(completion);
      continue;
    }

    // arrival
    const double now = arrival_epoch;
    const double size = next_size[arrival_class];
    const std::uint64_t id = arrivals++;
    const double workload_before =
        std::max(0.0, workload_after - (now - last_arrival_epoch));
    workload_after = workload_before + size;
    last_arrival_epoch = now;

    if (id >= cfg.warmup_jobs && id < cfg.num_jobs) {
      JobRecord& rec = result.jobs[id - cfg.warmup_jobs];
      rec.id = id;
      rec.class_idx = static_cast<std::uint32_t>(arrival_class);
      rec.arrival = now;
      rec.size = size;
      rec.workload_before = workload_before;
    }
    queue[arrival_class].push_back({id, now, size});
    auto [dt, nsize] = streams[arrival_class].next();
    next_arrival[arrival_class] = now + dt;
    next_size[arrival_class] = nsize;

    if (!busy) dispatch(now);
  }
  result.jobs_simulated = arrivals;
  return result;
}

DesResult run_des(const ApModel& model, std::uint64_t num_jobs, std::uint64_t warmup_jobs,
                  std::uint64_t seed) {
  DesConfig cfg;
  cfg.num_jobs = num_jobs;
  cfg.warmup_jobs = warmup_jobs;
  cfg.seed = seed;
  return run_des(model, cfg);
}

namespace {

std::vector<double> class_waits(const DesResult& result, std::size_t cls) {
  std::vector<double> xs;
  for (const auto& job : result.jobs) {
    if (job.class_idx == cls) xs.push_back(job.wait);
  }
  if (xs.empty()) throw validation_error("no recorded jobs for the requested class");
  return xs;
}

}  // namespace

Estimate class_wait_mean(const DesResult& result, std::size_t cls) {
  return batch_mean_stderr(class_waits(result, cls));
}

Estimate class_wait_lst(const DesResult& result, std::size_t cls, double alpha) {
  if (!(alpha >= 0.0)) throw validation_error("class_wait_lst: alpha must be nonnegative");
  auto xs = class_waits(result, cls);
  for (double& x : xs) x = std::exp(-alpha * x);
  return batch_mean_stderr(xs);
}

Estimate class_zero_wait_prob(const DesResult& result, std::size_t cls) {
  auto xs = class_waits(result, cls);
  for (double& x : xs) x = x == 0.0 ? 1.0 : 0.0;
  return batch_mean_stderr(xs);
}

Estimate workload_lst(const DesResult& result, double alpha) {
  if (!(alpha >= 0.0)) throw validation_error("workload_lst: alpha must be nonnegative");
  std::vector<double> xs;
  xs.reserve(result.jobs.size());
  for (const auto& job : result.jobs) xs.push_back(std::exp(-alpha * job.workload_before));
  return batch_mean_stderr(xs);
}

Estimate tagged_particle_stat(const DesResult& result, double alpha,
                              std::optional<std::size_t> cls) {
  if (!(alpha >= 0.0)) throw validation_error("tagged_particle_stat: alpha must be nonnegative");
  if (alpha == 0.0) return {1.0, 0.0, result.jobs.size()};
  std::vector<double> ys;
  std::vector<double> ws;
  for (const auto& job : result.jobs) {
    if (cls && job.class_idx != *cls) continue;
    // integral_0^X e^{-alpha (W + x)} dx = e^{-alpha W} (1 - e^{-alpha X}) / alpha
    const double u =
        std::exp(-alpha * job.workload_before) * -std::expm1(-alpha * job.size) / alpha;
    ys.push_back(u / job.size);
    ws.push_back(job.size);
  }
  if (ys.empty()) throw validation_error("tagged_particle_stat: no jobs in the selected stream");
  return weighted_batch_ratio(ys, ws);
}

ParticleSamples particle_wait_samples(const DesResult& result, Rng& rng) {
  const OvertakingSampler sampler(result.model);
  const std::size_t tagged = result.model.tagged_index();
  ParticleSamples ps;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (const auto& job : result.jobs) {
    if (job.class_idx != tagged) continue;
    const double offset = unif(rng) * job.size;
    const double extra = sampler.sample_time(offset, rng);
    ps.waits.push_back(job.wait + extra);
    ps.weights.push_back(job.size);
  }
  if (ps.waits.empty()) throw validation_error("particle_wait_samples: no tagged jobs recorded");
  return ps;
}

Estimate particle_lst(const ParticleSamples& ps, double alpha) {
  if (!(alpha >= 0.0)) throw validation_error("particle_lst: alpha must be nonnegative");
  std::vector<double> ys(ps.waits.size());
  for (std::size_t i = 0; i < ps.waits.size(); ++i) ys[i] = std::exp(-alpha * ps.waits[i]);
  return weighted_batch_ratio(ys, ps.weights);
}

Estimate particle_mean(const ParticleSamples& ps) {
  return weighted_batch_ratio(ps.waits, ps.weights);
}

void write_des_csv(std::ostream& os, const DesResult& result,
                   const std::vector<std::string>& meta) {
  for (const auto& line : meta) os << "# " << line << "\n";
  os << "job,class,arrival,size,wait,workload_before\n";
  char buf[4][64];
  for (const auto& job : result.jobs) {
    std::snprintf(buf[0], sizeof(buf[0]), "%.17g", job.arrival);
    std::snprintf(buf[1], sizeof(buf[1]), "%.17g", job.size);
    std::snprintf(buf[2], sizeof(buf[2]), "%.17g", job.wait);
    std::snprintf(buf[3], sizeof(buf[3]), "%.17g", job.workload_before);
    os << job.id << ',' << job.class_idx << ',' << buf[0] << ',' << buf[1] << ',' << buf[2] << ','
       << buf[3] << "\n";
  }
}

}  // namespace apq
