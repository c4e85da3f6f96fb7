#include "apq/fpt_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "apq/errors.hpp"
#include "apq/stats.hpp"

namespace apq {

namespace {

constexpr std::size_t kTnPrefixCap = 12;

void require_cp_overtaking(const ApModel& model) {
  for (std::size_t i = 0; i < model.num_classes(); ++i) {
    if (model.deceleration(i) > 0.0 && model.classes()[i].input.has_infinite_activity()) {
      throw unsupported_model_error(
          "exact first-passage mode requires compound Poisson overtaking classes; use grid mode");
    }
  }
}

bool overtaking_has_infinite_activity(const ApModel& model) {
  for (std::size_t i = 0; i < model.num_classes(); ++i) {
    if (model.deceleration(i) > 0.0 && model.classes()[i].input.has_infinite_activity()) {
      return true;
    }
  }
  return false;
}

void validate_config(const ApModel& model, const FptConfig& cfg, FptMode mode) {
  if (!(cfg.v >= 0.0)) throw validation_error("fpt config: v must be nonnegative");
  if (cfg.replications == 0) throw validation_error("fpt config: replications must be positive");
  if (!(cfg.horizon_multiplier >= 10.0)) {
    throw validation_error("fpt config: horizon multiplier must be >= 10");
  }
  if (mode == FptMode::grid) {
    if (!(cfg.grid_step > 0.0)) throw validation_error("fpt config: grid step must be positive");
    if (cfg.v > 0.0 && cfg.grid_step > cfg.v / 10.0) {
      throw validation_error("fpt config: grid step must satisfy h <= v/10");
    }
  }
  if (!(model.decelerated_load() < 1.0)) {
    throw validation_error("overtaking input has mean rate >= 1; T is not integrable");
  }
  if (mode == FptMode::exact) {
    require_cp_overtaking(model);
    if (!(model.decelerated_drift() < 1.0)) {
      throw validation_error("decelerated drift sum a_i c_i must be < 1 in exact mode");
    }
  }
}

// Number of strict increments of T_{n+1} = v + J_a(T_n) realized on a
// recorded pure-jump path, plus the leading T_n values. The recursion's limit
// coincides with the crossing time on the same path (checked by the tests).
void tn_recursion(const std::vector<JumpEvent>& jumps, double v, FptSample& out) {
  out.tn_prefix.clear();
  out.tn_prefix.push_back(v);
  std::vector<double> cum(jumps.size() + 1);
  cum[0] = 0.0;
  for (std::size_t j = 0; j < jumps.size(); ++j) cum[j + 1] = cum[j] + jumps[j].size;

  std::uint64_t k = 0;
  std::size_t m_prev = 0;
  double t_cur = v;
  for (;;) {
    std::size_t m = m_prev;
    while (m < jumps.size() && jumps[m].time <= t_cur) ++m;
    const double t_next = v + cum[m];
    if (out.tn_prefix.size() < kTnPrefixCap) out.tn_prefix.push_back(t_next);
    if (m == m_prev) break;
    ++k;
    m_prev = m;
    t_cur = t_next;
  }
  out.k = k;
  out.k_class = KClass::finite;
}

// T_n prefix on a path with a drift component; the recursion then has no
// finite fixed point, so only the leading values are materialized.
void tn_prefix_with_drift(const std::vector<JumpEvent>& jumps, double drift, double v,
                          FptSample& out) {
  out.tn_prefix.clear();
  out.tn_prefix.push_back(v);
  double t_cur = v;
  for (std::size_t step = 1; step < kTnPrefixCap; ++step) {
    double jump_sum = 0.0;
    for (const auto& jump : jumps) {
      if (jump.time <= t_cur) jump_sum += jump.size;
    }
    t_cur = v + drift * t_cur + jump_sum;
    out.tn_prefix.push_back(t_cur);
  }
}

}  // namespace

std::optional<double> first_passage_on_path(std::span<const JumpEvent> jumps, double drift_rate,
                                            double v, double horizon) {
  const double drain = 1.0 - drift_rate;
  if (!(drain > 0.0)) throw validation_error("first_passage_on_path: drift rate must be < 1");
  if (!(v >= 0.0)) throw validation_error("first_passage_on_path: v must be nonnegative");
  double remaining = v;
  double t = 0.0;
  for (const auto& jump : jumps) {
    const double dt = jump.time - t;
    if (remaining <= drain * dt) return t + remaining / drain;
    remaining -= drain * dt;
    t = jump.time;
    remaining += jump.size;
  }
  const double dt = horizon - t;
  if (remaining <= drain * dt) return t + remaining / drain;
  return std::nullopt;
}

OvertakingSampler::OvertakingSampler(const ApModel& model) {
  require_cp_overtaking(model);
  drift_ = model.decelerated_drift();
  if (!(drift_ < 1.0)) {
    throw validation_error("decelerated drift sum a_i c_i must be < 1 in exact mode");
  }
  for (std::size_t i = 0; i < model.num_classes(); ++i) {
    const double a_i = model.deceleration(i);
    if (a_i == 0.0) continue;
    for (const auto& comp : model.classes()[i].input.components()) {
      const auto& cp = std::get<CompoundPoisson>(comp);
      sources_.push_back({a_i * cp.rate, cp.jumps});
      total_rate_ += a_i * cp.rate;
    }
  }
}

double OvertakingSampler::sample_time(double v, Rng& rng) const {
  if (v == 0.0) return 0.0;
  const double drain = 1.0 - drift_;
  double remaining = v;
  double t = 0.0;
  if (total_rate_ > 0.0) {
    std::exponential_distribution<double> gap_dist(total_rate_);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (;;) {
      const double gap = gap_dist(rng);
      if (remaining <= drain * gap) break;
      remaining -= drain * gap;
      t += gap;
      double pick = unif(rng) * total_rate_;
      std::size_t idx = sources_.size() - 1;
      for (std::size_t s = 0; s < sources_.size(); ++s) {
        if (pick < sources_[s].rate) {
          idx = s;
          break;
        }
        pick -= sources_[s].rate;
      }
      remaining += sources_[idx].jumps.sample(rng);
    }
  }
  return t + remaining / drain;
}

double OvertakingSampler::sample_time_recording(double v, Rng& rng,
                                                std::vector<JumpEvent>& jumps) const {
  jumps.clear();
  if (v == 0.0) return 0.0;
  const double drain = 1.0 - drift_;
  double remaining = v;
  double t = 0.0;
  if (total_rate_ > 0.0) {
    std::exponential_distribution<double> gap_dist(total_rate_);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (;;) {
      const double gap = gap_dist(rng);
      if (remaining <= drain * gap) break;
      remaining -= drain * gap;
      t += gap;
      double pick = unif(rng) * total_rate_;
      std::size_t idx = sources_.size() - 1;
      for (std::size_t s = 0; s < sources_.size(); ++s) {
        if (pick < sources_[s].rate) {
          idx = s;
          break;
        }
        pick -= sources_[s].rate;
      }
      const double size = sources_[idx].jumps.sample(rng);
      remaining += size;
      jumps.push_back({t, size});
    }
  }
  return t + remaining / drain;
}

FptSample simulate_fpt_exact(const ApModel& model, const FptConfig& cfg, Rng& rng) {
  const OvertakingSampler sampler(model);
  FptSample out;
  if (cfg.v == 0.0) {
    out.tn_prefix = {0.0, 0.0};
    return out;
  }
  std::vector<JumpEvent> jumps;
  out.t = sampler.sample_time_recording(cfg.v, rng, jumps);
  if (sampler.drift() > 0.0) {
    // compound Poisson plus drift is not compound Poisson: the recursion
    // contracts geometrically but never reaches a fixed point
    out.k_class = KClass::infinite;
    tn_prefix_with_drift(jumps, sampler.drift(), cfg.v, out);
  } else {
    tn_recursion(jumps, cfg.v, out);
  }
  return out;
}

FptSample simulate_fpt_grid(const ApModel& model, const FptConfig& cfg, Rng& rng) {
  const double v = cfg.v;
  FptSample out;
  if (v == 0.0) {
    out.tn_prefix = {0.0, 0.0};
    return out;
  }
  out.k_class = (overtaking_has_infinite_activity(model) || model.decelerated_drift() > 0.0)
                    ? KClass::infinite
                    : KClass::unobserved;
  out.tn_prefix = {v};

  const double h = cfg.grid_step;
  const double mean_t = v / (1.0 - model.decelerated_load());
  const auto horizon_steps =
      static_cast<std::uint64_t>(std::ceil(cfg.horizon_multiplier * mean_t / h));

  double w = v;
  for (std::uint64_t step = 1; step <= horizon_steps; ++step) {
    double inc = 0.0;
    for (std::size_t i = 0; i < model.num_classes(); ++i) {
      const double a_i = model.deceleration(i);
      if (a_i > 0.0) inc += model.classes()[i].input.sample_increment(a_i * h, rng);
    }
    ++out.grid_steps;
    if (inc > 0.0) ++out.grid_positive_steps;
    const double w_prev = w;
    w += inc - h;
    if (w <= 0.0) {
      // no jump within the crossing step: drain w_prev at unit rate
      out.t = (static_cast<double>(step) - 1.0) * h + w_prev;
      return out;
    }
  }
  out.censored = true;
  out.t = static_cast<double>(horizon_steps) * h;
  return out;
}

std::vector<FptSample> run_fpt(const ApModel& model, const FptConfig& cfg, FptMode mode) {
  validate_config(model, cfg, mode);
  std::vector<FptSample> samples(cfg.replications);
  if (mode == FptMode::exact) {
    const OvertakingSampler sampler(model);
    parallel_for(cfg.replications, [&](std::size_t r) {
      Rng rng = make_stream(cfg.seed, r);
      FptSample& out = samples[r];
      if (cfg.v == 0.0) {
        out.tn_prefix = {0.0, 0.0};
        return;
      }
      std::vector<JumpEvent> jumps;
      out.t = sampler.sample_time_recording(cfg.v, rng, jumps);
      if (sampler.drift() > 0.0) {
        out.k_class = KClass::infinite;
        tn_prefix_with_drift(jumps, sampler.drift(), cfg.v, out);
      } else {
        tn_recursion(jumps, cfg.v, out);
      }
    });
  } else {
    parallel_for(cfg.replications, [&](std::size_t r) {
      Rng rng = make_stream(cfg.seed, r);
      samples[r] = simulate_fpt_grid(model, cfg, rng);
    });
  }
  return samples;
}

LstEstimate estimate_lst(std::span<const FptSample> samples, double alpha) {
  if (samples.empty()) throw validation_error("estimate_lst: empty sample set");
  if (!(alpha > 0.0)) throw validation_error("estimate_lst: alpha must be positive");
  std::vector<double> xs;
  xs.reserve(samples.size());
  bool censored = false;
  for (const auto& s : samples) {
    if (s.censored) {
      censored = true;
      xs.push_back(0.0);
    } else {
      xs.push_back(std::exp(-alpha * s.t));
    }
  }
  const Estimate e = mean_stderr(xs);
  return {e.value, e.std_error, censored};
}

KDistribution k_distribution(std::span<const FptSample> samples, const ApModel& model, double v) {
  if (samples.empty()) throw validation_error("k_distribution: empty sample set");
  KDistribution out;
  std::uint64_t k_max = 0;
  for (const auto& s : samples) {
    switch (s.k_class) {
      case KClass::finite:
        ++out.finite_count;
        k_max = std::max(k_max, s.k);
        break;
      case KClass::infinite:
        ++out.infinite_count;
        break;
      case KClass::unobserved:
        ++out.unobserved_count;
        break;
    }
  }
  if (out.finite_count == 0) return out;

  std::vector<std::size_t> counts(k_max + 1, 0);
  for (const auto& s : samples) {
    if (s.k_class == KClass::finite) ++counts[s.k];
  }
  out.pmf.resize(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    out.pmf[k] = static_cast<double>(counts[k]) / static_cast<double>(out.finite_count);
  }

  // Lambda_a = sum a_i lambda_i, rho_a = sum a_i rho_i; appendix bound
  // P(T_n - T_{n-1} = 0) >= exp(-Lambda_a rho_a^{n-1} v). The event
  // {T_n = T_{n-1}} equals {K <= n-1}: strict increments precede the fixed
  // point.
  double jump_rate_a = 0.0;
  for (std::size_t i = 0; i < model.num_classes(); ++i) {
    jump_rate_a += model.deceleration(i) * model.classes()[i].input.cp_rate();
  }
  const double rho_a = model.decelerated_load();
  const double n_total = static_cast<double>(out.finite_count);
  double cum = 0.0;       // #{K <= n-1}
  std::size_t below = 0;  // #{K < n-1}: samples already at the fixed point
  for (std::size_t n = 1; n <= k_max + 1; ++n) {
    cum += static_cast<double>(counts[n - 1]);
    const double p = cum / n_total;
    KDistribution::NoIncrementRow row;
    row.n = n;
    row.empirical = p;
    row.std_error = std::sqrt(std::max(p * (1.0 - p), 0.0) / n_total);
    row.lower_bound = std::exp(-jump_rate_a * std::pow(rho_a, static_cast<double>(n - 1)) * v);
    row.at_risk = out.finite_count - below;
    out.no_increment.push_back(row);
    below += counts[n - 1];
  }
  return out;
}

void write_fpt_csv(std::ostream& os, std::span<const FptSample> samples,
                   const std::vector<std::string>& meta) {
  for (const auto& line : meta) os << "# " << line << "\n";
  os << "replication,T,K,censored\n";
  char buf[64];
  for (std::size_t r = 0; r < samples.size(); ++r) {
    const auto& s = samples[r];
    std::snprintf(buf, sizeof(buf), "%.17g", s.t);
    os << r << ',' << buf << ',';
    switch (s.k_class) {
      case KClass::finite:
        os << s.k;
        break;
      case KClass::infinite:
        os << "inf";
        break;
      case KClass::unobserved:
        os << "na";
        break;
    }
    os << ',' << (s.censored ? 1 : 0) << "\n";
  }
}

}  // namespace apq
