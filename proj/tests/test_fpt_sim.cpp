#include <doctest.h>

#include <cmath>
#include <sstream>

#include "apq/analytic.hpp"
#include "apq/errors.hpp"
#include "apq/fpt_sim.hpp"
#include "apq/stats.hpp"
#include "test_helpers.hpp"

using namespace apq;
using namespace apq::testing;

namespace {

ApModel drift_overtaker() {
  SubordinatorSpec drift_in(1.0, {});
  SubordinatorSpec tagged(0.0, {CompoundPoisson{0.2, JumpDist::exponential(1.0)}});
  return ApModel({{drift_in, 2.0}, {tagged, 1.0}});  // a_0 = 0.5, decel drift 0.5
}

ApModel cp_plus_drift_overtaker() {
  SubordinatorSpec mixed(0.3, {CompoundPoisson{0.4, JumpDist::exponential(1.0)}});
  SubordinatorSpec tagged(0.0, {CompoundPoisson{0.2, JumpDist::exponential(1.0)}});
  return ApModel({{mixed, 2.0}, {tagged, 1.0}});
}

}  // namespace

TEST_CASE("v = 0 is an immediate passage") {
  FptConfig cfg;
  cfg.v = 0.0;
  cfg.replications = 16;
  cfg.seed = 7;
  for (auto mode : {FptMode::exact, FptMode::grid}) {
    for (const auto& s : run_fpt(overtaker(0.4), cfg, mode)) {
      CHECK(s.t == 0.0);
      CHECK(s.k_class == KClass::finite);
      CHECK(s.k == 0);
      CHECK_FALSE(s.censored);
    }
  }
}

TEST_CASE("exact mode against the overtaking formulas") {
  const ApModel ot = overtaker(0.4);  // a lambda = 0.2
  FptConfig cfg;
  cfg.v = 1.0;
  cfg.replications = 1000000;
  cfg.seed = 20240811;
  const auto samples = run_fpt(ot, cfg, FptMode::exact);

  std::size_t k0 = 0;
  std::vector<double> ts;
  ts.reserve(samples.size());
  for (const auto& s : samples) {
    REQUIRE(s.k_class == KClass::finite);
    REQUIRE_FALSE(s.censored);
    CHECK(s.t >= cfg.v);
    if (s.k == 0) ++k0;
    ts.push_back(s.t);
  }

  // P(no overtaking at all) = e^{-lambda a v}
  const double p0 = static_cast<double>(k0) / static_cast<double>(samples.size());
  const double p0_expected = std::exp(-0.2);
  const double p0_se =
      std::sqrt(p0_expected * (1.0 - p0_expected) / static_cast<double>(samples.size()));
  CHECK(std::abs(p0 - p0_expected) < 3.0 * p0_se);

  // E T = v / (1 - a rho_1)
  const Estimate mt = mean_stderr(ts);
  CHECK(std::abs(mt.value - 1.25) < 3.0 * mt.std_error);

  // E e^{-0.9 T} = e^{-phi_a^{-1}(0.9)} = e^{-1}
  const LstEstimate lst = estimate_lst(samples, 0.9);
  CHECK_FALSE(lst.lower_bound);
  CHECK(std::abs(lst.estimate - std::exp(-1.0)) < 3.0 * lst.std_error);

  SUBCASE("T_n prefixes are nondecreasing and end at the passage time") {
    for (std::size_t i = 0; i < 2000; ++i) {
      const auto& s = samples[i];
      for (std::size_t j = 1; j < s.tn_prefix.size(); ++j) {
        CHECK(s.tn_prefix[j] >= s.tn_prefix[j - 1]);
      }
      if (s.k + 1 < s.tn_prefix.size()) {
        CHECK(std::abs(s.tn_prefix[s.k + 1] - s.t) <= 1e-9 * std::max(1.0, s.t));
      }
    }
  }

  SUBCASE("K distribution and the no-increment bound") {
    const auto kd = k_distribution(samples, ot, cfg.v);
    CHECK(kd.finite_count == samples.size());
    CHECK(kd.infinite_count == 0);
    double total = 0.0;
    for (double p : kd.pmf) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE_FALSE(kd.no_increment.empty());
    const auto& first = kd.no_increment.front();
    CHECK(first.n == 1);
    CHECK(std::abs(first.empirical - p0_expected) < 3.0 * first.std_error);
    for (const auto& row : kd.no_increment) {
      if (row.at_risk < 1000) break;
      CHECK(row.empirical >= row.lower_bound - 3.0 * row.std_error);
    }
  }
}

TEST_CASE("estimate_lst degenerate cases") {
  FptConfig cfg;
  cfg.v = 0.0;
  cfg.replications = 100;
  cfg.seed = 3;
  const auto zeros = run_fpt(overtaker(0.4), cfg, FptMode::exact);
  const auto est0 = estimate_lst(zeros, 1.0);
  CHECK(est0.estimate == 1.0);
  CHECK(est0.std_error == 0.0);

  // no overtaking classes: T = v deterministically
  cfg.v = 1.0;
  const auto det = run_fpt(fifo_cp(0.5), cfg, FptMode::exact);
  const auto est1 = estimate_lst(det, 1.0);
  CHECK(est1.estimate == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(est1.std_error == 0.0);
}

TEST_CASE("grid mode on a pure-drift overtaker") {
  FptConfig cfg;
  cfg.v = 1.0;
  cfg.replications = 4;
  cfg.grid_step = 0.05;
  cfg.seed = 5;
  for (const auto& s : run_fpt(drift_overtaker(), cfg, FptMode::grid)) {
    CHECK_FALSE(s.censored);
    CHECK(std::abs(s.t - 2.0) <= cfg.grid_step);  // T = v / (1 - 0.5)
    CHECK(s.k_class == KClass::infinite);
  }
}

TEST_CASE("grid mode with a gamma overtaker") {
  const ApModel m = m2();  // Gamma(0.4, 1) overtaker, a = 0.5, sum a rho = 0.2
  FptConfig cfg;
  cfg.v = 1.0;
  cfg.replications = 40000;
  cfg.grid_step = 1e-3;
  cfg.seed = 20240811;
  const auto samples = run_fpt(m, cfg, FptMode::grid);

  std::vector<double> ts;
  std::uint64_t steps = 0, positive = 0;
  for (const auto& s : samples) {
    REQUIRE_FALSE(s.censored);
    CHECK(s.k_class == KClass::infinite);
    ts.push_back(s.t);
    steps += s.grid_steps;
    positive += s.grid_positive_steps;
  }
  // infinite activity: every grid increment is strictly positive
  CHECK(steps == positive);

  // O(h) bias coefficient estimated by halving h
  FptConfig half = cfg;
  half.grid_step = 5e-4;
  half.replications = 20000;
  half.seed = 20240812;
  const auto samples_half = run_fpt(m, half, FptMode::grid);
  std::vector<double> ts_half;
  for (const auto& s : samples_half) ts_half.push_back(s.t);

  const Estimate mt = mean_stderr(ts);
  const Estimate mt_half = mean_stderr(ts_half);
  const double bias_per_h =
      std::abs(mt.value - mt_half.value) / (cfg.grid_step - half.grid_step);
  const double allowance = bias_per_h * cfg.grid_step + 3.0 * mt.std_error;
  CHECK(std::abs(mt.value - 1.25) <= allowance + 3.0 * mt_half.std_error);

  // transform against the analytic oracle, same allowance logic
  const auto lst = estimate_lst(samples, 1.0);
  const auto lst_half = estimate_lst(samples_half, 1.0);
  const double target = fpt_lst(m, 1.0, 1.0).value;
  const double lst_bias_per_h =
      std::abs(lst.estimate - lst_half.estimate) / (cfg.grid_step - half.grid_step);
  CHECK(std::abs(lst.estimate - target) <=
        3.0 * lst.std_error + 3.0 * lst_half.std_error + lst_bias_per_h * cfg.grid_step);
}

TEST_CASE("exact and grid modes agree for a compound Poisson overtaker") {
  const ApModel ot = overtaker(0.4);
  FptConfig exact_cfg;
  exact_cfg.v = 1.0;
  exact_cfg.replications = 200000;
  exact_cfg.seed = 99;
  const auto exact_samples = run_fpt(ot, exact_cfg, FptMode::exact);

  FptConfig grid_cfg = exact_cfg;
  grid_cfg.replications = 40000;
  grid_cfg.grid_step = 0.01;
  const auto grid_samples = run_fpt(ot, grid_cfg, FptMode::grid);

  FptConfig grid_half = grid_cfg;
  grid_half.grid_step = 0.005;
  grid_half.seed = 100;
  const auto grid_half_samples = run_fpt(ot, grid_half, FptMode::grid);

  const auto e = estimate_lst(exact_samples, 1.0);
  const auto g = estimate_lst(grid_samples, 1.0);
  const auto gh = estimate_lst(grid_half_samples, 1.0);
  const double c_per_h = std::abs(g.estimate - gh.estimate) / (0.01 - 0.005);
  CHECK(std::abs(e.estimate - g.estimate) <=
        3.0 * std::sqrt(e.std_error * e.std_error + g.std_error * g.std_error) +
            c_per_h * grid_cfg.grid_step);

  // grid K on a compound Poisson path is unobservable, not guessed
  CHECK(grid_samples.front().k_class == KClass::unobserved);
}

TEST_CASE("censoring at the horizon") {
  const ApModel heavy = overtaker(1.8);  // sum a rho = 0.9, E T = 10
  FptConfig cfg;
  cfg.v = 1.0;
  cfg.replications = 10000;
  cfg.grid_step = 0.1;
  cfg.horizon_multiplier = 10.0;
  cfg.seed = 20240811;
  const auto samples = run_fpt(heavy, cfg, FptMode::grid);
  std::size_t censored = 0;
  for (const auto& s : samples) {
    if (s.censored) {
      ++censored;
      CHECK(s.t == doctest::Approx(cfg.horizon_multiplier * 10.0).epsilon(1e-9));
    }
  }
  CHECK(censored > 0);  // the heavy-tail run must trip the horizon
  const auto est = estimate_lst(samples, 1.0);
  CHECK(est.lower_bound);
}

TEST_CASE("T is monotone in v on a coupled path") {
  const OvertakingSampler sampler(overtaker(0.4));
  Rng rng = make_stream(20240811, 55);
  std::vector<JumpEvent> jumps;
  for (int rep = 0; rep < 200; ++rep) {
    const double horizon_v = 4.0;
    const double t_big = sampler.sample_time_recording(horizon_v, rng, jumps);
    double prev = 0.0;
    for (double v : {0.5, 1.0, 2.0, 3.0, 4.0}) {
      const auto t = first_passage_on_path(jumps, 0.0, v, t_big);
      REQUIRE(t.has_value());
      CHECK(*t >= prev);
      CHECK(*t <= t_big * (1.0 + 1e-12));
      prev = *t;
    }
    CHECK(prev == doctest::Approx(t_big).epsilon(1e-12));
  }
}

TEST_CASE("exact mode classifies drifted overtaking as K infinite") {
  FptConfig cfg;
  cfg.v = 1.0;
  cfg.replications = 50;
  cfg.seed = 17;
  for (const auto& s : run_fpt(cp_plus_drift_overtaker(), cfg, FptMode::exact)) {
    CHECK(s.k_class == KClass::infinite);
    for (std::size_t j = 1; j < s.tn_prefix.size(); ++j) {
      CHECK(s.tn_prefix[j] >= s.tn_prefix[j - 1]);
    }
  }
}

TEST_CASE("configuration validation") {
  FptConfig cfg;
  cfg.v = -1.0;
  CHECK_THROWS_AS(run_fpt(overtaker(0.4), cfg, FptMode::exact), validation_error);
  cfg.v = 1.0;
  cfg.replications = 0;
  CHECK_THROWS_AS(run_fpt(overtaker(0.4), cfg, FptMode::exact), validation_error);
  cfg.replications = 1;
  cfg.horizon_multiplier = 5.0;
  CHECK_THROWS_AS(run_fpt(overtaker(0.4), cfg, FptMode::grid), validation_error);
  cfg.horizon_multiplier = 50.0;
  cfg.grid_step = 0.2;  // > v/10
  CHECK_THROWS_AS(run_fpt(overtaker(0.4), cfg, FptMode::grid), validation_error);
  cfg.grid_step = 0.05;
  CHECK_THROWS_AS(run_fpt(m2(), cfg, FptMode::exact), unsupported_model_error);
  CHECK_NOTHROW(run_fpt(m2(), cfg, FptMode::grid));
}

TEST_CASE("sample CSV dump") {
  FptConfig cfg;
  cfg.v = 1.0;
  cfg.replications = 4;
  cfg.seed = 9;
  const auto samples = run_fpt(overtaker(0.4), cfg, FptMode::exact);
  std::ostringstream a, b;
  write_fpt_csv(a, samples, {"model_hash=deadbeef", "artifact_version=test"});
  write_fpt_csv(b, samples, {"model_hash=deadbeef", "artifact_version=test"});
  CHECK(a.str() == b.str());
  CHECK(a.str().find("# model_hash=deadbeef") == 0);
  CHECK(a.str().find("replication,T,K,censored") != std::string::npos);
}
