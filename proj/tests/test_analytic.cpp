#include <doctest.h>

#include <cmath>

#include "apq/analytic.hpp"
#include "apq/errors.hpp"
#include "apq/stats.hpp"
#include "test_helpers.hpp"

using namespace apq;
using namespace apq::testing;

namespace {

ApModel unstable_model() {
  SubordinatorSpec heavy(0.0, {CompoundPoisson{1.2, JumpDist::exponential(1.0)}});
  SubordinatorSpec light(0.0, {CompoundPoisson{0.3, JumpDist::exponential(1.0)}});
  return ApModel({{heavy, 1.0}, {light, 2.0}});
}

}  // namespace

TEST_CASE("model validation") {
  SubordinatorSpec cp(0.0, {CompoundPoisson{0.3, JumpDist::exponential(1.0)}});
  CHECK_THROWS_AS(ApModel({{cp, 1.0}, {cp, 1.0}}), validation_error);  // tied minimal b
  CHECK_THROWS_AS(ApModel({}), validation_error);
  CHECK_THROWS_AS(ApModel({{cp, -1.0}}), validation_error);

  const ApModel m = m1();
  CHECK(m.tagged_index() == 1);
  CHECK(m.rho() == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(m.deceleration(0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(m.deceleration(1) == 0.0);
  CHECK(m.decelerated_load() == doctest::Approx(0.15).epsilon(1e-14));

  // construction succeeds for unstable models; analytic operations reject them
  const ApModel u = unstable_model();
  CHECK_FALSE(u.stable());
  CHECK_THROWS_AS(u.ensure_stable(), stability_error);
}

TEST_CASE("phi") {
  const ApModel m = m1();
  CHECK(phi(m, 0.0) == 0.0);
  CHECK(phi(m, 1.0) == doctest::Approx(0.7).epsilon(1e-14));
  // slope at zero is 1 - rho
  CHECK(phi(m, 1e-9) / 1e-9 == doctest::Approx(0.4).epsilon(1e-6));
  CHECK_THROWS_AS(phi(unstable_model(), 1.0), stability_error);
  CHECK_THROWS_AS(phi(m, -1.0), validation_error);

  // Monte Carlo cross-check: phi(1) = log E e^{-(J(1)-1)} for the total input
  SubordinatorSpec total(0.0, {CompoundPoisson{0.6, JumpDist::exponential(1.0)}});
  Rng rng = make_stream(20240811, 10);
  std::vector<double> vals(400000);
  for (auto& v : vals) v = std::exp(-(total.sample_increment(1.0, rng) - 1.0));
  const Estimate est = mean_stderr(vals);
  const double phi_mc = std::log(est.value);
  const double se_phi = est.std_error / est.value;
  CHECK(std::abs(phi_mc - phi(m, 1.0)) < 3.0 * se_phi);
}

TEST_CASE("workload LST (generalized PK)") {
  const ApModel m = m1();
  CHECK(w0_lst(m, 0.0).value == 1.0);
  // single CP class 0.5/Exp(1): phi(1) = 0.75, value 0.5/0.75
  const ApModel mm1 = fifo_cp(0.5);
  CHECK(w0_lst(mm1, 1.0).value == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  // atom at zero: alpha -> infinity limit is 1 - rho
  CHECK(w0_lst(mm1, 1e8).value == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("phi_a and its inverse") {
  const ApModel fifo = fifo_cp(0.5);
  for (double a : {0.0, 0.3, 1.0, 7.5}) {
    CHECK(phi_a(fifo, a) == a);  // no overtaking classes
    CHECK(phi_a_inverse(fifo, a) == doctest::Approx(a).epsilon(1e-12));
  }

  const ApModel ot = overtaker(0.4);  // a_0 = 0.5, eta_0(1) = 0.4 * 0.5
  CHECK(phi_a(ot, 0.0) == 0.0);
  CHECK(phi_a(ot, 1.0) == doctest::Approx(0.9).epsilon(1e-14));
  CHECK(phi_a_inverse(ot, 0.0) == 0.0);
  // forward-evaluation oracle: phi_a(1) = 0.9
  CHECK(phi_a_inverse(ot, 0.9) == doctest::Approx(1.0).epsilon(1e-12));

  // Monte Carlo cross-check: phi_a(1) = log E e^{-(J_a(1)-1)}, J_a(1) = J_1(a)
  SubordinatorSpec top(0.0, {CompoundPoisson{0.4, JumpDist::exponential(1.0)}});
  Rng rng = make_stream(20240811, 11);
  std::vector<double> vals(400000);
  for (auto& v : vals) v = std::exp(-(top.sample_increment(0.5, rng) - 1.0));
  const Estimate est = mean_stderr(vals);
  const double mc = std::log(est.value);
  CHECK(std::abs(mc - phi_a(ot, 1.0)) < 3.0 * est.std_error / est.value);
}

TEST_CASE("phi_a inverse round trip") {
  for (const ApModel& m : {m1(), m2(), overtaker(0.4)}) {
    for (double x : log_grid(1e-6, 1e3, 40)) {
      const double back = phi_a_inverse(m, phi_a(m, x));
      CHECK(std::abs(back - x) <= 1e-10 * std::max(1.0, x));
    }
  }
}

TEST_CASE("first passage LST") {
  const ApModel ot = overtaker(0.4);
  for (double a : {0.0, 0.5, 2.0}) CHECK(fpt_lst(ot, 0.0, a).value == 1.0);
  const ApModel fifo = fifo_cp(0.5);
  CHECK(fpt_lst(fifo, 1.0, 0.7).value == doctest::Approx(std::exp(-0.7)).epsilon(1e-12));
  CHECK(fpt_lst(ot, 1.0, 0.9).value == doctest::Approx(std::exp(-1.0)).epsilon(1e-10));
}

TEST_CASE("tagged particle waiting LST (theorem for class N)") {
  const ApModel m = m1();
  CHECK(wn_lst(m, 0.0).value == 1.0);

  // FIFO degeneracy: with all rates equal the wait is W0 + Ye
  const ApModel fifo = fifo_cp(0.5);
  for (double a : log_grid(1e-2, 1e2, 25)) {
    const double lhs = wn_lst(fifo, a).value;
    const double rhs = w0_lst(fifo, a).value * fifo.classes()[0].input.excess_lst(a);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));
  }

  // factorized product form at the shifted argument
  for (const ApModel& model : {m1(), m2()}) {
    const auto& tagged = model.classes()[model.tagged_index()].input;
    for (double a : log_grid(1e-2, 1e2, 25)) {
      const double s = phi_a_inverse(model, a);
      const double product = w0_lst(model, s).value * tagged.excess_lst(s);
      CHECK(wn_lst(model, a).value == doctest::Approx(product).epsilon(1e-14));
    }
  }
}

TEST_CASE("wn_lst monotone and convex") {
  const ApModel m = m1();
  std::vector<double> grid;
  for (int i = 0; i <= 60; ++i) grid.push_back(0.1 * i);
  std::vector<double> vals;
  for (double a : grid) vals.push_back(wn_lst(m, a).value);
  for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
    CHECK(vals[i + 1] <= vals[i] + 1e-12);
  }
  for (std::size_t i = 1; i + 1 < vals.size(); ++i) {
    CHECK(vals[i - 1] + vals[i + 1] - 2.0 * vals[i] >= -1e-12);
  }
}

TEST_CASE("mean versus derivative of the transform") {
  for (const ApModel& m : {m1(), m2()}) {
    const double mean = mean_waits(m).wn_particle;
    const auto fwd = [&](double h) { return (1.0 - wn_lst(m, h).value) / h; };
    const double d1 = fwd(1e-4), d2 = fwd(1e-5);
    const double richardson = (10.0 * d2 - d1) / 9.0;
    CHECK(std::abs(richardson - mean) / mean <= 1e-5);
  }
}

TEST_CASE("customer waiting LST in the M/G/1 case") {
  const ApModel m = m1();
  CHECK(w_customer_lst_mg1(m, 0.0).value == 1.0);

  // FIFO reduction to the plain PK customer formula
  const ApModel fifo = fifo_cp(0.5);
  for (double a : log_grid(1e-2, 1e2, 25)) {
    const double pk = 0.5 / (1.0 - 0.5 / (1.0 + a));  // rho = 0.5, X_e ~ Exp(1)
    CHECK(w_customer_lst_mg1(fifo, a).value == doctest::Approx(pk).epsilon(1e-14));
  }

  // second algebraic route: the batch head waits the first passage of W0, so
  // the customer LST equals w0_lst at the shifted argument
  for (double a : log_grid(1e-2, 1e2, 25)) {
    const double s = phi_a_inverse(m, a);
    CHECK(w_customer_lst_mg1(m, a).value ==
          doctest::Approx(w0_lst(m, s).value).epsilon(1e-13));
  }

  CHECK_THROWS_AS(w_customer_lst_mg1(m2(), 1.0), unsupported_model_error);
}

TEST_CASE("joint transform marginals") {
  const ApModel m = m1();
  const auto& tagged = m.classes()[m.tagged_index()].input;
  for (double a : {0.3, 1.0, 4.0}) {
    CHECK(joint_lst(m, a, 0.0) == doctest::Approx(wn_lst(m, a).value).epsilon(1e-14));
  }
  for (double b : {0.3, 1.0, 4.0}) {
    const double expected = w0_lst(m, b).value * tagged.excess_lst(b);
    CHECK(joint_lst(m, 0.0, b) == doctest::Approx(expected).epsilon(1e-14));
  }
  CHECK(joint_lst(m, 0.0, 0.0) == 1.0);
}

TEST_CASE("mean waits") {
  const MeanWaits mw = mean_waits(m1());
  CHECK(mw.w0 == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(mw.ye == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(mw.wn_particle == doctest::Approx(2.5 / 0.85).epsilon(1e-13));
  REQUIRE(mw.w_customer.has_value());
  CHECK(*mw.w_customer == doctest::Approx(1.5 / 0.85).epsilon(1e-13));

  // FIFO: no deceleration, the particle mean is w0 + ye
  const MeanWaits fifo = mean_waits(fifo_cp(0.5));
  CHECK(fifo.wn_particle == doctest::Approx(fifo.w0 + fifo.ye).epsilon(1e-14));

  // gamma-input model has no customer notion
  CHECK_FALSE(mean_waits(m2()).w_customer.has_value());

  CHECK_THROWS_AS(mean_waits(unstable_model()), stability_error);
}

TEST_CASE("service rate folds into the work scale") {
  SubordinatorSpec cp(0.0, {CompoundPoisson{0.3, JumpDist::exponential(1.0)}});
  const ApModel scaled({{cp, 2.0}, {cp, 1.0}}, 2.0);
  SubordinatorSpec half(0.0, {CompoundPoisson{0.3, JumpDist::exponential(0.5)}});
  const ApModel direct({{half, 2.0}, {half, 1.0}});
  CHECK(scaled.rho() == doctest::Approx(direct.rho()).epsilon(1e-14));
  for (double a : {0.5, 1.0, 2.0}) {
    CHECK(wn_lst(scaled, a).value == doctest::Approx(wn_lst(direct, a).value).epsilon(1e-14));
    CHECK(w_customer_lst_mg1(scaled, a).value ==
          doctest::Approx(w_customer_lst_mg1(direct, a).value).epsilon(1e-14));
  }
}
