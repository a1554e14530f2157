#include "doctest.h"
#include "gsopt/relaxation.hpp"
#include "gsopt/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace gsopt;

namespace {

Cube<double> row_cube(std::vector<double> vals) {
  Cube<double> c(1, 1, (int)vals.size());
  for (int k = 0; k < (int)vals.size(); ++k) c(0, 0, k) = vals[(size_t)k];
  return c;
}

Cube<double> random_cube(int d0, int d1, int d2, uint64_t key) {
  Cube<double> c(d0, d1, d2);
  Rng rng(key);
  for (size_t i = 0; i < c.size(); ++i) c.data()[i] = rng.gaussian();
  return c;
}

}  // namespace

TEST_SUITE("relaxation") {

TEST_CASE("softmax probabilities on known logits") {
  Cube<double> p = probabilities(row_cube({0.0, 0.0}));
  CHECK(p(0, 0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p(0, 0, 1) == doctest::Approx(0.5).epsilon(1e-12));

  p = probabilities(row_cube({std::log(2.0), 0.0}));
  CHECK(p(0, 0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(p(0, 0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("probability and sample rows stay stochastic across temperatures") {
  Cube<double> theta = random_cube(4, 7, 5, rng_key(1, streams::kTestFn, 0, 0));
  Cube<double> p = probabilities(theta);
  Cube<double> g = random_cube(4, 7, 5, rng_key(1, streams::kTestFn, 0, 1));
  for (double tau : {1e-3, 0.1, 1.0, 10.0, 100.0}) {
    Cube<double> phat = gumbel_softmax_sample(p, g, tau);
    for (int b = 0; b < 4; ++b)
      for (int i = 0; i < 7; ++i) {
        double s = 0.0;
        for (int k = 0; k < 5; ++k) {
          CHECK(phat(b, i, k) >= 0.0);
          s += phat(b, i, k);
        }
        CHECK(std::abs(s - 1.0) < 1e-9);
      }
  }
}

TEST_CASE("temperature schedules hit their endpoints and midpoints") {
  TemperatureSchedule exp_s{20.0, 1.0, 3, TemperatureSchedule::Mode::exponential};
  CHECK(temperature_at(exp_s, 0) == doctest::Approx(20.0));
  CHECK(temperature_at(exp_s, 1) == doctest::Approx(std::sqrt(20.0)).epsilon(1e-12));
  CHECK(temperature_at(exp_s, 2) == doctest::Approx(1.0));
  CHECK(temperature_at(exp_s, -5) == doctest::Approx(20.0));   // clamps
  CHECK(temperature_at(exp_s, 99) == doctest::Approx(1.0));

  TemperatureSchedule lin{20.0, 1.0, 3, TemperatureSchedule::Mode::linear};
  CHECK(temperature_at(lin, 1) == doctest::Approx(10.5));

  TemperatureSchedule con{4.0, 4.0, 1000, TemperatureSchedule::Mode::constant};
  CHECK(temperature_at(con, 0) == doctest::Approx(4.0));
  CHECK(temperature_at(con, 999) == doctest::Approx(4.0));

  TemperatureSchedule bad{1.0, 2.0, 10, TemperatureSchedule::Mode::linear};
  CHECK_THROWS_AS(temperature_at(bad, 0), std::runtime_error);
  TemperatureSchedule zero{1.0, 0.0, 10, TemperatureSchedule::Mode::linear};
  CHECK_THROWS_AS(temperature_at(zero, 0), std::runtime_error);
}

TEST_CASE("zero noise at unit temperature reproduces the input distribution") {
  Cube<double> p = row_cube({0.3, 0.7});
  Cube<double> g(1, 1, 2, 0.0);
  Cube<double> phat = gumbel_softmax_sample(p, g, 1.0);
  CHECK(phat(0, 0, 0) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(phat(0, 0, 1) == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("sampling and gradients are invariant to uniform logit shifts") {
  Cube<double> theta = random_cube(2, 3, 4, rng_key(2, streams::kTestFn, 0, 0));
  Cube<double> shifted = theta;
  for (size_t i = 0; i < shifted.size(); ++i) shifted.data()[i] += 5.0;

  Cube<double> g = random_cube(2, 3, 4, rng_key(2, streams::kTestFn, 0, 1));
  Cube<double> dE = random_cube(2, 3, 4, rng_key(2, streams::kTestFn, 0, 2));

  Cube<double> p1 = probabilities(theta);
  Cube<double> p2 = probabilities(shifted);
  for (size_t i = 0; i < p1.size(); ++i)
    CHECK(p1.data()[i] == doctest::Approx(p2.data()[i]).epsilon(1e-12));

  Cube<double> grad1 = backprop_theta(dE, p1, g, 0.7, theta);
  Cube<double> grad2 = backprop_theta(dE, p2, g, 0.7, shifted);
  for (size_t i = 0; i < grad1.size(); ++i)
    CHECK(grad1.data()[i] == doctest::Approx(grad2.data()[i]).epsilon(1e-9));
}

TEST_CASE("non-positive temperatures are rejected") {
  Cube<double> p = row_cube({0.5, 0.5});
  Cube<double> g(1, 1, 2, 0.0);
  CHECK_THROWS_AS(gumbel_softmax_sample(p, g, 0.0), std::runtime_error);
  CHECK_THROWS_AS(gumbel_softmax_sample(p, g, -1.0), std::runtime_error);
  Cube<double> dE(1, 1, 2, 0.0);
  CHECK_THROWS_AS(backprop_theta(dE, p, g, 0.0, p), std::runtime_error);
}

TEST_CASE("tiny temperatures produce near one-hot samples") {
  Cube<double> theta = random_cube(3, 5, 4, rng_key(3, streams::kTestFn, 0, 0));
  Cube<double> p = probabilities(theta);
  Cube<double> g = random_cube(3, 5, 4, rng_key(3, streams::kTestFn, 0, 1));
  Cube<double> phat = gumbel_softmax_sample(p, g, 1e-3);
  for (int b = 0; b < 3; ++b)
    for (int i = 0; i < 5; ++i) {
      double mx = 0.0;
      for (int k = 0; k < 4; ++k) mx = std::max(mx, phat(b, i, k));
      CHECK(mx > 0.999);
    }
}

TEST_CASE("argmax of a sample does not depend on temperature") {
  Cube<double> theta = random_cube(2, 20, 3, rng_key(4, streams::kTestFn, 0, 0));
  Cube<double> p = probabilities(theta);
  Cube<double> g = random_cube(2, 20, 3, rng_key(4, streams::kTestFn, 0, 1));
  Mat<int> cold = hard_decode(gumbel_softmax_sample(p, g, 0.1));
  Mat<int> hot = hard_decode(gumbel_softmax_sample(p, g, 10.0));
  CHECK(cold == hot);
}

TEST_CASE("hard decode picks the max and breaks ties low") {
  Mat<int> lab = hard_decode(row_cube({0.2, 0.5, 0.3}));
  CHECK(lab(0, 0) == 1);
  lab = hard_decode(row_cube({0.4, 0.4, 0.2}));
  CHECK(lab(0, 0) == 0);
}

TEST_CASE("empirical sampling frequencies follow the categorical weights") {
  Cube<double> p = row_cube({0.3, 0.7});
  Cube<double> g(1, 1, 2);
  Rng rng(rng_key(7, streams::kGumbel, 0, 0));
  const int draws = 100000;
  int ones = 0;
  Cube<double> phat;
  Mat<int> lab;
  for (int t = 0; t < draws; ++t) {
    gumbel_noise(g, rng);
    gumbel_softmax_sample(p, g, 0.5, phat);
    hard_decode(phat, lab);
    ones += lab(0, 0);
  }
  CHECK(std::abs(ones / (double)draws - 0.7) < 0.01);
}

TEST_CASE("chi-square goodness of fit for two and five states") {
  auto chi_square = [](const Cube<double>& p, uint64_t key, int draws) {
    int k = p.dim2();
    std::vector<long long> counts((size_t)k, 0);
    Cube<double> g(1, 1, k), phat;
    Mat<int> lab;
    Rng rng(key);
    for (int t = 0; t < draws; ++t) {
      gumbel_noise(g, rng);
      gumbel_softmax_sample(p, g, 1.0, phat);
      hard_decode(phat, lab);
      ++counts[(size_t)lab(0, 0)];
    }
    double stat = 0.0;
    for (int j = 0; j < k; ++j) {
      double expected = p(0, 0, j) * draws;
      double d = counts[(size_t)j] - expected;
      stat += d * d / expected;
    }
    return stat;
  };

  Cube<double> p2 = row_cube({0.3, 0.7});
  // critical value at significance 0.01, 1 degree of freedom
  CHECK(chi_square(p2, rng_key(12, streams::kGumbel, 0, 0), 100000) < 6.635);

  // a fixed "random" simplex point with five states: Dirichlet(1,..,1) draw
  Rng simplex(rng_key(13, streams::kTestFn, 0, 0));
  Cube<double> p5(1, 1, 5);
  double z = 0.0;
  for (int j = 0; j < 5; ++j) {
    p5(0, 0, j) = -std::log(simplex.uniform01());
    z += p5(0, 0, j);
  }
  for (int j = 0; j < 5; ++j) p5(0, 0, j) /= z;
  // critical value at significance 0.01, 4 degrees of freedom
  CHECK(chi_square(p5, rng_key(14, streams::kGumbel, 0, 0), 100000) < 13.277);
}

TEST_CASE("gradient of zero upstream signal is zero") {
  Cube<double> theta = random_cube(2, 4, 3, rng_key(8, streams::kTestFn, 0, 0));
  Cube<double> p = probabilities(theta);
  Cube<double> g = random_cube(2, 4, 3, rng_key(8, streams::kTestFn, 0, 1));
  Cube<double> dE(2, 4, 3, 0.0);
  Cube<double> grad = backprop_theta(dE, p, g, 0.5, theta);
  for (size_t i = 0; i < grad.size(); ++i) CHECK(grad.data()[i] == 0.0);
}

TEST_CASE("binary gradients are antisymmetric across the two states") {
  Cube<double> theta = random_cube(3, 6, 2, rng_key(9, streams::kTestFn, 0, 0));
  Cube<double> p = probabilities(theta);
  Cube<double> g = random_cube(3, 6, 2, rng_key(9, streams::kTestFn, 0, 1));
  Cube<double> dE = random_cube(3, 6, 2, rng_key(9, streams::kTestFn, 0, 2));
  Cube<double> grad = backprop_theta(dE, p, g, 0.7, theta);
  for (int b = 0; b < 3; ++b)
    for (int i = 0; i < 6; ++i)
      CHECK(grad(b, i, 0) == doctest::Approx(-grad(b, i, 1)).epsilon(1e-9));
}

TEST_CASE("analytic gradient matches central finite differences") {
  const int d0 = 4, d1 = 6, d2 = 3;
  Cube<double> theta = random_cube(d0, d1, d2, rng_key(10, streams::kTestFn, 0, 0));
  Cube<double> g = random_cube(d0, d1, d2, rng_key(10, streams::kTestFn, 0, 1));
  Cube<double> w = random_cube(d0, d1, d2, rng_key(10, streams::kTestFn, 0, 2));
  const double tau = 0.7;

  auto loss = [&](const Cube<double>& th) {
    Cube<double> phat = gumbel_softmax_sample(probabilities(th), g, tau);
    double s = 0.0;
    for (size_t i = 0; i < phat.size(); ++i) s += w.data()[i] * phat.data()[i];
    return s;
  };

  Cube<double> dE = w;  // dL/dphat is just the weights
  Cube<double> grad = backprop_theta(dE, probabilities(theta), g, tau, theta);

  const double h = 1e-5;
  for (size_t i = 0; i < theta.size(); ++i) {
    Cube<double> t2 = theta;
    t2.data()[i] = theta.data()[i] + h;
    double up = loss(t2);
    t2.data()[i] = theta.data()[i] - h;
    double dn = loss(t2);
    double fd = (up - dn) / (2.0 * h);
    CHECK(grad.data()[i] == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("noise fill and population init are deterministic") {
  Cube<double> g1(2, 3, 2), g2(2, 3, 2);
  Rng r1(rng_key(11, streams::kGumbel, 0, 0));
  Rng r2(rng_key(11, streams::kGumbel, 0, 0));
  gumbel_noise(g1, r1);
  gumbel_noise(g2, r2);
  CHECK(g1 == g2);

  ThetaPopulation a = ThetaPopulation::random_init(3, 5, 2, 42);
  ThetaPopulation b = ThetaPopulation::random_init(3, 5, 2, 42);
  CHECK(a.values == b.values);
  CHECK(a.values.dim0() == 3);
  CHECK(a.values.dim1() == 5);
  CHECK(a.values.dim2() == 2);

  // replica streams are keyed individually, not drawn sequentially
  Rng direct(rng_key(42, streams::kThetaInit, 1));
  CHECK(a.values(1, 0, 0) == doctest::Approx(direct.gaussian()).epsilon(1e-15));

  CHECK_THROWS_AS(ThetaPopulation::random_init(1, 1, 1, 0), std::runtime_error);
}

}  // suite
