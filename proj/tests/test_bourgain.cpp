#include "doctest.h"

#include "graphkdv/bourgain.hpp"

#include <random>

using namespace graphkdv;

namespace {

LineField random_field(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  LineField f;
  f.dy = 0.25;
  f.dt = 0.05;
  f.values.resize(64, 32);
  const double a = U(rng), b = U(rng), c = 0.5 + 0.5 * std::abs(U(rng));
  for (int i = 0; i < 64; ++i)
    for (int k = 0; k < 32; ++k) {
      const double y = (i - 32) * f.dy, t = (k - 16) * f.dt;
      f.values(i, k) = std::exp(-std::pow(y - a, 2) / c - t * t) * (1.0 + b * y);
    }
  return f;
}

}  // namespace

TEST_SUITE("bourgain") {

TEST_CASE("weights") {
  const BourgainWeights w;
  CHECK(w.b == doctest::Approx(7.0 / 16.0));
  CHECK(w.sigma == doctest::Approx(0.55));
  // on the dispersion curve and away from low frequencies the weight is 1
  CHECK(weight_nu(2.0, 8.0 + 2.0, w) == doctest::Approx(1.0));
  // low-frequency term switches on for |xi| <= 1
  CHECK(weight_nu(0.5, 0.125 + 0.5, w) == doctest::Approx(1.0 + std::pow(1.625, 0.55)));
  CHECK(weight_gamma(2.0, 10.0, w) == doctest::Approx(1.0));
  CHECK(weight_gamma(0.5, 0.625, w) == doctest::Approx(1.0 + std::pow(1.625, -0.45)));
  for (double xi : {-3.0, -0.9, 0.0, 1.7})
    for (double tau : {-50.0, 0.0, 3.0}) {
      CHECK(weight_nu(xi, tau, w) >= 1.0);
      CHECK(weight_gamma(xi, tau, w) > 0.0);
    }
  BourgainWeights bad;
  bad.b = 0.5;
  CHECK_THROWS(bad.validate());
  bad = BourgainWeights{};
  bad.sigma = 0.7;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("norms: zero, homogeneity, lower bound") {
  const BourgainWeights w;
  LineField z = random_field(1);
  z.values.setZero();
  CHECK(bourgain_norm(z, w) == 0.0);
  CHECK(dual_norm_Y(z, w) == 0.0);
  for (std::uint64_t s = 1; s <= 5; ++s) {
    const LineField f = random_field(s);
    LineField g = f;
    g.values *= -2.5;
    const double x = bourgain_norm(f, w);
    CHECK(bourgain_norm(g, w) == doctest::Approx(2.5 * x).epsilon(1e-12));
    CHECK(dual_norm_Y(g, w) == doctest::Approx(2.5 * dual_norm_Y(f, w)).epsilon(1e-12));
    CHECK(x >= spacetime_l2(f));
  }
}

TEST_CASE("discrete L2 normalization") {
  LineField f;
  f.dy = 0.5;
  f.dt = 0.25;
  f.values = Eigen::MatrixXd::Constant(16, 8, 3.0);
  // sum of |f|^2 dy dt = 9 * 16 * 8 * 0.125
  CHECK(spacetime_l2(f) == doctest::Approx(std::sqrt(9.0 * 16 * 8 * 0.125)).epsilon(1e-12));
}

TEST_CASE("probes are finite and reproducible") {
  ProbeOptions o;
  o.samples = 50;
  const ProbeReport a = estimate_probes(BourgainWeights{}, o);
  const ProbeReport b = estimate_probes(BourgainWeights{}, o);
  REQUIRE(a.probes.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a.probes[i].samples == 50);
    CHECK(std::isfinite(a.probes[i].max_ratio));
    CHECK(a.probes[i].max_ratio > 0.0);
    CHECK(a.probes[i].violations == 0);
    CHECK(a.probes[i].max_ratio == b.probes[i].max_ratio);
  }
  CHECK(a.psiT_predicted == doctest::Approx(0.5 - 0.55 - 1.0 / 3.0));
  CHECK(std::isfinite(a.psiT_slope));
}

}
