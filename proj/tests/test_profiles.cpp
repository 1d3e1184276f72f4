#include "doctest.h"
#include "oracles.hpp"

#include "graphkdv/profiles.hpp"

using namespace graphkdv;

TEST_SUITE("profiles") {

TEST_CASE("solitary wave values") {
  CHECK(solitary_wave(2.0, 0.0) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(solitary_wave(2.0, 41.0) < 1e-12);
  CHECK(solitary_wave(2.0, -41.0) < 1e-12);
  const double sech1 = 1.0 / std::cosh(1.0);
  CHECK(std::abs(solitary_wave(5.0, 1.0) - 6.0 * sech1 * sech1) < 1e-14);
  CHECK_THROWS(solitary_wave(1.0, 0.0));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS(ProfileParams(1.0, -1.0, 2.0));  // omega == Z^2/4
  CHECK_THROWS(ProfileParams(1.0, -1.0, 0.0));
  CHECK_THROWS(ProfileParams(-1.0, -1.0, 1.0));
  CHECK_THROWS(ProfileParams(1.0, 1.0, 1.0));
  CHECK(ProfileParams(1.0, -1.0, 1.0).kind() == ProfileKind::Bump);
  CHECK(ProfileParams(1.0, -1.0, -1.0).kind() == ProfileKind::Tail);
}

TEST_CASE("half soliton closed form") {
  for (double Z : {1.0, -1.0, 0.3, -1.9}) {
    const ProfileParams p(1.0, -1.0, Z);
    // sech^2(artanh t) = 1 - t^2
    CHECK(std::abs(profile_vertex_value(p) - 1.5 * (1.0 - Z * Z / 4.0)) < 1e-14);
    for (double x : {0.0, 0.4, 2.5, 11.0}) {
      CHECK(std::abs(half_soliton(p, Side::plus, x) - oracle::half_soliton_plus(1.0, Z, x)) < 1e-14);
      CHECK(half_soliton(p, Side::minus, -x) == half_soliton(p, Side::plus, x));
    }
    CHECK(half_soliton(p, Side::plus, default_truncation_length(p)) < 1e-12);
    CHECK_THROWS(half_soliton(p, Side::plus, -0.1));
    CHECK_THROWS(half_soliton(p, Side::minus, 0.1));
  }
  const ProfileParams bump(1.0, -1.0, 1.0), tail(1.0, -1.0, -1.0);
  CHECK(profile_vertex_value(bump) == doctest::Approx(1.125).epsilon(1e-15));
  CHECK(profile_vertex_value(tail) == doctest::Approx(1.125).epsilon(1e-15));
  const double xmax = 2.0 * std::atanh(0.5);
  CHECK(std::abs(half_soliton(bump, Side::plus, xmax) - 1.5) < 1e-14);
  CHECK(profile_max_value(bump) == doctest::Approx(1.5));
  // tail decreases monotonically, bump rises then falls
  double prev = half_soliton(tail, Side::plus, 0.0);
  for (int j = 1; j < 400; ++j) {
    const double v = half_soliton(tail, Side::plus, 0.05 * j);
    CHECK(v < prev);
    prev = v;
  }
  CHECK(half_soliton(bump, Side::plus, 0.5) > half_soliton(bump, Side::plus, 0.0));
}

TEST_CASE("amplitude bound, equality only for bumps") {
  for (double Z : {1.5, 0.5, -0.5, -1.5}) {
    const ProfileParams p(2.0, -3.0, Z);
    double mx = 0.0;
    for (int j = 0; j <= 4000; ++j) {
      const double v = half_soliton(p, Side::plus, 0.005 * j);
      CHECK(v > 0.0);
      CHECK(v <= 4.5 + 1e-14);
      mx = std::max(mx, v);
    }
    // sampled peak sits within half a grid step of the crest
    if (Z > 0) CHECK(std::abs(mx - 4.5) < 1e-4);
    if (Z > 0) CHECK(std::abs(profile_max_value(p) - 4.5) < 1e-14);
    else CHECK(mx < 4.5 - 1e-3);
  }
}

TEST_CASE("derivatives of the plus profile match finite differences") {
  const ProfileParams p(1.3, -0.7, 0.4);
  for (double x : {0.0, 0.8, 3.0}) {
    const double e = 1e-4;
    const double xc = x + 2 * e;
    for (int d = 1; d <= 3; ++d) {
      const double fd = (half_soliton_derivative(p, xc + e, d - 1) - half_soliton_derivative(p, xc - e, d - 1)) / (2 * e);
      CHECK(std::abs(half_soliton_derivative(p, xc, d) - fd) < 1e-6);
    }
  }
}

TEST_CASE("vertex identities of U_Z") {
  for (double Z : {1.0, -1.0, 0.7}) {
    const ProfileParams p(1.0, -1.0, Z);
    const double u0 = half_soliton_derivative(p, 0.0, 0);
    CHECK(std::abs(half_soliton_derivative(p, 0.0, 1) - 0.5 * Z * u0) < 1e-13);
    const GraphFunction u = build_UZ(p, GraphGrid::with_step(40.0, 0.01), StarGraph(2, 2));
    CHECK(check_domain_AZ(u, Z, 1e-6).ok);
    CHECK(u.minus[0] == u.minus[1]);
    CHECK(u.plus[0] == u.plus[1]);
  }
}

TEST_CASE("elliptic residual") {
  const GraphFunction zero(StarGraph(1, 1), GraphGrid::with_step(5.0, 0.1));
  CHECK(elliptic_residual(zero, 1.0, -1.0).max_abs() == 0.0);
  const GraphFunction kappa(StarGraph(1, 1), GraphGrid::with_step(5.0, 0.1), 0.3);
  const GraphFunction r = elliptic_residual(kappa, 1.0, -1.0);
  CHECK(std::abs(r.plus[0][10] - (-0.3 + 0.09)) < 1e-15);

  const ProfileParams p(1.0, -1.0, 1.0);
  std::vector<double> hs = {0.02, 0.01, 0.005}, res;
  for (double h : hs) res.push_back(elliptic_residual(build_UZ(p, GraphGrid::with_step(40.0, h), StarGraph(1, 1)), 1.0, -1.0).max_abs());
  const double slope = oracle::loglog_slope(hs, res);
  CHECK(slope > 1.8);
  CHECK(slope < 2.2);
}

}
