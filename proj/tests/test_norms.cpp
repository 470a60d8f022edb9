#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "ffde/flow.hpp"
#include "ffde/norms.hpp"

using namespace ffde;

namespace {

Field random_field(GridPtr g, std::mt19937_64& rng, bool nonneg = false) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(g->size());
  for (int i = 0; i < v.size(); ++i) v[i] = nonneg ? std::abs(normal(rng)) : normal(rng);
  return Field(g, v);
}

}  // namespace

TEST_CASE("lp norm basics") {
  auto g = make_grid(1, 3);
  CHECK(lp_norm(zero_field(g), 1.0) == 0.0);
  CHECK(lp_norm(constant_field(g, 1.0), 1.0) == doctest::Approx(0.75));
  CHECK(lp_norm(constant_field(g, -2.0), infinity) == doctest::Approx(2.0));
  CHECK_THROWS_AS(lp_norm(constant_field(g, 1.0), 0.5), Error);
}

TEST_CASE("holder relation between L2 and Linf") {
  auto g = make_grid(1, 21);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    Field f = random_field(g, rng);
    double vol = g->quad_weight * g->size();
    CHECK(lp_norm(f, 2.0) <= std::sqrt(vol) * lp_norm(f, infinity) * (1 + 1e-12));
  }
}

TEST_CASE("lp norm ladder after measure normalization") {
  auto g = make_grid(1, 17);
  std::mt19937_64 rng(4);
  double vol = g->quad_weight * g->size();
  for (int t = 0; t < 20; ++t) {
    Field f = random_field(g, rng);
    double prev = 0.0;
    for (double p : {1.0, 1.5, 2.0, 3.0, 6.0}) {
      double val = lp_norm(f, p) / std::pow(vol, 1.0 / p);
      CHECK(val >= prev * (1 - 1e-12));
      prev = val;
    }
  }
}

TEST_CASE("weighted norm basics") {
  auto g = make_grid(1, 8);
  auto bundle = make_bundle(build_local_laplacian(g));
  const Field& phi = bundle.spectral->phi1;
  CHECK(lp_phi_norm(zero_field(g), 1.0, phi) == 0.0);
  // f = 1/phi pointwise integrates the grid measure
  Eigen::VectorXd inv(g->size());
  for (int i = 0; i < g->size(); ++i) inv[i] = 1.0 / phi.values[i];
  CHECK(lp_phi_norm(Field(g, inv), 1.0, phi) ==
        doctest::Approx(g->quad_weight * g->size()).epsilon(1e-12));
  CHECK_THROWS_AS(lp_phi_norm(constant_field(g, 1.0), 0.2, phi), Error);
}

TEST_CASE("weighted L1 bounded by the H* norm through lambda1") {
  auto g = make_grid(1, 18);
  auto bundle = make_bundle(build_rfl(g, 0.4));
  std::mt19937_64 rng(6);
  for (int t = 0; t < 50; ++t) {
    Field f = random_field(g, rng, true);
    double lhs = lp_phi_norm(f, 1.0, bundle.spectral->phi1);
    double rhs = std::sqrt(bundle.spectral->lambda1) * hstar_norm(f, *bundle.green);
    CHECK(lhs <= rhs * (1 + 1e-10));
  }
}

TEST_CASE("hstar and h norms at the ground state") {
  auto g = make_grid(1, 15);
  auto bundle = make_bundle(build_sfl(g, 0.6));
  double lam = bundle.spectral->lambda1;
  CHECK(hstar_norm(bundle.spectral->phi1, *bundle.green) ==
        doctest::Approx(1.0 / std::sqrt(lam)).epsilon(1e-9));
  CHECK(h_norm(bundle.spectral->phi1, *bundle.op) == doctest::Approx(std::sqrt(lam)).epsilon(1e-9));
  CHECK(hstar_norm(zero_field(g), *bundle.green) == 0.0);
  CHECK(h_norm(zero_field(g), *bundle.op) == 0.0);
}

TEST_CASE("spectral bounds relating L2, H and H*") {
  auto g = make_grid(1, 12);
  auto bundle = make_bundle(build_rfl(g, 0.6));
  double lam = bundle.spectral->lambda1;
  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    Field f = random_field(g, rng);
    double l2 = lp_norm(f, 2.0);
    CHECK(hstar_norm(f, *bundle.green) <= l2 / std::sqrt(lam) * (1 + 1e-10));
    CHECK(l2 * l2 <= h_norm(f, *bundle.op) * h_norm(f, *bundle.op) / lam * (1 + 1e-10));
    // Cauchy-Schwarz through the square root of the operator
    double ip = inner(f, f);
    CHECK(hstar_norm(f, *bundle.green) * h_norm(f, *bundle.op) >= ip * (1 - 1e-10));
  }
}

TEST_CASE("rayleigh quotients are scale invariant") {
  auto g = make_grid(1, 13);
  auto bundle = make_bundle(build_cfl(g, 0.8));
  std::mt19937_64 rng(8);
  for (double m : {0.3, 0.5, 0.8}) {
    for (int t = 0; t < 20; ++t) {
      Field f = random_field(g, rng, true);
      Field cf(g, 37.5 * f.values);
      CHECK(rayleigh_q(cf, *bundle.op, m) ==
            doctest::Approx(rayleigh_q(f, *bundle.op, m)).epsilon(1e-12));
      CHECK(rayleigh_qstar(cf, *bundle.green, m) ==
            doctest::Approx(rayleigh_qstar(f, *bundle.green, m)).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(rayleigh_q(zero_field(g), *bundle.op, 0.5), Error);
  CHECK_THROWS_AS(rayleigh_qstar(zero_field(g), *bundle.green, 0.5), Error);
}

TEST_CASE("rayleigh quotients at the ground state") {
  auto g = make_grid(1, 16);
  auto bundle = make_bundle(build_sfl(g, 0.5));
  double lam = bundle.spectral->lambda1;
  const Field& phi = bundle.spectral->phi1;
  double m = 0.5;
  // Q*[phi1] = ||phi1||_{1+m}^{1+m} lambda1^{(1+m)/2}
  double expect = std::pow(lp_norm(phi, 1.0 + m), 1.0 + m) * std::pow(lam, (1.0 + m) / 2.0);
  CHECK(rayleigh_qstar(phi, *bundle.green, m) == doctest::Approx(expect).epsilon(1e-9));
  // Q approaches lambda1 as m -> 1
  CHECK(rayleigh_q(phi, *bundle.op, 0.999) == doctest::Approx(lam).epsilon(1e-2));
}

TEST_CASE("qstar near m=1 is bounded below by the spectral gap") {
  auto g = make_grid(1, 14);
  auto bundle = make_bundle(build_rfl(g, 0.5));
  std::mt19937_64 rng(21);
  for (int t = 0; t < 30; ++t) {
    Field f = random_field(g, rng, true);
    // m -> 1 reduces Q* to ||f||_2^2 / ||f||_{H*}^2 >= lambda1
    double q = rayleigh_qstar(f, *bundle.green, 0.9999);
    CHECK(q >= bundle.spectral->lambda1 * (1.0 - 1e-3));
  }
}

TEST_CASE("rayleigh Q of the separable profile matches the closed form") {
  auto g = make_grid(1, 24);
  auto bundle = make_bundle(build_rfl(g, 0.6));
  for (double m : {0.4, 0.7}) {
    Field w = solve_separable_profile(bundle, m);
    double expect = std::pow(lp_norm(w, 1.0 + m), 1.0 - m) / (1.0 - m);
    CHECK(rayleigh_q(w, *bundle.op, m) == doctest::Approx(expect).epsilon(1e-8));
  }
}

TEST_CASE("functional constants: feasible point, duality probes, refinement") {
  // N > 2s needs s < 1/2 in 1D
  double prev_S = 0.0;
  for (int n : {24, 48, 96}) {
    auto g = make_grid(1, n);
    auto bundle = make_bundle(build_rfl(g, 0.25));
    auto fc = estimate_functional_constants(*bundle.op, *bundle.green, 1, 0.25, 16, 42);
    REQUIRE(fc.applicable);
    CHECK(fc.lambda1 == doctest::Approx(bundle.spectral->lambda1).epsilon(1e-12));
    CHECK(fc.two_star == doctest::Approx(4.0));
    // phi1 is a feasible point of the Sobolev maximization
    double feas = lp_norm(bundle.spectral->phi1, fc.two_star) / std::sqrt(fc.lambda1);
    CHECK(fc.sobolev_S >= feas * (1 - 1e-10));
    // discrete constants approach the continuum from below
    if (prev_S > 0.0) CHECK(fc.sobolev_S >= prev_S * 0.98);
    prev_S = fc.sobolev_S;

    // no counterexample among random probes
    std::mt19937_64 rng(1000 + n);
    std::normal_distribution<double> normal;
    double conj = 2.0 / (1.0 + 2.0 * 0.25);
    for (int t = 0; t < 200; ++t) {
      Eigen::VectorXd v(g->size());
      for (int i = 0; i < v.size(); ++i) v[i] = normal(rng);
      Field f(g, v);
      CHECK(lp_norm(f, fc.two_star) <= fc.sobolev_S * h_norm(f, *bundle.op) * (1 + 1e-9));
      CHECK(hstar_norm(f, *bundle.green) <= fc.hls_H * lp_norm(f, conj) * (1 + 1e-9));
    }
  }
}

TEST_CASE("functional constants flagged when N <= 2s") {
  auto g = make_grid(1, 10);
  auto bundle = make_bundle(build_sfl(g, 0.75));
  auto fc = estimate_functional_constants(*bundle.op, *bundle.green, 1, 0.75, 4, 1);
  CHECK_FALSE(fc.applicable);
  CHECK(std::isnan(fc.sobolev_S));
  CHECK(fc.lambda1 > 0.0);
}
