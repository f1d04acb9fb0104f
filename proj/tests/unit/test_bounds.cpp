#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hhf/bounds.hpp"

using namespace hhf;

namespace {

// 4 sum_{x,y} |P_up(x,y) P_down(x,y)|^2 straight from the dense projector.
double q7_from_projector(const CMat& p) {
  const Eigen::Index v = p.rows() / 2;
  double acc = 0.0;
  for (Eigen::Index x = 0; x < v; ++x)
    for (Eigen::Index y = 0; y < v; ++y)
      acc += std::norm(p(2 * x, 2 * y) * p(2 * x + 1, 2 * y + 1));
  return 4.0 * acc;
}

struct Instance {
  TorusLattice lat;
  HartreeFockSolution hf;
  QuarticSuite suite;
};

Instance make(int L, double g) {
  auto lat = build_torus(1, L);
  auto hf = hf_projector(lat, g, solve_gap(lat, g));
  auto sp = build_fock_space(2 * L, ModeOrder::orbital);
  auto suite = assemble_quartics(sp, hf, lat, g);
  return {lat, std::move(hf), std::move(suite)};
}

}  // namespace

TEST_CASE("record helpers") {
  CHECK(check_le("a", 1.0, 1.0 + 1e-9).passed);
  CHECK_FALSE(check_le("a", 1.0, 0.9).passed);
  CHECK(check_ge("a", 1.0, 1.0).margin == 0.0);
  CHECK(check_eq("a", 1.0 + 1e-10, 1.0, 1e-9).passed);
  CHECK_FALSE(check_eq("a", 1.0 + 1e-8, 1.0, 1e-9).passed);
  BoundReport r;
  r.add(info("i", 3.0));
  r.add(check_le("x", 2.0, 1.0));
  CHECK_FALSE(r.passed());
  CHECK(r.find("i")->kind == "info");
}

TEST_CASE("constants of the on-site model") {
  const auto lat = build_torus(2, 4);
  CHECK(hopping_norm(lat) == 2.0);
  CHECK(pair_potential_norm(lat) == 1.0);
  const auto hf = hf_projector(lat, 1.0, solve_gap(lat, 1.0));
  CHECK(interaction_density_sup(hf) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("momentum-space norm of Q7 Omega matches the projector sum in any dimension") {
  for (int d : {1, 2, 3})
    for (double g : {0.5, 2.0}) {
      const auto lat = build_torus(d, 4);
      const double D = solve_gap(lat, g);
      const auto hf = hf_projector(lat, g, D);
      const double direct = q7_from_projector(hf.projector) / static_cast<double>(lat.volume());
      CHECK(q7_norm_per_volume(lat, g, D) == doctest::Approx(direct).epsilon(1e-12));
    }
  const auto lat = build_torus(1, 4);
  CHECK(4 * q7_norm_per_volume(lat, 2.0, solve_gap(lat, 2.0)) == doctest::Approx(0.157666105251006).epsilon(1e-12));
}

TEST_CASE("three ways to ||Q7 Omega||^2") {
  for (int L : {4, 8}) {
    const auto in = make(L, 2.0);
    const auto q = q7_norm_three_ways(in.suite, in.hf, in.lat, 2.0);
    CHECK(q.exact == doctest::Approx(q.brute).epsilon(1e-12));
    CHECK(q.resolved_prefactor == 4);
    // the closed form (1 - 4 delta^2) |Lambda| is not the Fock-space value
    CHECK(q.closed_relative_error > 1.0);
    CHECK(q.brute >= 0.25 * std::pow(1 - 4 * in.hf.delta * in.hf.delta, 2) * L);
  }
  CHECK(make(8, 2.0).suite.terms[6].dim() == 65536);
}

TEST_CASE("sandwiched radius bounds on the four-site ring") {
  const auto in = make(4, 2.0);
  const auto rep = thm1_report(in.suite, in.hf, in.lat);
  CHECK(rep.passed());
  CHECK(rep.find("thm1.q3.radius_estimate")->measured == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(rep.find("thm1.q4.radius_estimate")->measured == doctest::Approx(0.15005).epsilon(1e-4));
  CHECK(rep.find("thm1.q5.radius_estimate")->measured == doctest::Approx(0.08226).epsilon(1e-4));
  CHECK(rep.find("thm1.q6.radius_estimate")->measured == doctest::Approx(0.07907).epsilon(1e-4));
  for (int nu : {3, 4, 5, 6}) CHECK(rep.find("thm1.q" + std::to_string(nu) + ".vacuum")->measured == 0.0);
}

TEST_CASE("trial vector expectations") {
  const auto in = make(4, 1.0);
  const double nq7 = std::sqrt(q7_norm_per_volume(in.lat, 1.0, in.hf.delta) * 4);
  for (double eps : {1e-3, 0.25, 0.5}) {
    const auto t = trial_vector(in.suite, eps);
    CHECK(t.vector.norm() == doctest::Approx(1.0).epsilon(1e-14));
    const auto rep = thm2_report(in.suite, in.hf, in.lat, eps, 4);
    CHECK(rep.find("thm2.re_q7_exact")->passed);
    CHECK(rep.find("thm2.re_q7_exact")->bound == doctest::Approx(eps * std::sqrt(1 - eps * eps) * nq7));
    CHECK(rep.find("thm2.number")->passed);
    CHECK(rep.find("thm2.kinetic_hf")->passed);
    CHECK(rep.find("thm2.main")->passed);
    CHECK(rep.find("thm2.vacuum_chain")->passed);
    CHECK(rep.find("thm2.trace_q1")->passed);
    CHECK(rep.find("thm2.trace_q2")->passed);
    CHECK_FALSE(rep.find("thm2.re_q7")->passed);
  }
  CHECK_THROWS(trial_vector(in.suite, 0.6));
  CHECK_THROWS(trial_vector(in.suite, 0.0));
}

TEST_CASE("lower-bound constants and the extensive floor") {
  for (int d : {1, 2, 3})
    for (double g : {0.5, 1.0, 2.0}) {
      const auto rep = thm3_check(build_torus(d, 8), g);
      CHECK(rep.find("thm3.closed_vs_a_half")->passed);
      CHECK(rep.find("thm3.a_floor")->passed);
      CHECK(rep.find("thm3.q7_exact_floor")->passed);
      CHECK(rep.find("thm3.q7_exact_floor")->measured > 0.0);
    }
}

TEST_CASE("extensivity sweep converges to a positive density") {
  const auto s = extensivity_sweep(1, {4, 8, 16, 32}, 2.0);
  REQUIRE(s.rows.size() == 4);
  CHECK(s.rows[0].q7_per_vol == doctest::Approx(0.157666105251006 / 4).epsilon(1e-12));
  CHECK(s.rows[1].q7_per_vol == doctest::Approx(0.4745415509001386 / 8).epsilon(1e-12));
  CHECK(s.floor_positive);
  CHECK(s.converging);
  CHECK(s.rows[3].q7_per_vol == doctest::Approx(s.rows[2].q7_per_vol).epsilon(1e-4));
  const auto single = extensivity_sweep(2, {8}, 1.0);
  CHECK(single.rows[0].delta == solve_gap(build_torus(2, 8), 1.0));
}
