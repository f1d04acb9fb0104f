#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hhf/hartree_fock.hpp"

using namespace hhf;

// d = 1, L = 4: omega in {-1, 0, 1, 0}, so the gap equation reads
// (1/4)[2g / sqrt(1 + g^2 D^2) + 2 / D] = 2.
static double small_gap_residual(double g, double D) {
  return 0.25 * (2.0 * g / std::sqrt(1.0 + g * g * D * D) + 2.0 / D) - 2.0;
}

TEST_CASE("gap equation on the four-site ring") {
  for (double g : {0.5, 1.0, 2.0}) {
    const auto lat = build_torus(1, 4);
    const double D = solve_gap(lat, g);
    CHECK(D > 0.0);
    CHECK(D < 0.5);
    CHECK(std::abs(small_gap_residual(g, D)) < 1e-12);
    CHECK(std::abs(gap_residual(lat, g, D)) < 1e-12);
  }
  CHECK(solve_gap(build_torus(1, 4), 2.0) == doctest::Approx(0.4080731807034029).epsilon(1e-13));
  CHECK(solve_gap(build_torus(1, 8), 2.0) == doctest::Approx(0.3856062915703958).epsilon(1e-13));
}

TEST_CASE("gap residual is decreasing in delta and the solver rejects g <= 0") {
  const auto lat = build_torus(2, 8);
  double prev = gap_residual(lat, 1.0, 0.01);
  for (double D = 0.02; D < 0.5; D += 0.01) {
    const double cur = gap_residual(lat, 1.0, D);
    CHECK(cur < prev);
    prev = cur;
  }
  CHECK_THROWS_AS(solve_gap(lat, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(solve_gap(lat, -1.0), std::invalid_argument);
}

TEST_CASE("hopping spectrum equals the dispersion and the gauge flips it") {
  for (int d : {1, 2}) {
    const auto lat = build_torus(d, 4);
    const RMat t = hopping_matrix(lat);
    Eigen::SelfAdjointEigenSolver<RMat> es(t);
    auto w = dispersion_table(lat);
    std::sort(w.begin(), w.end());
    for (std::size_t i = 0; i < w.size(); ++i) CHECK(es.eigenvalues()(static_cast<Eigen::Index>(i)) == doctest::Approx(w[i]));
    const RMat g = gauge_matrix(lat);
    CHECK((g * t * g + t).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("projector identities and the self-consistent diagonal") {
  for (int d : {1, 2})
    for (double g : {0.5, 2.0}) {
      const auto lat = build_torus(d, 4);
      const double D = solve_gap(lat, g);
      const auto hf = hf_projector(lat, g, D);
      const CMat& p = hf.projector;
      CHECK((p * p - p).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(p.trace().real() == doctest::Approx(static_cast<double>(lat.volume())));
      CHECK((p - p.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
      for (std::size_t x = 0; x < lat.volume(); ++x) {
        const auto b = site_block(p, x);
        const double s = gauge_sign(lat, x);
        CHECK(std::abs(b(0, 0).real() - (0.5 - s * D)) < 1e-10);
        CHECK(std::abs(b(1, 1).real() - (0.5 + s * D)) < 1e-10);
        CHECK(std::abs(b(0, 1)) < 1e-12);
      }
      CHECK(hf.occupied == lat.volume());
      CHECK(hf.mode_count() == 2 * lat.volume());
    }
}

TEST_CASE("orbitals are eigenvectors of H_r with eigenvalues kappa lambda") {
  const auto lat = build_torus(1, 8);
  const double g = 1.0;
  const auto hf = hf_projector(lat, g, solve_gap(lat, g));
  const CMat h = one_particle_hamiltonian(lat, hf.gap);
  const CMat u = hf.orbital_matrix;
  CHECK((u.adjoint() * u - CMat::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff() < 1e-13);
  for (Eigen::Index k = 0; k < u.cols(); ++k) {
    const auto& o = hf.orbitals[static_cast<std::size_t>(k)];
    CHECK((h * u.col(k) - o.energy * u.col(k)).norm() < 1e-12);
    CHECK(o.energy == doctest::Approx(o.kappa * o.lambda));
    CHECK((o.kappa == -1) == hf.is_occupied(static_cast<std::size_t>(k)));
  }
  // the occupied orbitals span the negative spectral subspace
  CHECK((spectral_projector(h, lat.volume()) - hf.projector).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("energy of the Hartree-Fock state") {
  const auto lat = build_torus(1, 4);
  const double g = 2.0;
  const double D = solve_gap(lat, g);
  const auto hf = hf_projector(lat, g, D);
  const double e = hf_functional(lat, g, hf.projector);
  const double f = free_energy_term(lat, g, D * D);
  CHECK(e == doctest::Approx(4.0 * (0.25 * g + f)).epsilon(1e-12));
  CHECK(e / 4.0 == doctest::Approx(-0.2204122285693244).epsilon(1e-12));
  CHECK(hf.energy_density == doctest::Approx(hf_energy_density(lat, g, D)));
  CHECK(hf_energy_density_half_coupling(lat, g, D) - hf_energy_density(lat, g, D) == doctest::Approx(0.25 * g));
}

TEST_CASE("functional of the maximally mixed state is g |Lambda| / 4") {
  const auto lat = build_torus(1, 8);
  const CMat gamma = 0.5 * CMat::Identity(16, 16);
  CHECK(hf_functional(lat, 1.5, gamma) == doctest::Approx(1.5 * 8 / 4.0));
  CHECK_THROWS(hf_functional(lat, 1.5, CMat::Identity(16, 16)));  // trace 16 != 8
  CMat bad = gamma;
  bad(0, 1) = 0.3;
  CHECK_THROWS(hf_functional(lat, 1.5, bad));  // not Hermitian
}

TEST_CASE("Pauli decomposition of a site block") {
  Eigen::Matrix2cd b;
  b << cplx(0.7, 0), cplx(0.1, -0.2), cplx(0.1, 0.2), cplx(0.3, 0);
  const auto p = pauli_decompose(b);
  CHECK(p.rho == doctest::Approx(1.0));
  CHECK(p.v[0] == doctest::Approx(0.2));
  CHECK(p.v[1] == doctest::Approx(0.4));
  CHECK(p.v[2] == doctest::Approx(0.4));
}

TEST_CASE("random admissible perturbations do not lower the energy") {
  const auto lat = build_torus(1, 8);
  const double g = 2.0;
  const auto hf = hf_projector(lat, g, solve_gap(lat, g));
  const double e = hf_functional(lat, g, hf.projector);
  const auto es = perturbed_energies(lat, hf, 50, 3);
  CHECK(es.size() == 50);
  for (double x : es) CHECK(x >= e - 1e-9);
  CHECK(perturbed_energies(lat, hf, 5, 3) == std::vector<double>(es.begin(), es.begin() + 5));
}

TEST_CASE("lower-bound constant a") {
  const auto lat = build_torus(1, 4);
  const auto a = lower_bound_constant_a(lat, 2.0);
  CHECK(a.a_half_coupling == doctest::Approx(0.25));
  CHECK(a.a_full_coupling == doctest::Approx(0.1));
  CHECK(a.floor == doctest::Approx(0.05));
  for (int d : {1, 2, 3})
    for (double g : {0.5, 1.0, 2.0}) {
      const auto c = lower_bound_constant_a(build_torus(d, 8), g);
      CHECK(c.a_half_coupling >= c.a_full_coupling);
      CHECK(c.a_full_coupling >= c.floor);
    }
}
