#include "hhf/hartree_fock.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace hhf {

namespace {

double residual_from_table(const std::vector<double>& w, double g, double delta) {
  const double r2 = g * g * delta * delta;
  double s = 0.0;
  for (double x : w) s += g / std::sqrt(x * x + r2);
  return s / static_cast<double>(w.size()) - 2.0;
}

double residual_slope(const std::vector<double>& w, double g, double delta) {
  const double r2 = g * g * delta * delta;
  double s = 0.0;
  for (double x : w) {
    const double q = x * x + r2;
    s -= g * g * g * delta / (q * std::sqrt(q));
  }
  return s / static_cast<double>(w.size());
}

// exp(-2 pi i m / L) for m in 0..L-1
std::vector<cplx> phase_table(int L) {
  std::vector<cplx> t(static_cast<std::size_t>(L));
  for (int m = 0; m < L; ++m) {
    const double a = -2.0 * std::numbers::pi * m / L;
    t[static_cast<std::size_t>(m)] = {std::cos(a), std::sin(a)};
  }
  return t;
}

}  // namespace

RMat hopping_matrix(const TorusLattice& lat) {
  const auto n = static_cast<Eigen::Index>(lat.volume());
  RMat t = RMat::Zero(n, n);
  for (std::size_t x = 0; x < lat.volume(); ++x)
    for (std::size_t y : neighbours(lat, x)) t(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) = -0.5;
  return t;
}

RMat gauge_matrix(const TorusLattice& lat) {
  const auto n = static_cast<Eigen::Index>(lat.volume());
  RMat gm = RMat::Zero(n, n);
  for (std::size_t x = 0; x < lat.volume(); ++x)
    gm(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(x)) = gauge_sign(lat, x);
  return gm;
}

double gap_residual(const TorusLattice& lat, double g, double delta) {
  if (!(g > 0.0)) throw std::invalid_argument("g > 0 required");
  if (!(delta > 0.0)) throw std::invalid_argument("delta > 0 required");
  return residual_from_table(dispersion_table(lat), g, delta);
}

GapSolution solve_gap_detailed(const TorusLattice& lat, double g, double tol) {
  if (!(g > 0.0)) throw std::invalid_argument("g > 0 required");
  if (!(tol > 0.0)) throw std::invalid_argument("tol > 0 required");
  const auto w = dispersion_table(lat);
  GapSolution out;

  double hi = 0.5;
  if (residual_from_table(w, g, hi) >= 0.0)
    throw std::runtime_error("gap equation has no root in (0, 1/2]");
  double lo = 0.25;
  while (true) {
    const double r = residual_from_table(w, g, lo);
    if (std::isfinite(r) && r > 0.0) break;
    lo *= 0.5;
    if (lo < 1e-300) throw std::runtime_error("cannot bracket the gap equation from below");
  }

  double mid = 0.5 * (lo + hi);
  double res = residual_from_table(w, g, mid);
  while (hi - lo > 1e-15 * hi && std::abs(res) >= tol) {
    if (res > 0.0) lo = mid; else hi = mid;
    mid = 0.5 * (lo + hi);
    res = residual_from_table(w, g, mid);
    ++out.bisection_steps;
  }
  // Newton polish inside the bracket
  for (int it = 0; it < 30 && std::abs(res) > 0.1 * tol; ++it) {
    const double next = mid - res / residual_slope(w, g, mid);
    if (!(next > lo && next < hi)) break;
    const double rn = residual_from_table(w, g, next);
    ++out.newton_steps;
    if (std::abs(rn) >= std::abs(res)) break;
    mid = next;
    res = rn;
  }
  if (!(std::abs(res) < tol))
    throw std::runtime_error("gap solver did not reach tolerance: residual " + std::to_string(res));
  out.delta = mid;
  out.residual = res;
  return out;
}

double solve_gap(const TorusLattice& lat, double g, double tol) { return solve_gap_detailed(lat, g, tol).delta; }

double free_energy_term(const TorusLattice& lat, double g, double t) {
  double s = 0.0;
  for (double w : dispersion_table(lat)) s += std::sqrt(w * w + g * g * t);
  return g * t - s / static_cast<double>(lat.volume());
}

double hf_energy_density(const TorusLattice& lat, double g, double delta) {
  return 0.25 * g + free_energy_term(lat, g, delta * delta);
}

double hf_energy_density_half_coupling(const TorusLattice& lat, double g, double delta) {
  return 0.5 * g + free_energy_term(lat, g, delta * delta);
}

CMat one_particle_hamiltonian(const TorusLattice& lat, double r) {
  const auto n = static_cast<Eigen::Index>(2 * lat.volume());
  CMat h = CMat::Zero(n, n);
  for (std::size_t x = 0; x < lat.volume(); ++x) {
    const int gs = gauge_sign(lat, x);
    for (int s = 0; s < 2; ++s) {
      const auto i = spin_index(x, s);
      h(i, i) = r * gs * (s == 0 ? 1.0 : -1.0);
      for (std::size_t y : neighbours(lat, x)) h(i, spin_index(y, s)) += -0.5;
    }
  }
  return h;
}

Eigenpair eigenpair(const TorusLattice& lat, double r, std::size_t xi, int sigma, int kappa) {
  if (!(r > 0.0)) throw std::invalid_argument("r > 0 required");
  if (sigma != 1 && sigma != -1) throw std::invalid_argument("sigma must be +1 or -1");
  if (kappa != 1 && kappa != -1) throw std::invalid_argument("kappa must be +1 or -1");
  const auto part = momentum_partition(lat);
  if (part.side.at(xi) != 1) throw std::invalid_argument("momentum is not in the plus half");

  const double w = dispersion(lat, xi);
  const double lam = std::sqrt(w * w + r * r);
  const double a_k = std::sqrt(1.0 + kappa * w / lam);
  const double a_mk = std::sqrt(1.0 - kappa * w / lam);
  const auto phases = phase_table(lat.length());
  const double norm = 1.0 / std::sqrt(static_cast<double>(lat.volume()));
  const auto n = lat.momentum(xi);

  Eigenpair out;
  out.energy = kappa * lam;
  out.vector = CVec::Zero(static_cast<Eigen::Index>(2 * lat.volume()));
  for (std::size_t y = 0; y < lat.volume(); ++y) {
    const auto ys = lat.site(y);
    long dot = 0;
    for (std::size_t a = 0; a < ys.size(); ++a) dot += static_cast<long>(n[a]) * ys[a];
    const cplx phi = norm * phases[static_cast<std::size_t>(dot % lat.length())];
    const double stagger = gauge_sign(lat, y);
    out.vector(spin_index(y, spin_slot(sigma))) =
        phi * (sigma * a_k + kappa * a_mk * stagger) / std::numbers::sqrt2;
  }
  return out;
}

HartreeFockSolution hf_projector(const TorusLattice& lat, double g, double delta, std::size_t max_volume) {
  if (lat.volume() > max_volume)
    throw std::invalid_argument("lattice too large for a dense projector (|Lambda| = " +
                                std::to_string(lat.volume()) + ")");
  if (!(delta > 0.0 && delta < 0.5)) throw std::invalid_argument("delta must lie in (0, 1/2)");
  HartreeFockSolution hf;
  hf.d = lat.dim();
  hf.L = lat.length();
  hf.g = g;
  hf.delta = delta;
  hf.gap = g * delta;
  hf.fermi_level = 0.0;
  hf.hartree_shift = 0.5 * g;
  hf.energy_density = hf_energy_density(lat, g, delta);

  const auto part = momentum_partition(lat);
  for (int kappa : {-1, 1})
    for (std::size_t xi : part.plus)
      for (int sigma : {1, -1}) {
        const double w = dispersion(lat, xi);
        const double lam = std::sqrt(w * w + hf.gap * hf.gap);
        hf.orbitals.push_back({xi, sigma, kappa, lam, kappa * lam});
      }
  hf.occupied = lat.volume();

  const auto m = static_cast<Eigen::Index>(hf.orbitals.size());
  hf.orbital_matrix.resize(m, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const auto& o = hf.orbitals[static_cast<std::size_t>(k)];
    hf.orbital_matrix.col(k) = eigenpair(lat, hf.gap, o.xi, o.sigma, o.kappa).vector;
  }
  const auto occ = hf.orbital_matrix.leftCols(static_cast<Eigen::Index>(hf.occupied));
  hf.projector = occ * occ.adjoint();
  return hf;
}

Eigen::Matrix2cd site_block(const CMat& gamma, std::size_t x) {
  return gamma.block<2, 2>(spin_index(x, 0), spin_index(x, 0));
}

PauliDensity pauli_decompose(const Eigen::Matrix2cd& b) {
  PauliDensity p;
  p.rho = (b(0, 0) + b(1, 1)).real();
  p.v[0] = (b(0, 1) + b(1, 0)).real();
  p.v[1] = (cplx(0, 1) * (b(0, 1) - b(1, 0))).real();
  p.v[2] = (b(0, 0) - b(1, 1)).real();
  return p;
}

double hf_functional(const TorusLattice& lat, double g, const CMat& gamma, double tol) {
  const auto n = static_cast<Eigen::Index>(2 * lat.volume());
  if (gamma.rows() != n || gamma.cols() != n) throw std::invalid_argument("gamma has the wrong dimension");
  if ((gamma - gamma.adjoint()).cwiseAbs().maxCoeff() > tol) throw std::invalid_argument("gamma is not Hermitian");
  const Eigen::SelfAdjointEigenSolver<CMat> es(gamma, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol || es.eigenvalues().maxCoeff() > 1.0 + tol)
    throw std::invalid_argument("gamma violates 0 <= gamma <= 1");
  if (std::abs(gamma.trace().real() - static_cast<double>(lat.volume())) > tol)
    throw std::invalid_argument("Tr gamma differs from |Lambda|");

  double kinetic = 0.0;
  for (std::size_t x = 0; x < lat.volume(); ++x)
    for (std::size_t y : neighbours(lat, x))
      for (int s = 0; s < 2; ++s) kinetic += -0.5 * gamma(spin_index(y, s), spin_index(x, s)).real();
  double interaction = 0.0;
  for (std::size_t x = 0; x < lat.volume(); ++x) {
    const auto p = pauli_decompose(site_block(gamma, x));
    interaction += p.rho * p.rho - p.v[0] * p.v[0] - p.v[1] * p.v[1] - p.v[2] * p.v[2];
  }
  return kinetic + 0.25 * g * interaction;
}

LowerBoundConstant lower_bound_constant_a(const TorusLattice& lat, double g) {
  if (!(g > 0.0)) throw std::invalid_argument("g > 0 required");
  LowerBoundConstant c;
  double s_half = 0.0;
  double s_full = 0.0;
  for (double w : dispersion_table(lat)) {
    s_half += w * w / (w * w + 0.25 * g * g);
    s_full += w * w / (w * w + g * g);
  }
  c.a_half_coupling = s_half / static_cast<double>(lat.volume());
  c.a_full_coupling = s_full / static_cast<double>(lat.volume());
  const double d = lat.dim();
  c.floor = std::pow(4.0, -d) * d * d / (d * d + g * g);
  return c;
}

CMat spectral_projector(const CMat& h, std::size_t rank) {
  const Eigen::SelfAdjointEigenSolver<CMat> es(h);
  const auto u = es.eigenvectors().leftCols(static_cast<Eigen::Index>(rank));
  return u * u.adjoint();
}

std::vector<double> perturbed_energies(const TorusLattice& lat, const HartreeFockSolution& hf, int count,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const CMat h = one_particle_hamiltonian(lat, hf.gap);
  const auto n = h.rows();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    CMat k(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < n; ++b) k(a, b) = cplx(normal(rng), normal(rng));
    k = 0.5 * (k + k.adjoint()).eval();
    const Eigen::SelfAdjointEigenSolver<CMat> es(k, Eigen::EigenvaluesOnly);
    k /= es.eigenvalues().cwiseAbs().maxCoeff();
    const double eps = (i % 2 == 0) ? 0.01 : 0.1;
    out.push_back(hf_functional(lat, hf.g, spectral_projector(h + eps * k, lat.volume())));
  }
  return out;
}

}  // namespace hhf
