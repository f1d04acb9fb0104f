#include "hhf/fock.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <sstream>

#include "hhf/linalg.hpp"

namespace hhf {

namespace {

constexpr double kCoefTol = 1e-14;

using Triplets = std::vector<Eigen::Triplet<cplx>>;

SparseOperator from_triplets(const FockSpace& space, const Triplets& t, bool hermitian) {
  const auto n = static_cast<Eigen::Index>(space.dimension);
  SparseOperator op;
  op.matrix.resize(n, n);
  op.matrix.setFromTriplets(t.begin(), t.end());
  op.matrix.prune(cplx(0.0), 0.0);
  op.matrix.makeCompressed();
  op.hermitian = hermitian;
  return op;
}

struct Ladder {
  int mode;
  bool dagger;
};

// Product of ladder operators, leftmost first, applied to every basis word.
struct Monomial {
  cplx coef;
  std::array<Ladder, 4> ops;
  int size;
};

void apply_monomials(const FockSpace& space, const std::vector<Monomial>& terms, Triplets& out) {
  for (const auto& t : terms) {
    for (std::uint64_t w0 = 0; w0 < space.dimension; ++w0) {
      std::uint64_t w = w0;
      int sign = 1;
      bool alive = true;
      for (int i = t.size - 1; i >= 0 && alive; --i) alive = apply_ladder(w, t.ops[i].mode, t.ops[i].dagger, sign);
      if (alive)
        out.emplace_back(static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(w0), t.coef * static_cast<double>(sign));
    }
  }
}

std::size_t flat(std::size_t m, std::size_t j, std::size_t k, std::size_t a, std::size_t b) {
  return ((j * m + k) * m + a) * m + b;
}

}  // namespace

FockCapError::FockCapError(int modes, int cap)
    : std::runtime_error([&] {
        std::ostringstream s;
        const double mib = std::ldexp(16.0, modes) / (1024.0 * 1024.0);
        s << "Fock space over " << modes << " modes (2^" << modes << " states, " << mib
          << " MiB per state vector) exceeds the mode cap " << cap;
        if (modes <= kHardFockCap)
          s << "; rerun with --fock-cap " << modes;
        else
          s << "; the hard limit is " << kHardFockCap << " modes, use a smaller lattice";
        return s.str();
      }()),
      modes_(modes),
      cap_(cap) {}

FockSpace build_fock_space(int modes, ModeOrder order, int cap) {
  if (cap > kHardFockCap) throw std::invalid_argument("fock cap exceeds the hard limit of 24 modes");
  if (modes < 1) throw std::invalid_argument("at least one mode required");
  if (modes > cap) throw FockCapError(modes, cap);
  return {modes, std::size_t{1} << modes, order};
}

SparseOperator creation(const FockSpace& space, int mode) {
  if (mode < 0 || mode >= space.modes) throw std::out_of_range("mode index out of range");
  Triplets t;
  t.reserve(space.dimension / 2);
  for (std::uint64_t w0 = 0; w0 < space.dimension; ++w0) {
    std::uint64_t w = w0;
    int sign = 1;
    if (apply_ladder(w, mode, true, sign))
      t.emplace_back(static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(w0), cplx(sign));
  }
  return from_triplets(space, t, false);
}

SparseOperator annihilation(const FockSpace& space, int mode) { return adjoint(creation(space, mode)); }

SparseOperator orbital_operator(const FockSpace& space, const CVec& coeffs) {
  if (coeffs.size() != space.modes) throw std::invalid_argument("coefficient vector has the wrong length");
  if (coeffs.norm() == 0.0) throw std::invalid_argument("zero orbital");
  Triplets t;
  for (std::uint64_t w0 = 0; w0 < space.dimension; ++w0)
    for (int m = 0; m < space.modes; ++m) {
      if (coeffs(m) == cplx(0.0)) continue;
      std::uint64_t w = w0;
      int sign = 1;
      if (apply_ladder(w, m, true, sign))
        t.emplace_back(static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(w0), coeffs(m) * static_cast<double>(sign));
    }
  return from_triplets(space, t, false);
}

SparseOperator identity_operator(const FockSpace& space) {
  Triplets t;
  for (std::uint64_t w = 0; w < space.dimension; ++w)
    t.emplace_back(static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(w), cplx(1.0));
  return from_triplets(space, t, true);
}

SparseOperator adjoint(const SparseOperator& a) {
  SparseOperator out;
  out.matrix = a.matrix.adjoint();
  out.matrix.makeCompressed();
  out.hermitian = a.hermitian;
  return out;
}

SparseOperator real_part(const SparseOperator& a) {
  SparseOperator out;
  out.matrix = 0.5 * (a.matrix + SpMat(a.matrix.adjoint()));
  out.matrix.prune(cplx(0.0), 0.0);
  out.matrix.makeCompressed();
  out.hermitian = true;
  return out;
}

SparseOperator number_operator(const FockSpace& space, const std::vector<int>& modes) {
  std::uint64_t mask = 0;
  for (int m : modes) mask |= std::uint64_t{1} << m;
  Triplets t;
  for (std::uint64_t w = 0; w < space.dimension; ++w) {
    const int n = __builtin_popcountll(w & mask);
    if (n) t.emplace_back(static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(w), cplx(n));
  }
  return from_triplets(space, t, true);
}

double hermitian_defect(const SparseOperator& a, int columns, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Eigen::Index> pick(0, a.dim() - 1);
  const SpMat adj = a.matrix.adjoint();
  double worst = 0.0;
  for (int i = 0; i < columns; ++i) {
    CVec e = CVec::Zero(a.dim());
    e(pick(rng)) = 1.0;
    worst = std::max(worst, (a.matrix * e - adj * e).cwiseAbs().maxCoeff());
  }
  return worst;
}

std::string to_coordinate_text(const SparseOperator& a) {
  std::string out;
  char buf[128];
  for (Eigen::Index r = 0; r < a.matrix.outerSize(); ++r)
    for (SpMat::InnerIterator it(a.matrix, r); it; ++it) {
      std::snprintf(buf, sizeof buf, "%lld %lld %.17g %.17g\n", static_cast<long long>(it.row()),
                    static_cast<long long>(it.col()), it.value().real(), it.value().imag());
      out += buf;
    }
  return out;
}

SparseOperator assemble_hubbard_hamiltonian(const FockSpace& space, const TorusLattice& lat, double g) {
  if (space.order != ModeOrder::position) throw std::invalid_argument("Hubbard Hamiltonian needs position mode order");
  if (static_cast<std::size_t>(space.modes) != 2 * lat.volume())
    throw std::invalid_argument("mode count must equal 2|Lambda|");
  std::vector<Monomial> terms;
  for (std::size_t x = 0; x < lat.volume(); ++x) {
    for (std::size_t y : neighbours(lat, x))
      for (int s = 0; s < 2; ++s)
        terms.push_back({cplx(-0.5), {{{int(spin_index(x, s)), true}, {int(spin_index(y, s)), false}}}, 2});
    const int up = int(spin_index(x, 0));
    const int dn = int(spin_index(x, 1));
    // (g/2) * 2 * c*_up c*_dn c_dn c_up
    terms.push_back({cplx(g), {{{up, true}, {dn, true}, {dn, false}, {up, false}}}, 4});
  }
  Triplets t;
  apply_monomials(space, terms, t);
  return from_triplets(space, t, true);
}

ParticleHoleOps particle_hole_ops(const FockSpace& space, const HartreeFockSolution& hf) {
  if (space.order != ModeOrder::orbital) throw std::invalid_argument("particle-hole operators need orbital mode order");
  const auto m = static_cast<int>(hf.mode_count());
  if (space.modes != m) throw std::invalid_argument("mode count must equal the number of orbitals");
  ParticleHoleOps ops;
  const auto n = static_cast<Eigen::Index>(space.dimension);
  SparseOperator zero;
  zero.matrix.resize(n, n);
  for (int k = 0; k < m; ++k) {
    const bool occ = hf.is_occupied(static_cast<std::size_t>(k));
    ops.h_dag.push_back(occ ? zero : creation(space, k));
    ops.l_dag.push_back(occ ? creation(space, k) : zero);
  }
  const auto& f = hf.orbital_matrix;
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    CVec ch = CVec::Zero(m);
    CVec cl = CVec::Zero(m);
    for (int k = 0; k < m; ++k) {
      if (hf.is_occupied(static_cast<std::size_t>(k))) cl(k) = f(i, k);
      else ch(k) = std::conj(f(i, k));
    }
    ops.h_dag_pos.push_back(ch.norm() > 0 ? orbital_operator(space, ch) : zero);
    ops.l_dag_pos.push_back(cl.norm() > 0 ? orbital_operator(space, cl) : zero);
  }
  return ops;
}

std::vector<cplx> two_body_matrix(const HartreeFockSolution& hf) {
  const auto m = static_cast<std::size_t>(hf.mode_count());
  const auto& f = hf.orbital_matrix;
  std::vector<cplx> v(m * m * m * m, cplx(0.0));
  const auto sites = static_cast<std::size_t>(f.rows() / 2);
  CMat b(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t x = 0; x < sites; ++x) {
    // B_{j,m} = sum_s conj f_j(x s) f_m(x s)
    b.setZero();
    for (int s = 0; s < 2; ++s) {
      const auto row = f.row(spin_index(x, s));
      b += row.adjoint() * row;
    }
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t a = 0; a < m; ++a) {
        const cplx bja = b(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(a));
        if (std::abs(bja) < kCoefTol) continue;
        for (std::size_t k = 0; k < m; ++k)
          for (std::size_t c = 0; c < m; ++c)
            v[flat(m, j, k, a, c)] += bja * b(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(c));
      }
  }
  return v;
}

double hf_energy_offset(const HartreeFockSolution& hf, const TorusLattice& lat) {
  const auto& p = hf.projector;
  double kinetic = 0.0;
  for (std::size_t x = 0; x < lat.volume(); ++x)
    for (std::size_t y : neighbours(lat, x))
      for (int s = 0; s < 2; ++s) kinetic += -0.5 * p(spin_index(y, s), spin_index(x, s)).real();
  // on-site v: Tr[v (1 - Ex)(P (x) P)] = sum_x sum_{s,t} (P_ss P_tt - |P_st|^2)
  double pair = 0.0;
  for (std::size_t x = 0; x < lat.volume(); ++x)
    for (int s = 0; s < 2; ++s)
      for (int t = 0; t < 2; ++t) {
        const auto i = spin_index(x, s);
        const auto j = spin_index(x, t);
        pair += (p(i, i) * p(j, j)).real() - std::norm(p(i, j));
      }
  return kinetic + 0.5 * hf.g * pair;
}

namespace {

// Orbital-basis forms. Slot letters index (j, k, m, n) of V_{j,k;m,n}.
struct Slot {
  int index;  // 0 = j, 1 = k, 2 = m, 3 = n
  bool hole;  // true: h-type (unoccupied orbital), false: l-type (occupied)
  bool dagger;
};
using Pattern = std::array<Slot, 4>;
constexpr int J = 0, K = 1, M_ = 2, N_ = 3;
constexpr std::array<Pattern, 7> kPatterns = {{
    {{{K, true, true}, {J, true, true}, {M_, true, false}, {N_, true, false}}},     // h*_k h*_j h_m h_n
    {{{M_, false, true}, {N_, false, true}, {K, false, false}, {J, false, false}}},  // l*_m l*_n l_k l_j
    {{{K, true, true}, {M_, false, true}, {J, false, false}, {N_, true, false}}},    // h*_k l*_m l_j h_n
    {{{J, true, true}, {M_, false, true}, {K, false, false}, {N_, true, false}}},    // h*_j l*_m l_k h_n
    {{{K, true, true}, {M_, false, true}, {N_, false, true}, {J, false, false}}},    // h*_k l*_m l*_n l_j
    {{{J, true, true}, {M_, true, false}, {K, false, false}, {N_, true, false}}},    // h*_j h_m l_k h_n
    {{{K, true, true}, {J, true, true}, {M_, false, true}, {N_, false, true}}},     // h*_k h*_j l*_m l*_n
}};

SparseOperator orbital_quartic(const FockSpace& space, const HartreeFockSolution& hf, const std::vector<cplx>& v,
                               const Pattern& pat) {
  const auto m = hf.mode_count();
  std::vector<Monomial> terms;
  std::array<std::size_t, 4> idx{};
  for (idx[0] = 0; idx[0] < m; ++idx[0])
    for (idx[1] = 0; idx[1] < m; ++idx[1])
      for (idx[2] = 0; idx[2] < m; ++idx[2])
        for (idx[3] = 0; idx[3] < m; ++idx[3]) {
          const cplx c = v[flat(m, idx[0], idx[1], idx[2], idx[3])];
          if (std::abs(c) < kCoefTol) continue;
          Monomial t{c, {}, 4};
          bool ok = true;
          for (int s = 0; s < 4 && ok; ++s) {
            const auto mode = idx[static_cast<std::size_t>(pat[static_cast<std::size_t>(s)].index)];
            ok = hf.is_occupied(mode) != pat[static_cast<std::size_t>(s)].hole;
            t.ops[static_cast<std::size_t>(s)] = {static_cast<int>(mode), pat[static_cast<std::size_t>(s)].dagger};
          }
          if (ok) terms.push_back(t);
        }
  Triplets tr;
  apply_monomials(space, terms, tr);
  return from_triplets(space, tr, false);
}

SpMat product(const std::vector<const SpMat*>& factors) {
  SpMat acc = *factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) acc = (acc * *factors[i]).pruned();
  return acc;
}

// Position-basis forms, built from products of the field operators h*_{x s}, l*_{x s}.
std::array<SparseOperator, 7> position_quartics(const FockSpace& space, const HartreeFockSolution& hf,
                                                const TorusLattice& lat) {
  const auto ops = particle_hole_ops(space, hf);
  const auto dim = static_cast<Eigen::Index>(space.dimension);
  const auto sites = lat.volume();
  std::vector<SpMat> hd, hn, ld, ln;
  for (std::size_t i = 0; i < 2 * sites; ++i) {
    hd.push_back(ops.h_dag_pos[i].matrix);
    hn.push_back(ops.h_dag_pos[i].matrix.adjoint());
    ld.push_back(ops.l_dag_pos[i].matrix);
    ln.push_back(ops.l_dag_pos[i].matrix.adjoint());
  }
  std::array<SparseOperator, 7> q;
  for (auto& op : q) op.matrix.resize(dim, dim);
  for (std::size_t x = 0; x < sites; ++x)
    for (std::size_t y = 0; y < sites; ++y) {
      if (x != y) continue;  // on-site pair potential v_{x-y} = delta_{x,y}
      for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t) {
          const auto a = static_cast<std::size_t>(spin_index(x, s));
          const auto b = static_cast<std::size_t>(spin_index(y, t));
          q[0].matrix += product({&hd[a], &hd[b], &hn[b], &hn[a]});
          q[1].matrix += product({&ld[b], &ld[a], &ln[a], &ln[b]});
          q[2].matrix += product({&hd[a], &ld[b], &ln[b], &hn[a]});
          q[3].matrix += product({&hd[b], &ld[b], &ln[a], &hn[a]});
          q[4].matrix += product({&hd[a], &ld[b], &ld[a], &ln[b]});
          q[5].matrix += product({&hd[b], &hn[b], &ln[a], &hn[a]});
          q[6].matrix += product({&hd[a], &hd[b], &ld[b], &ld[a]});
        }
    }
  for (auto& op : q) {
    op.matrix.prune(cplx(0.0), 1e-15);
    op.matrix.makeCompressed();
  }
  return q;
}

}  // namespace

QuarticSuite assemble_quartics(const FockSpace& space, const HartreeFockSolution& hf, const TorusLattice& lat, double g,
                               BasisForm form) {
  if (space.order != ModeOrder::orbital) throw std::invalid_argument("quartics need orbital mode order");
  if (static_cast<std::size_t>(space.modes) != hf.mode_count())
    throw std::invalid_argument("mode count must equal the number of orbitals");
  QuarticSuite s;
  s.g = g;
  s.form = form;
  if (form == BasisForm::orbital) {
    const auto v = two_body_matrix(hf);
    for (std::size_t i = 0; i < 7; ++i) s.terms[i] = orbital_quartic(space, hf, v, kPatterns[i]);
  } else {
    s.terms = position_quartics(space, hf, lat);
  }
  for (std::size_t i = 0; i < 4; ++i) s.terms[i].hermitian = true;

  std::vector<int> occ, unocc;
  for (int k = 0; k < space.modes; ++k) (hf.is_occupied(static_cast<std::size_t>(k)) ? occ : unocc).push_back(k);
  if (form == BasisForm::orbital) {
    s.n_h = number_operator(space, unocc);
    s.n_l = number_operator(space, occ);
  } else {
    const auto ops = particle_hole_ops(space, hf);
    const auto dim = static_cast<Eigen::Index>(space.dimension);
    s.n_h.matrix.resize(dim, dim);
    s.n_l.matrix.resize(dim, dim);
    for (std::size_t i = 0; i < ops.h_dag_pos.size(); ++i) {
      s.n_h.matrix += SpMat(ops.h_dag_pos[i].matrix * SpMat(ops.h_dag_pos[i].matrix.adjoint()));
      s.n_l.matrix += SpMat(ops.l_dag_pos[i].matrix * SpMat(ops.l_dag_pos[i].matrix.adjoint()));
    }
    s.n_h.matrix.prune(cplx(0.0), 1e-15);
    s.n_l.matrix.prune(cplx(0.0), 1e-15);
    s.n_h.hermitian = s.n_l.hermitian = true;
  }
  s.n.matrix = s.n_h.matrix + s.n_l.matrix;
  s.n.hermitian = true;

  Triplets t;
  for (std::uint64_t w = 0; w < space.dimension; ++w) {
    double e = 0.0;
    for (int k = 0; k < space.modes; ++k)
      if ((w >> k) & 1) e += hf.excitation_energy(static_cast<std::size_t>(k));
    if (e != 0.0) t.emplace_back(static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(w), cplx(e));
  }
  s.t_hf = from_triplets(space, t, true);

  s.q_main.matrix = s.terms[0].matrix + s.terms[1].matrix;
  s.q_main.hermitian = true;
  SparseOperator combo;
  combo.matrix = kQuarticWeights[0] * s.terms[0].matrix;
  for (std::size_t i = 1; i < 7; ++i) combo.matrix += kQuarticWeights[i] * s.terms[i].matrix;
  s.q = real_part(combo);
  s.e_hf_offset = hf_energy_offset(hf, lat);
  return s;
}

SparseOperator assemble_substituted_hamiltonian(const FockSpace& space, const HartreeFockSolution& hf,
                                                const TorusLattice& lat, double g) {
  if (space.order != ModeOrder::orbital) throw std::invalid_argument("substitution needs orbital mode order");
  const auto m = hf.mode_count();
  const CMat tpos = [&] {
    CMat t = CMat::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t x = 0; x < lat.volume(); ++x)
      for (std::size_t y : neighbours(lat, x))
        for (int s = 0; s < 2; ++s) t(spin_index(x, s), spin_index(y, s)) += -0.5;
    return t;
  }();
  const CMat torb = hf.orbital_matrix.adjoint() * tpos * hf.orbital_matrix;
  // c*_k -> h*_k + l_k: a creator for unoccupied k, an annihilator for occupied k
  auto raised = [&](std::size_t k) { return Ladder{static_cast<int>(k), !hf.is_occupied(k)}; };
  auto lowered = [&](std::size_t k) { return Ladder{static_cast<int>(k), hf.is_occupied(k)}; };

  std::vector<Monomial> terms;
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t a = 0; a < m; ++a) {
      const cplx c = torb(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(a));
      if (std::abs(c) < kCoefTol) continue;
      terms.push_back({c, {{raised(k), lowered(a)}}, 2});
    }
  const auto v = two_body_matrix(hf);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
          const cplx c = v[flat(m, j, k, a, b)];
          if (std::abs(c) < kCoefTol) continue;
          terms.push_back({0.5 * g * c, {{raised(k), raised(j), lowered(a), lowered(b)}}, 4});
        }
  Triplets t;
  apply_monomials(space, terms, t);
  return from_triplets(space, t, true);
}

WickReport wick_identity_check(const TorusLattice& lat, double g, int cap) {
  WickReport r;
  r.g = g;
  r.volume = static_cast<int>(lat.volume());
  r.delta = solve_gap(lat, g);
  const auto hf = hf_projector(lat, g, r.delta);
  const auto space = build_fock_space(static_cast<int>(hf.mode_count()), ModeOrder::orbital, cap);
  const auto suite = assemble_quartics(space, hf, lat, g, BasisForm::orbital);
  const auto h = assemble_substituted_hamiltonian(space, hf, lat, g);

  r.e_hf_offset = suite.e_hf_offset;
  r.vacuum_energy = h.matrix.coeff(0, 0).real();
  r.energy_density = hf_energy_density(lat, g, r.delta);
  r.energy_density_half_coupling = hf_energy_density_half_coupling(lat, g, r.delta);
  r.chemical_potential = hf.hartree_shift + hf.fermi_level;

  SparseOperator diff;
  diff.matrix = h.matrix - suite.t_hf.matrix - (0.5 * g) * suite.q.matrix -
                suite.e_hf_offset * identity_operator(space).matrix;
  diff.matrix.prune(cplx(0.0), 1e-14);
  diff.hermitian = true;
  r.residual = operator_norm(diff);

  SparseOperator balanced;
  balanced.matrix = diff.matrix;
  balanced.hermitian = true;
  const SpMat imbalance = suite.n_h.matrix - suite.n_l.matrix;
  for (Eigen::Index row = 0; row < balanced.matrix.outerSize(); ++row)
    for (SpMat::InnerIterator it(balanced.matrix, row); it; ++it)
      if (imbalance.coeff(it.row(), it.row()) != cplx(0.0) || imbalance.coeff(it.col(), it.col()) != cplx(0.0))
        it.valueRef() = 0.0;
  balanced.matrix.prune(cplx(0.0), 0.0);
  r.residual_balanced = balanced.matrix.nonZeros() ? operator_norm(balanced) : 0.0;

  SparseOperator shifted;
  shifted.matrix = diff.matrix - r.chemical_potential * imbalance;
  shifted.matrix.prune(cplx(0.0), 1e-14);
  shifted.hermitian = true;
  r.residual_with_chemical_potential = shifted.matrix.nonZeros() ? operator_norm(shifted) : 0.0;

  auto fit = [&](const SpMat& x) {
    const cplx num = x.conjugate().cwiseProduct(diff.matrix).sum();
    const double den = x.squaredNorm();
    return den > 0 ? num.real() / den : 0.0;
  };
  r.fitted_number_coefficient = fit(imbalance);
  double best = 0.0;
  for (std::size_t i = 0; i < 7; ++i) {
    const SpMat x = (0.5 * g) * real_part(suite.terms[i]).matrix;
    r.coefficient_repair[i] = fit(x);
    SparseOperator rest;
    rest.matrix = diff.matrix - r.coefficient_repair[i] * x;
    rest.hermitian = true;
    r.repaired_residual[i] = operator_norm(rest);
    if (r.best_repair < 0 || r.repaired_residual[i] < best) {
      best = r.repaired_residual[i];
      r.best_repair = static_cast<int>(i);
    }
  }
  return r;
}

}  // namespace hhf
