// Acceptance criteria 1-9. One line per criterion; lines tagged "corrected"
// evaluate the repaired statement next to a claim that fails as written and
// do not affect the exit status.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "hhf/bounds.hpp"
#include "hhf/fock.hpp"
#include "hhf/hartree_fock.hpp"
#include "hhf/linalg.hpp"

using namespace hhf;

namespace {

using clk = std::chrono::steady_clock;

double seconds_since(clk::time_point t) { return std::chrono::duration<double>(clk::now() - t).count(); }

int failures = 0;

void line(const char* id, bool ok, const std::string& what, const std::string& detail, bool counts = true) {
  std::printf("[%s] criterion %s: %s -- %s\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (counts && !ok) ++failures;
}

template <class... A>
std::string fmt(const char* f, A... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

double max_abs(const SpMat& m) {
  double best = 0.0;
  for (Eigen::Index k = 0; k < m.outerSize(); ++k)
    for (SpMat::InnerIterator it(m, k); it; ++it) best = std::max(best, std::abs(it.value()));
  return best;
}

void criterion1() {
  bool ok = true;
  double worst_res = 0.0, worst_time = 0.0;
  for (int d : {1, 2, 3})
    for (int L : {4, 8, 16})
      for (double g : {0.5, 1.0, 2.0}) {
        const auto t = clk::now();
        const auto lat = build_torus(d, L);
        const auto sol = solve_gap_detailed(lat, g);
        const double dt = seconds_since(t);
        const double res = std::abs(gap_residual(lat, g, sol.delta));
        worst_res = std::max(worst_res, res);
        worst_time = std::max(worst_time, dt);
        ok = ok && sol.delta > 0.0 && sol.delta < 0.5 && res < 1e-12 && dt < 1.0;
      }
  line("1", ok, "gap equation on 27 points", fmt("max |residual| %.2e, slowest point %.3f s", worst_res, worst_time));
}

void criterion2() {
  bool ok = true;
  double idem = 0.0, trace = 0.0, diag = 0.0;
  int points = 0;
  for (int d : {1, 2, 3})
    for (int L : {4, 8, 16})
      for (double g : {0.5, 1.0, 2.0}) {
        const auto lat = build_torus(d, L);
        if (lat.volume() > 256) continue;
        ++points;
        const double D = solve_gap(lat, g);
        const auto hf = hf_projector(lat, g, D);
        const CMat& p = hf.projector;
        idem = std::max(idem, (p * p - p).cwiseAbs().maxCoeff());
        trace = std::max(trace, std::abs(p.trace().real() - static_cast<double>(lat.volume())));
        for (std::size_t x = 0; x < lat.volume(); ++x) {
          const auto b = site_block(p, x);
          const double s = gauge_sign(lat, x);
          diag = std::max({diag, std::abs(b(0, 0).real() - (0.5 - s * D)), std::abs(b(1, 1).real() - (0.5 + s * D)),
                           std::abs(b(0, 1)), std::abs(b(1, 0))});
        }
      }
  ok = idem < 1e-10 && trace < 1e-10 && diag < 1e-10;
  line("2", ok, fmt("projector identities on %d points", points),
       fmt("|P^2-P| %.1e, |Tr P - V| %.1e, diagonal %.1e", idem, trace, diag));
}

void criterion3() {
  const auto t = clk::now();
  const auto lat = build_torus(1, 4);
  bool lit = true, fixed = true;
  std::string detail, fix;
  for (double g : {0.5, 1.0, 2.0}) {
    const auto w = wick_identity_check(lat, g);
    lit = lit && w.residual < 1e-9;
    fixed = fixed && w.residual_with_chemical_potential < 1e-9 && w.residual_balanced < 1e-9;
    detail += fmt("g=%.1f residual %.3g (best single Q%d rescale %.3g -> %.3g); ", g, w.residual, w.best_repair + 1,
                  w.coefficient_repair[static_cast<std::size_t>(w.best_repair)],
                  w.repaired_residual[static_cast<std::size_t>(w.best_repair)]);
    fix += fmt("g=%.1f: %.1e / N_h=N_l %.1e, fitted mu %.6f; ", g, w.residual_with_chemical_potential,
               w.residual_balanced, w.fitted_number_coefficient);
  }
  const double dt = seconds_since(t);
  line("3", lit && dt < 30.0, "Wick identity, full Fock space", detail + fmt("%.1f s", dt));
  line("3 corrected", fixed, "Wick identity with (g/2)(N_h - N_l) added", fix, false);
}

struct Instance {
  int L;
  double g;
  TorusLattice lat;
  HartreeFockSolution hf;
  QuarticSuite suite;
};

Instance make_instance(int L, double g) {
  auto lat = build_torus(1, L);
  auto hf = hf_projector(lat, g, solve_gap(lat, g));
  const auto sp = build_fock_space(2 * L, ModeOrder::orbital);
  auto suite = assemble_quartics(sp, hf, lat, g);
  return {L, g, lat, std::move(hf), std::move(suite)};
}

struct Tally {
  bool ok = true;
  std::string detail;
};

void criteria_4_to_6() {
  Tally c4, c4x, c5, c6, c6x;
  std::vector<int> prefactors;
  const auto t5 = clk::now();
  double t5_total = 0.0;
  for (int L : {4, 8})
    for (double g : {1.0, 2.0}) {
      const auto in = make_instance(L, g);
      const auto tag = fmt("L=%d g=%.0f", L, g);

      const auto q = q7_norm_three_ways(in.suite, in.hf, in.lat, g);
      prefactors.push_back(q.resolved_prefactor);
      c4.ok = c4.ok && q.closed_relative_error < 1e-9 && q.resolved_prefactor != 0;
      c4.detail += fmt("%s brute %.10g closed %.10g c=%d; ", tag.c_str(), q.brute, q.closed, q.resolved_prefactor);
      c4x.ok = c4x.ok && q.exact_relative_error < 1e-9;
      c4x.detail += fmt("%s rel.err %.1e; ", tag.c_str(), q.exact_relative_error);

      const auto s = clk::now();
      const auto r1 = thm1_report(in.suite, in.hf, in.lat);
      t5_total += seconds_since(s);
      c5.ok = c5.ok && r1.passed();
      c5.detail += fmt("%s w3 %.4f w4 %.4f w5 %.4f w6 %.4f; ", tag.c_str(), r1.find("thm1.q3.radius")->measured,
                       r1.find("thm1.q4.radius")->measured, r1.find("thm1.q5.radius")->measured,
                       r1.find("thm1.q6.radius")->measured);

      for (double eps : {1e-3, 0.25, 0.5}) {
        const auto r2 = thm2_report(in.suite, in.hf, in.lat, eps, q.resolved_prefactor);
        for (const char* name : {"thm2.re_q7", "thm2.number", "thm2.kinetic", "thm2.main", "thm2.trace_q1",
                                 "thm2.trace_q2"}) {
          const auto* rec = r2.find(name);
          if (!rec->passed) {
            c6.ok = false;
            c6.detail += fmt("%s eps=%g %s: %.6g vs %.6g; ", tag.c_str(), eps, name, rec->measured, rec->bound);
          }
        }
        for (const char* name : {"thm2.re_q7_exact", "thm2.number", "thm2.kinetic_hf", "thm2.main",
                                 "thm2.vacuum_chain", "thm2.trace_q1", "thm2.trace_q2"})
          c6x.ok = c6x.ok && r2.find(name)->passed;
      }
    }
  bool same = true;
  for (int c : prefactors) same = same && c == prefactors.front();
  c4.ok = c4.ok && same;
  line("4", c4.ok, "three-way ||Q7 Omega||^2 (closed form vs brute force, trace prefactor)", c4.detail);
  line("4 corrected", c4x.ok && same,
       fmt("exact momentum-space value vs brute force; trace prefactor %d on every instance", prefactors.front()),
       c4x.detail, false);
  line("5", c5.ok, "sandwiched numerical radii and Q Omega = 0", c5.detail + fmt("radii %.1f s", t5_total));
  (void)t5;
  if (c6.detail.empty()) c6.detail = "all records hold";
  line("6", c6.ok, "trial-state expectations", c6.detail);
  line("6 corrected", c6x.ok,
       "<Re Q7> = eps sqrt(1-eps^2) ||Q7 Omega||, <T_HF> <= 4 eps^2 max omega_k, remaining records unchanged",
       c6x.ok ? "all records hold" : "see report", false);
}

void criterion7() {
  const auto t = clk::now();
  bool closed_ok = true, floor_ok = true, q7_ok = true, ext_ok = true;
  int points = 0, q7_fail = 0;
  double worst_gap = 1e300, min_density = 1e300;
  for (int d : {1, 2, 3})
    for (double g : {0.5, 1.0, 2.0}) {
      std::vector<int> lengths;
      for (int L = 4; L <= 64; L += 4) lengths.push_back(L);
      for (int L : lengths) {
        const auto lat = build_torus(d, L);
        const double D = solve_gap(lat, g);
        const auto a = lower_bound_constant_a(lat, g);
        const double eps = 1.0 - 4.0 * D * D;
        const bool half = eps >= 0.5 * a.a_half_coupling;
        const double a_used = half ? a.a_half_coupling : a.a_full_coupling;
        const double q7 = q7_norm_per_volume(lat, g, D);
        ++points;
        closed_ok = closed_ok && eps >= 0.5 * a_used;
        floor_ok = floor_ok && a_used >= a.floor;
        if (q7 < 0.5 * a_used) {
          q7_ok = false;
          ++q7_fail;
        }
        worst_gap = std::min(worst_gap, q7 / (0.5 * a_used));
        ext_ok = ext_ok && q7 >= 0.25 * eps * eps - 1e-15 && eps > 0.0;
        min_density = std::min(min_density, q7);
      }
    }
  const double dt = seconds_since(t);
  line("7", closed_ok && floor_ok && q7_ok && dt < 60.0, fmt("extensivity sweep over %d points", points),
       fmt("1-4D^2 >= a/2: %s; a >= floor: %s; ||Q7 Omega||^2/V >= a/2 fails at %d points (min ratio %.3f); %.1f s",
           closed_ok ? "yes" : "no", floor_ok ? "yes" : "no", q7_fail, worst_gap, dt));
  line("7 corrected", ext_ok && min_density > 0.0,
       "||Q7 Omega||^2/V >= (1-4D^2)^2/4 > 0 at every point (extensive, no uniform relative bound)",
       fmt("smallest density %.4g", min_density), false);
}

void criterion8() {
  bool lit = true, fixed = true, others = true;
  std::string detail;
  for (int L : {4, 8})
    for (double g : {1.0, 2.0}) {
      const auto lat = build_torus(1, L);
      const double D = solve_gap(lat, g);
      const auto hf = hf_projector(lat, g, D);
      const double e = hf_functional(lat, g, hf.projector);
      const double f = free_energy_term(lat, g, D * D);
      const double vol = L;
      const double stated = vol * (0.5 * g + f);
      lit = lit && std::abs(e - stated) <= 1e-10 * std::max(1.0, std::abs(stated));
      fixed = fixed && std::abs(e - vol * (0.25 * g + f)) <= 1e-10 * std::max(1.0, std::abs(e));
      const auto es = perturbed_energies(lat, hf, 200, 1);
      double low = 1e300;
      for (double x : es) low = std::min(low, x);
      const CMat h = one_particle_hamiltonian(lat, hf.gap);
      double eig = 0.0;
      for (Eigen::Index k = 0; k < hf.orbital_matrix.cols(); ++k)
        eig = std::max(eig, (h * hf.orbital_matrix.col(k) -
                             hf.orbitals[static_cast<std::size_t>(k)].energy * hf.orbital_matrix.col(k))
                                .norm());
      const RMat t = hopping_matrix(lat), gm = gauge_matrix(lat);
      const double flip = (gm * t * gm + t).cwiseAbs().maxCoeff();
      others = others && low >= e - 1e-9 && eig < 1e-12 && flip == 0.0;
      detail += fmt("L=%d g=%.0f E %.12f vs V(g/2+F) %.12f, min perturbed - E %.2e, eig %.1e, GTG+T %.0e; ", L, g, e,
                    stated, low - e, eig, flip);
    }
  line("8", lit && others, "Hartree-Fock functional, minimality, eigenpairs, gauge", detail);
  line("8 corrected", fixed && others, "functional equals V(g/4 + F_L) with the other clauses unchanged",
       fixed ? "holds to 1e-10" : "fails", false);
}

void criterion9() {
  bool car = true;
  for (int m = 1; m <= 6; ++m) {
    const auto sp = build_fock_space(m, ModeOrder::position);
    const SpMat id = identity_operator(sp).matrix;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const SpMat ci = annihilation(sp, i).matrix, cj = annihilation(sp, j).matrix, dj = creation(sp, j).matrix;
        SpMat mixed = ci * dj + dj * ci;
        if (i == j) mixed -= id;
        car = car && max_abs(mixed) == 0.0 && max_abs(SpMat(ci * cj + cj * ci)) == 0.0;
      }
  }
  bool psd = true, grading = true, agree = true, kin = true;
  double min_q = 1e300, worst_agree = 0.0;
  for (double g : {0.5, 1.0, 2.0}) {
    const auto in = make_instance(4, g);
    const auto& s = in.suite;
    const double m1 = min_eigenvalue(s.terms[0]), m2 = min_eigenvalue(s.terms[1]);
    min_q = std::min({min_q, m1, m2});
    psd = psd && m1 >= -1e-10 && m2 >= -1e-10;
    for (std::size_t i = 0; i < 7; ++i) {
      const SpMat comm = SpMat(s.n.matrix * s.terms[i].matrix) - SpMat(s.terms[i].matrix * s.n.matrix) -
                         kQuarticGrading[i] * s.terms[i].matrix;
      grading = grading && max_abs(comm) < 1e-10;
    }
    const auto sp = build_fock_space(8, ModeOrder::orbital);
    const auto pos = assemble_quartics(sp, in.hf, in.lat, g, BasisForm::position);
    for (std::size_t i = 0; i < 7; ++i) worst_agree = std::max(worst_agree, max_abs(SpMat(pos.terms[i].matrix - s.terms[i].matrix)));
    agree = agree && worst_agree < 1e-10;
    SparseOperator shifted;
    shifted.matrix = s.t_hf.matrix - (g * in.hf.delta) * s.n.matrix;
    shifted.hermitian = true;
    kin = kin && min_eigenvalue(shifted) >= -1e-10;
  }
  line("9", car && psd && grading && agree && kin, "property suites",
       fmt("CAR exact: %s; min eig Q1,Q2 %.1e; grading (0,0,0,0,2,-2,4): %s; bases agree to %.1e; T_HF - g D N >= 0: %s",
           car ? "yes" : "no", min_q, grading ? "yes" : "no", worst_agree, kin ? "yes" : "no"));
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criteria_4_to_6();
  criterion7();
  criterion8();
  criterion9();
  std::printf("%d criteria failed as stated\n", failures);
  return failures == 0 ? 0 : 1;
}
