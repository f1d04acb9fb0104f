#include "hhf/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "hhf/bounds.hpp"
#include "hhf/fock.hpp"
#include "hhf/hartree_fock.hpp"
#include "hhf/linalg.hpp"

namespace hhf {

namespace {

constexpr std::size_t kDenseProjectorVolume = 256;

double max_abs(const SpMat& m) {
  double best = 0.0;
  for (Eigen::Index k = 0; k < m.outerSize(); ++k)
    for (SpMat::InnerIterator it(m, k); it; ++it) best = std::max(best, std::abs(it.value()));
  return best;
}

// Everything built on the orbital Fock space, assembled at most once per run.
struct FockContext {
  TorusLattice lat;
  HartreeFockSolution hf;
  FockSpace space;
  QuarticSuite suite;
};

class Verifier {
 public:
  explicit Verifier(const RunConfig& cfg) : cfg_(cfg), lat_(cfg.d, cfg.L) {
    delta_ = solve_gap(lat_, cfg.g, cfg.gap_tol());
  }

  void run(const std::string& which, VerifyOutcome& out) {
    using Step = void (Verifier::*)(ReportDocument&);
    const std::vector<std::pair<std::string, Step>> steps = {
        {"hf", &Verifier::hf_checks},   {"wick", &Verifier::wick},   {"car", &Verifier::car},
        {"thm1", &Verifier::thm1},      {"thm2", &Verifier::thm2},   {"thm3", &Verifier::thm3},
    };
    Json timings = Json::object();
    for (const auto& [name, step] : steps) {
      if (which != "all" && which != name) continue;
      const auto start = std::chrono::steady_clock::now();
      try {
        (this->*step)(out.doc);
      } catch (const FockCapError& e) {
        out.cap_exceeded = true;
        out.cap_message = e.what();
        out.doc.skip(name, name, e.what());
      }
      timings[name] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    if (cfg_.timings) out.doc.timings = timings;
  }

 private:
  const FockContext& fock() {
    if (!ctx_) {
      const int modes = static_cast<int>(2 * lat_.volume());
      auto space = build_fock_space(modes, ModeOrder::orbital, cfg_.fock_cap);
      auto hf = hf_projector(lat_, cfg_.g, delta_);
      auto suite = assemble_quartics(space, hf, lat_, cfg_.g);
      ctx_ = std::make_unique<FockContext>(FockContext{lat_, std::move(hf), space, std::move(suite)});
    }
    return *ctx_;
  }

  void hf_checks(ReportDocument& doc) {
    const std::string m = "hf";
    const double vol = static_cast<double>(lat_.volume());
    doc.values[m]["delta"] = delta_;
    if (lat_.volume() > kDenseProjectorVolume) {
      doc.skip(m, "hf.projector", "dense projector checks need |Lambda| <= 256");
      return;
    }
    const auto hf = hf_projector(lat_, cfg_.g, delta_);
    const CMat& p = hf.projector;
    doc.add(m, check_le("hf.idempotent", (p * p - p).cwiseAbs().maxCoeff(), 1e-10, 0.0));
    doc.add(m, check_eq("hf.trace", p.trace().real(), vol, 1e-10));
    double diag = 0.0, offdiag = 0.0;
    for (std::size_t x = 0; x < lat_.volume(); ++x) {
      const auto b = site_block(p, x);
      const double s = gauge_sign(lat_, x);
      diag = std::max(diag, std::abs(b(0, 0).real() - (0.5 - s * delta_)));
      diag = std::max(diag, std::abs(b(1, 1).real() - (0.5 + s * delta_)));
      offdiag = std::max({offdiag, std::abs(b(0, 1)), std::abs(b(1, 0))});
    }
    doc.add(m, check_le("hf.diagonal", diag, 1e-10, 0.0));
    doc.add(m, check_le("hf.spin_offdiagonal", offdiag, 1e-10, 0.0));

    const CMat h = one_particle_hamiltonian(lat_, hf.gap);
    double eig = 0.0;
    for (Eigen::Index k = 0; k < hf.orbital_matrix.cols(); ++k) {
      const CVec& v = hf.orbital_matrix.col(k);
      eig = std::max(eig, (h * v - hf.orbitals[static_cast<std::size_t>(k)].energy * v).norm());
    }
    doc.add(m, check_le("hf.eigenpair_residual", eig, 1e-12, 0.0));
    const RMat t = hopping_matrix(lat_);
    const RMat gm = gauge_matrix(lat_);
    doc.add(m, check_le("hf.gauge_flip", (gm * t * gm + t).cwiseAbs().maxCoeff(), 0.0, 0.0));

    const double functional = hf_functional(lat_, cfg_.g, p);
    const double f = free_energy_term(lat_, cfg_.g, delta_ * delta_);
    auto stated = check_eq("hf.functional", functional, vol * (0.5 * cfg_.g + f), 1e-10);
    stated.note = "|Lambda| (g/2 + F_L)";
    doc.add(m, stated);
    auto corrected = check_eq("hf.functional_quarter", functional, vol * (0.25 * cfg_.g + f), 1e-10, "corrected");
    corrected.note = "|Lambda| (g/4 + F_L)";
    doc.add(m, corrected);

    const auto energies = perturbed_energies(lat_, hf, cfg_.perturbations, cfg_.seed);
    double lowest = functional;
    for (double e : energies) lowest = std::min(lowest, e);
    auto minimal = check_ge("hf.perturbations", lowest, functional, 1e-9);
    minimal.note = std::to_string(energies.size()) + " random admissible projectors";
    doc.add(m, minimal);
    doc.values[m]["energy_density"] = hf.energy_density;
    doc.values[m]["functional"] = functional;
  }

  void wick(ReportDocument& doc) {
    const std::string m = "wick";
    const auto w = wick_identity_check(lat_, cfg_.g, cfg_.fock_cap);
    const double tol = cfg_.identity_tol();
    auto lit = check_le("wick.residual", w.residual, tol, 0.0);
    lit.note = "|| H - (E_HF + T_HF + (g/2) Q) || on the full Fock space";
    doc.add(m, lit);
    auto bal = check_le("wick.residual_balanced", w.residual_balanced, tol, 0.0, "corrected");
    bal.note = "restricted to N_h = N_l";
    doc.add(m, bal);
    auto mu = check_le("wick.residual_with_chemical_potential", w.residual_with_chemical_potential, tol, 0.0,
                       "corrected");
    mu.note = "with mu (N_h - N_l), mu = g/2";
    doc.add(m, mu);
    doc.add(m, info("wick.fitted_number_coefficient", w.fitted_number_coefficient, "best alpha in alpha (N_h - N_l)"));
    doc.add(m, info("wick.chemical_potential", w.chemical_potential));
    for (std::size_t i = 0; i < 7; ++i) {
      const std::string q = "wick.repair.q" + std::to_string(i + 1);
      doc.add(m, info(q + ".coefficient", w.coefficient_repair[i], "least-squares rescaling of Re Q"));
      doc.add(m, info(q + ".residual", w.repaired_residual[i]));
    }
    doc.values[m]["best_repair"] = w.best_repair + 1;
    doc.values[m]["best_repair_repairs"] = w.repaired_residual[static_cast<std::size_t>(w.best_repair)] < tol;
    const double vol = w.volume;
    doc.add(m, check_eq("wick.vacuum_energy", w.vacuum_energy, vol * w.energy_density_half_coupling, 1e-10));
    doc.add(m, check_eq("wick.vacuum_energy_quarter", w.vacuum_energy, vol * w.energy_density, 1e-10, "corrected"));
    doc.add(m, check_eq("wick.offset", w.e_hf_offset, w.vacuum_energy, 1e-10, "corrected"));
  }

  void car(ReportDocument& doc) {
    const std::string m = "car";
    const int small = std::min(6, static_cast<int>(2 * lat_.volume()));
    const auto sp = build_fock_space(small, ModeOrder::position, kHardFockCap);
    double worst = 0.0;
    for (int i = 0; i < small; ++i)
      for (int j = 0; j < small; ++j) {
        const SpMat ci = annihilation(sp, i).matrix, cj = annihilation(sp, j).matrix;
        const SpMat cdj = creation(sp, j).matrix;
        SpMat mixed = ci * cdj + cdj * ci;
        if (i == j) mixed -= identity_operator(sp).matrix;
        worst = std::max({worst, max_abs(mixed), max_abs(SpMat(ci * cj + cj * ci))});
      }
    doc.add(m, check_le("car.anticommutators", worst, 0.0, 0.0));

    const auto& c = fock();
    const double tol = 1e-10;
    doc.add(m, check_ge("car.q1_psd", min_eigenvalue(c.suite.terms[0]), -tol, 0.0));
    doc.add(m, check_ge("car.q2_psd", min_eigenvalue(c.suite.terms[1]), -tol, 0.0));
    for (std::size_t i = 0; i < 7; ++i) {
      const SpMat& q = c.suite.terms[i].matrix;
      const SpMat& n = c.suite.n.matrix;
      const SpMat comm = SpMat(n * q) - SpMat(q * n) - kQuarticGrading[i] * q;
      doc.add(m, check_le("car.grading.q" + std::to_string(i + 1), max_abs(comm), 1e-10, 0.0));
    }
    const auto pos = assemble_quartics(c.space, c.hf, c.lat, cfg_.g, BasisForm::position);
    for (std::size_t i = 0; i < 7; ++i)
      doc.add(m, check_le("car.basis_agreement.q" + std::to_string(i + 1),
                          max_abs(SpMat(pos.terms[i].matrix - c.suite.terms[i].matrix)), 1e-10, 0.0));
    SparseOperator shifted;
    shifted.matrix = c.suite.t_hf.matrix - (cfg_.g * delta_) * c.suite.n.matrix;
    shifted.hermitian = true;
    doc.add(m, check_ge("car.kinetic_gap", min_eigenvalue(shifted), -tol, 0.0));
  }

  void thm1(ReportDocument& doc) {
    const auto& c = fock();
    doc.add("thm1", thm1_report(c.suite, c.hf, c.lat));
  }

  void thm2(ReportDocument& doc) {
    const std::string m = "thm2";
    const auto& c = fock();
    const auto q = q7_norm_three_ways(c.suite, c.hf, c.lat, cfg_.g);
    auto closed = check_eq("q7.closed_form", q.brute, q.closed, 1e-9);
    closed.note = "(1 - 4 delta^2) |Lambda| against the Fock-space inner product";
    doc.add(m, closed);
    doc.add(m, check_eq("q7.exact_form", q.brute, q.exact, 1e-9, "corrected"));
    CheckRecord pref{"q7.prefactor", "claim", "in", static_cast<double>(q.resolved_prefactor), 0.0, 0.0,
                     q.resolved_prefactor != 0, "c in {1,2,4} with ||Q7 Omega||^2 = c Tr[v QQ v PP]"};
    doc.add(m, pref);
    doc.add(m, info("q7.brute", q.brute));
    doc.add(m, info("q7.trace", q.trace));
    doc.values[m]["resolved_prefactor"] = q.resolved_prefactor;
    doc.add(m, thm2_report(c.suite, c.hf, c.lat, cfg_.epsilon, q.resolved_prefactor));
  }

  void thm3(ReportDocument& doc) { doc.add("thm3", thm3_check(lat_, cfg_.g)); }

  const RunConfig& cfg_;
  TorusLattice lat_;
  double delta_ = 0.0;
  std::unique_ptr<FockContext> ctx_;
};

}  // namespace

void validate(const RunConfig& cfg) {
  if (cfg.d < 1) throw ConfigError("d must be at least 1");
  if (cfg.L < 4 || cfg.L % 4 != 0) throw ConfigError("L must be a multiple of 4");
  for (int L : cfg.lengths)
    if (L < 4 || L % 4 != 0) throw ConfigError("L must be a multiple of 4");
  if (!(cfg.g > 0.0) || !std::isfinite(cfg.g)) throw ConfigError("g > 0 required");
  if (!(cfg.epsilon > 0.0 && cfg.epsilon <= 0.5)) throw ConfigError("epsilon must lie in (0, 1/2]");
  if (cfg.fock_cap < 1 || cfg.fock_cap > kHardFockCap)
    throw ConfigError("fock cap must lie in [1, " + std::to_string(kHardFockCap) + "]");
  if (cfg.tol && !(*cfg.tol > 0.0)) throw ConfigError("tol must be positive");
  if (!cfg.format.empty() && cfg.format != "json" && cfg.format != "csv")
    throw ConfigError("format must be json or csv");
}

Json config_json(const RunConfig& cfg) {
  Json j;
  j["d"] = cfg.d;
  j["L"] = cfg.L;
  if (!cfg.lengths.empty()) j["lengths"] = cfg.lengths;
  j["g"] = cfg.g;
  j["gap_tol"] = cfg.gap_tol();
  j["identity_tol"] = cfg.identity_tol();
  j["epsilon"] = cfg.epsilon;
  j["fock_cap"] = cfg.fock_cap;
  j["seed"] = cfg.seed;
  return j;
}

ReportDocument cmd_gap(const RunConfig& cfg) {
  validate(cfg);
  const auto lat = build_torus(cfg.d, cfg.L);
  const auto sol = solve_gap_detailed(lat, cfg.g, cfg.gap_tol());
  const auto a = lower_bound_constant_a(lat, cfg.g);
  ReportDocument doc;
  doc.config = config_json(cfg);
  Json& v = doc.values["gap"];
  v["delta"] = sol.delta;
  v["residual"] = sol.residual;
  v["r"] = cfg.g * sol.delta;
  v["energy_density"] = hf_energy_density(lat, cfg.g, sol.delta);
  v["energy_density_half_coupling"] = hf_energy_density_half_coupling(lat, cfg.g, sol.delta);
  v["a_half_coupling"] = a.a_half_coupling;
  v["a_full_coupling"] = a.a_full_coupling;
  v["one_minus_4delta2"] = 1.0 - 4.0 * sol.delta * sol.delta;
  doc.add("gap", check_le("gap.residual", std::abs(sol.residual), cfg.gap_tol(), 0.0));
  return doc;
}

VerifyOutcome cmd_verify(const RunConfig& cfg, const std::string& which) {
  validate(cfg);
  static const std::vector<std::string> kinds = {"wick", "thm1", "thm2", "thm3", "car", "hf", "all"};
  if (std::find(kinds.begin(), kinds.end(), which) == kinds.end())
    throw ConfigError("unknown verification '" + which + "'");
  VerifyOutcome out;
  out.doc.config = config_json(cfg);
  out.doc.config["which"] = which;
  Verifier(cfg).run(which, out);
  return out;
}

SweepResult cmd_sweep(const RunConfig& cfg) {
  validate(cfg);
  if (cfg.lengths.empty()) throw ConfigError("length list is empty");
  return extensivity_sweep(cfg.d, cfg.lengths, cfg.g);
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hartree-Fock verification for the half-filled Hubbard model on the torus"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string out_path;
  std::string which = "all";
  double tol = 0.0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--dim", cfg.d, "spatial dimension d");
    sub->add_option("--coupling", cfg.g, "on-site coupling g");
    sub->add_option("--tol", tol, "tolerance (default 1e-12 gap, 1e-9 identities)");
    sub->add_option("--format", cfg.format, "json | csv");
    sub->add_option("--seed", cfg.seed, "seed for randomised checks");
    sub->add_option("--out", out_path, "write the report to FILE");
    sub->add_flag("--timings", cfg.timings, "include wall-clock timings in the report");
  };
  auto* gap = app.add_subcommand("gap", "solve the gap equation");
  common(gap);
  gap->add_option("--length", cfg.L, "side length L");
  auto* verify = app.add_subcommand("verify", "run identity and bound checks");
  common(verify);
  verify->add_option("--length", cfg.L, "side length L");
  verify->add_option("--epsilon", cfg.epsilon, "trial-state parameter in (0, 1/2]");
  verify->add_option("--fock-cap", cfg.fock_cap, "maximal number of Fock modes");
  verify->add_option("--perturbations", cfg.perturbations, "random projectors for the minimality check");
  verify->add_option("which", which, "wick | thm1 | thm2 | thm3 | car | hf | all");
  auto* sweep = app.add_subcommand("sweep", "extensivity table of ||Q7 Omega||^2 / |Lambda|");
  common(sweep);
  sweep->add_option("--lengths", cfg.lengths, "comma-separated side lengths")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitInvalidConfig;
  }
  if (tol != 0.0) cfg.tol = tol;
  if (sweep->parsed() && !cfg.lengths.empty()) cfg.L = cfg.lengths.front();
  if (cfg.g > 2.0)
    err << "warning: g > 2; the bounds are stated for coupling 2 and claimed uniform only for 0 < g <= 2\n";

  std::string text;
  int code = kExitPass;
  try {
    if (gap->parsed()) {
      const auto doc = cmd_gap(cfg);
      text = cfg.format == "csv" ? checks_csv(doc) : to_json(doc).dump(2) + "\n";
      code = doc.passed() ? kExitPass : kExitSolverFailure;
    } else if (verify->parsed()) {
      const auto res = cmd_verify(cfg, which);
      text = cfg.format == "csv" ? checks_csv(res.doc) : to_json(res.doc).dump(2) + "\n";
      code = res.exit_code();
      if (res.cap_exceeded) err << "error: " << res.cap_message << "\n";
      for (const auto& name : res.doc.failing()) err << "FAIL " << name << "\n";
    } else {
      const auto res = cmd_sweep(cfg);
      if (cfg.format == "json") {
        Json j;
        j["version"] = kVersion;
        j["config"] = config_json(cfg);
        j["lower_bound_holds"] = res.lower_bound_holds;
        j["floor_positive"] = res.floor_positive;
        j["converging"] = res.converging;
        j["rows"] = Json::array();
        for (const auto& r : res.rows)
          j["rows"].push_back({{"L", r.L}, {"delta", r.delta}, {"q7_per_vol", r.q7_per_vol}, {"a_half", r.a_half},
                               {"passed", r.passed}, {"closed_per_vol", r.closed_per_vol}, {"floor", r.floor}});
        text = j.dump(2) + "\n";
      } else {
        text = sweep_csv(res);
      }
      code = res.lower_bound_holds ? kExitPass : kExitFail;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const FockCapError& e) {
    err << "error: " << e.what() << "\n";
    return kExitCapExceeded;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const std::exception& e) {
    err << "solver failure: " << e.what() << "\n";
    return kExitSolverFailure;
  }

  if (out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
      err << "error: cannot open " << out_path << "\n";
      return kExitInvalidConfig;
    }
    f << text;
  }
  return code;
}

}  // namespace hhf
