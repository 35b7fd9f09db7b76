#include "specwave/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <random>

#include "json.hpp"
#include "specwave/csv.hpp"
#include "specwave/errors.hpp"
#include "specwave/transform.hpp"

namespace specwave {

namespace {

namespace fs = std::filesystem;

EigenSystem build_system(const ExperimentConfig& cfg) {
  Grid1D grid = build_grid(cfg.radius, cfg.n_points);
  auto A = assemble_operator(grid, cfg.make_potential(), cfg.fd_order);
  return compute_eigensystem(A, cfg.m_modes);
}

void summarize(RunReport& rep, const EigenSystem& E) {
  rep.m_modes = E.size();
  rep.weight_min = E.modes.front().weight;
  rep.weight_max = E.modes.back().weight;
  rep.biorth_residual = E.biorth_residual;
  rep.shift_c = E.shift_c;
  for (const auto& m : E.modes) rep.max_residual = std::max(rep.max_residual, m.residual);
}

// Deterministic uniform doubles in [-1, 1]; hand-rolled mapping so the byte
// output does not depend on the standard library's distribution.
class Rng {
 public:
  explicit Rng(unsigned long long seed) : gen_(seed) {}
  double sym() { return 2.0 * (gen_() >> 11) * 0x1.0p-53 - 1.0; }

 private:
  std::mt19937_64 gen_;
};

void run_spectrum(const ExperimentConfig& cfg, const std::string& out, RunReport& rep) {
  EigenSystem E = build_system(cfg);
  summarize(rep, E);
  CsvWriter csv({"xi", "re_lambda", "im_lambda", "abs_lambda", "weight", "residual"});
  for (int xi = 0; xi < E.size(); ++xi) {
    const auto& m = E.modes[xi];
    csv.begin_row().add(xi).add(m.lambda.real()).add(m.lambda.imag()).add(m.abs_lambda)
        .add(m.weight).add(m.residual);
  }
  csv.write(out + "/eigenvalues.csv");
  rep.verdicts.push_back({"eigensystem", true,
                          "biorth residual " + CsvWriter::format_double(E.biorth_residual)});

  if (!cfg.refinements.empty()) {
    std::vector<int> levels = cfg.refinements;
    levels.push_back(cfg.n_points);
    auto srep = verify_discreteness(cfg.make_potential(), cfg.radius, levels,
                                    cfg.m_modes, cfg.fd_order);
    CsvWriter dcsv({"xi", "drift_last", "gap", "flagged"});
    for (int xi = 0; xi < cfg.m_modes; ++xi) {
      bool fl = std::find(srep.flagged.begin(), srep.flagged.end(), xi) != srep.flagged.end();
      dcsv.begin_row().add(xi).add(srep.drift.back()[xi]).add(srep.gaps[xi]).add(fl ? 1 : 0);
    }
    dcsv.write(out + "/spectral_stability.csv");
    rep.verdicts.push_back({"spectral_stability", srep.flagged.empty(),
                            srep.flagged.empty() ? "no drifting modes"
                                                 : std::to_string(srep.flagged.size()) +
                                                       " modes exceed gap/10 drift"});
  }
}

void run_transform_check(const ExperimentConfig& cfg, const std::string& out,
                         RunReport& rep) {
  EigenSystem E = build_system(cfg);
  summarize(rep, E);
  Rng rng(cfg.seed);
  const int M = E.size();
  double worst_round = 0.0, worst_parseval = 0.0;
  CsvWriter csv({"sample", "roundtrip_rel", "parseval_rel"});
  for (int it = 0; it < cfg.transform_samples; ++it) {
    // Random function in the resolved span.
    std::vector<std::complex<double>> coef(M);
    for (int k = 0; k < M; ++k) coef[k] = {rng.sym(), rng.sym()};
    SpectralCoeffs c;
    c.system = &E;
    c.fhat = coef;
    c.fhat_star.assign(M, {0.0, 0.0});
    GridFunction f = inverse(c, E);
    SpectralCoeffs fwd = forward(f, E);
    GridFunction back = inverse(fwd, E);
    double num = 0.0, den = 0.0;
    for (int j = 0; j < f.grid.n_interior(); ++j) {
      num += std::norm(back.values[j] - f.values[j]);
      den += std::norm(f.values[j]);
    }
    double roundtrip = std::sqrt(num / den);
    double n2 = norm_l2(f.grid, f.values);
    std::complex<double> pair = parseval_pairing(fwd, fwd);
    double parseval = std::abs(pair.real() - n2 * n2) / (n2 * n2);
    worst_round = std::max(worst_round, roundtrip);
    worst_parseval = std::max(worst_parseval, parseval);
    csv.begin_row().add(it).add(roundtrip).add(parseval);
  }
  csv.write(out + "/transform_check.csv");
  rep.verdicts.push_back({"roundtrip", worst_round <= 1e-10,
                          "worst " + CsvWriter::format_double(worst_round)});
  rep.verdicts.push_back({"parseval", worst_parseval <= 1e-10,
                          "worst " + CsvWriter::format_double(worst_parseval)});
}

void write_trace_csv(const std::string& path, const ModeTrace& tr) {
  CsvWriter csv({"t", "re_v1", "im_v1", "re_v2", "im_v2", "energy"});
  for (size_t j = 0; j < tr.states.size(); ++j) {
    csv.begin_row().add(tr.t[j]).add(tr.states[j](0)).add(tr.states[j](1))
        .add(j < tr.energy.size() ? tr.energy[j] : 0.0);
  }
  csv.write(path);
}

void run_solve(const ExperimentConfig& cfg, const std::string& out, RunReport& rep) {
  EigenSystem E = build_system(cfg);
  summarize(rep, E);
  ModeData data = cfg.make_data(E);
  cfg.profile.validate();

  double sup_sqrt_a = std::sqrt(std::max(sup_abs(cfg.profile.a, cfg.profile.T), 0.0));
  int n = 0;
  for (int xi = 0; xi < E.size(); ++xi)
    n = std::max(n, mode_step_count(cfg.profile.T, E.weight(xi), sup_sqrt_a));

  bool any_blowup = false;
  CsvWriter norms({"xi", "sup_abs_v", "final_energy", "blew_up"});
  for (int xi = 0; xi < E.size(); ++xi) {
    ModeSystem sys = assemble_mode_system(E, xi, cfg.profile, data, n);
    ModeTrace tr = integrate_mode(sys, data.initial_state(xi, E.weight(xi)));
    if (!tr.blew_up) energy_trace(tr, sys, EnergyKind::SymmetriserS);
    any_blowup |= tr.blew_up;
    double supv = 0.0;
    for (const auto& st : tr.states) supv = std::max(supv, st.norm());
    char name[64];
    std::snprintf(name, sizeof(name), "/mode_%03d.csv", xi);
    write_trace_csv(out + name, tr);
    norms.begin_row().add(xi).add(supv)
        .add(tr.energy.empty() ? 0.0 : tr.energy.back()).add(tr.blew_up ? 1 : 0);
  }
  norms.write(out + "/mode_summary.csv");
  rep.verdicts.push_back({"solve", !any_blowup, any_blowup ? "blow-up flagged" : "completed"});
  if (any_blowup) rep.exit_code = kExitBlowup;
}

void write_bound_report(const BoundReport& br, const std::string& out) {
  CsvWriter csv({"block", "mode", "margin"});
  for (const auto& b : br.blocks)
    for (size_t i = 0; i < b.values.size(); ++i)
      csv.begin_row().add(b.label).add(b.modes[i]).add(b.values[i]);
  csv.write(out + "/margins.csv");
  CsvWriter ccsv({"constant", "value"});
  for (const auto& [k, v] : br.constants) ccsv.begin_row().add(k).add(v);
  ccsv.write(out + "/constants.csv");
}

void run_verify(const ExperimentConfig& cfg, const std::string& out, RunReport& rep) {
  EigenSystem E = build_system(cfg);
  summarize(rep, E);
  ModeData data = cfg.make_data(E);
  BoundReport br;
  switch (cfg.case_id) {
    case 1: br = verify_case1(E, cfg.profile, data, cfg.s); break;
    case 2: br = verify_case2(E, cfg.profile, data, cfg.s); break;
    case 3: br = verify_case3(E, cfg.profile, data, cfg.s); break;
    case 4: br = verify_case4(E, cfg.profile, data, cfg.s); break;
    default: throw PreconditionError("verify: case must be 1..4");
  }
  write_bound_report(br, out);
  std::string detail = "worst margin " + CsvWriter::format_double(br.worst_margin) +
                       " in " + br.worst_block;
  if (!br.scope_note.empty()) detail += "; " + br.scope_note;
  rep.verdicts.push_back({"case" + std::to_string(cfg.case_id), br.pass, detail});
  if (!br.pass) rep.exit_code = kExitVerdictFailure;
}

void run_veryweak(const ExperimentConfig& cfg, const std::string& out, RunReport& rep) {
  EigenSystem E = build_system(cfg);
  summarize(rep, E);
  ModeData data = cfg.make_data(E);
  std::vector<double> eps = cfg.eps_grid();
  Mollifier moll(2048, ScaleRule::identity());
  const auto& vw = cfg.veryweak;

  if (vw.experiment == "existence") {
    // Coefficient-net structure slopes with omega(eps) = eps.
    CalibratedScale cal = calibrate_scale(cfg.profile, moll);
    StructureSlopes sl = coefficient_net_slopes(cfg.profile.a, cfg.profile.T, moll, eps);
    bool k0_ok = std::abs(sl.slope_k0 - (-static_cast<double>(cal.L1))) <= 0.05;
    bool k1_ok = std::abs(sl.slope_k1 - (-static_cast<double>(cal.L1 + 1))) <= 0.05;
    rep.verdicts.push_back({"coeff_slope_k0", k0_ok,
                            "slope " + CsvWriter::format_double(sl.slope_k0) +
                                " vs -" + std::to_string(cal.L1)});
    rep.verdicts.push_back({"coeff_slope_k1", k1_ok,
                            "slope " + CsvWriter::format_double(sl.slope_k1) +
                                " vs -" + std::to_string(cal.L1 + 1)});

    Mollifier sol_moll(2048, cfg.make_rule(moll));
    SolutionNet net = solve_net(E, cfg.profile, sol_moll, data, cfg.s, eps);
    CsvWriter csv({"eps", "width", "norm_v", "norm_dv", "blew_up"});
    for (size_t i = 0; i < eps.size(); ++i)
      csv.begin_row().add(eps[i]).add(net.widths[i]).add(net.norm_v[i])
          .add(net.norm_dv[i]).add(net.blew_up[i] ? 1 : 0);
    csv.write(out + "/net_norms.csv");
    bool blew = std::any_of(net.blew_up.begin(), net.blew_up.end(), [](bool b) { return b; });
    NetClassification cls = classify_net(eps, net.norm_v, vw.q_max);
    bool moderate = cls.kind == NetClassification::Kind::Moderate ||
                    cls.kind == NetClassification::Kind::Negligible;
    rep.verdicts.push_back({"solution_moderate", moderate && !blew,
                            cls.kind_name() + " (slope " +
                                CsvWriter::format_double(cls.slope) + ", N=" +
                                std::to_string(cls.N) + ", L=" + std::to_string(cal.L) + ")"});
    if (blew) rep.exit_code = kExitBlowup;
  } else if (vw.experiment == "uniqueness") {
    PerturbationKind kind = PerturbationKind::ExpNegligible;
    if (vw.perturbation == "identical") kind = PerturbationKind::Identical;
    if (vw.perturbation == "eps_moderate") kind = PerturbationKind::EpsModerate;
    UniquenessReport ur =
        uniqueness_experiment(E, cfg.profile, moll, data, cfg.s, eps, kind, vw.q_max);
    CsvWriter csv({"eps", "diff_norm"});
    for (size_t i = 0; i < ur.diff_norms.size(); ++i)
      csv.begin_row().add(eps[i]).add(ur.diff_norms[i]);
    csv.write(out + "/difference_net.csv");
    rep.verdicts.push_back({"uniqueness", ur.pass, ur.verdict});
  } else {  // consistency
    SolutionNet dummy;  // consistency has its own report
    ConsistencyReport cr = consistency_experiment(E, cfg.profile, moll, data, cfg.s, eps,
                                                  vw.rel_tol);
    (void)dummy;
    CsvWriter csv({"eps", "diff_norm", "rel"});
    for (size_t i = 0; i < eps.size(); ++i)
      csv.begin_row().add(eps[i]).add(cr.diff_norms[i])
          .add(cr.diff_norms[i] / cr.classical_norm);
    csv.write(out + "/consistency.csv");
    rep.verdicts.push_back(
        {"consistency", cr.pass,
         "final rel " + CsvWriter::format_double(cr.final_rel) + ", order " +
             CsvWriter::format_double(cr.fitted_order) +
             (cr.tail_decreasing ? ", tail decreasing" : ", tail NOT decreasing")});
  }
  for (const auto& v : rep.verdicts)
    if (!v.pass && rep.exit_code == kExitOk) rep.exit_code = kExitVerdictFailure;
}

}  // namespace

bool RunReport::all_pass() const {
  for (const auto& v : verdicts)
    if (!v.pass) return false;
  return true;
}

RunReport run(const ExperimentConfig& cfg, const std::string& subcommand,
              const std::string& out_dir) {
  RunReport rep;
  rep.subcommand = subcommand;
  rep.config_echo = cfg.echo;
  fs::create_directories(out_dir);
  auto t0 = std::chrono::steady_clock::now();
  try {
    if (subcommand == "spectrum")
      run_spectrum(cfg, out_dir, rep);
    else if (subcommand == "transform-check")
      run_transform_check(cfg, out_dir, rep);
    else if (subcommand == "solve")
      run_solve(cfg, out_dir, rep);
    else if (subcommand == "verify")
      run_verify(cfg, out_dir, rep);
    else if (subcommand == "veryweak")
      run_veryweak(cfg, out_dir, rep);
    else
      throw PreconditionError("unknown subcommand '" + subcommand + "'");
  } catch (const NumericalError& e) {
    rep.verdicts.push_back({"numerical", false, e.what()});
    rep.exit_code = kExitBlowup;
  }
  if (rep.exit_code == kExitOk && !rep.all_pass()) rep.exit_code = kExitVerdictFailure;
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_report(rep, out_dir);
  return rep;
}

void write_report(const RunReport& rep, const std::string& out_dir) {
  nlohmann::json j;
  j["subcommand"] = rep.subcommand;
  j["wall_seconds"] = rep.wall_seconds;  // header-only field, not in CSV bodies
  j["exit_code"] = rep.exit_code;
  j["artifact_version"] = "0.1.0";
  j["eigensystem"] = {{"m_modes", rep.m_modes},
                      {"weight_min", rep.weight_min},
                      {"weight_max", rep.weight_max},
                      {"max_residual", rep.max_residual},
                      {"biorth_residual", rep.biorth_residual},
                      {"shift_c", rep.shift_c}};
  nlohmann::json verdicts = nlohmann::json::array();
  for (const auto& v : rep.verdicts)
    verdicts.push_back({{"name", v.name}, {"pass", v.pass}, {"detail", v.detail}});
  j["verdicts"] = verdicts;
  if (!rep.config_echo.empty())
    j["config"] = nlohmann::json::parse(rep.config_echo);
  std::ofstream f(out_dir + "/report.json", std::ios::binary);
  f << j.dump(2) << "\n";
}

}  // namespace specwave
