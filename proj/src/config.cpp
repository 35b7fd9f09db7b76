#include "specwave/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "specwave/errors.hpp"

namespace specwave {

namespace {

using nlohmann::json;

class Collector {
 public:
  void add(const std::string& msg) { errors_.push_back(msg); }
  bool ok() const { return errors_.empty(); }
  [[noreturn]] void raise() const {
    std::string what = "config invalid:";
    for (const auto& e : errors_) what += "\n  - " + e;
    throw ConfigError(what, errors_);
  }
  void finish() const {
    if (!ok()) raise();
  }

 private:
  std::vector<std::string> errors_;
};

void check_keys(const json& obj, const std::string& where,
                const std::set<std::string>& allowed, Collector& errs) {
  if (!obj.is_object()) {
    errs.add(where + ": expected an object");
    return;
  }
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      errs.add(where + ": unknown key '" + it.key() + "'");
}

double get_num(const json& obj, const std::string& where, const std::string& key,
               double fallback, Collector& errs, bool required = false) {
  if (!obj.contains(key)) {
    if (required) errs.add(where + "." + key + ": missing");
    return fallback;
  }
  if (!obj[key].is_number()) {
    errs.add(where + "." + key + ": expected a number");
    return fallback;
  }
  double v = obj[key].get<double>();
  if (!std::isfinite(v)) errs.add(where + "." + key + ": must be finite");
  return v;
}

int get_int(const json& obj, const std::string& where, const std::string& key,
            int fallback, Collector& errs) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer()) {
    errs.add(where + "." + key + ": expected an integer");
    return fallback;
  }
  return obj[key].get<int>();
}

std::string get_str(const json& obj, const std::string& where, const std::string& key,
                    const std::string& fallback, Collector& errs) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string()) {
    errs.add(where + "." + key + ": expected a string");
    return fallback;
  }
  return obj[key].get<std::string>();
}

Expression try_expr(const std::string& text, const std::string& var,
                    const std::string& where, Collector& errs) {
  try {
    return Expression::parse(text, var);
  } catch (const Error& e) {
    errs.add(where + ": " + e.what());
    return {};
  }
}

SymbolicCoefficient parse_coefficient(const json& prof, const std::string& key,
                                      Collector& errs) {
  SymbolicCoefficient c;
  const std::string where = "profile." + key;
  if (prof.contains(key)) {
    if (!prof[key].is_string()) {
      errs.add(where + ": expected an expression string");
    } else {
      std::string text = prof[key].get<std::string>();
      try {
        c.atoms.push_back(DistributionalAtom::regular(text));
      } catch (const Error& e) {
        errs.add(where + ": " + e.what());
      }
    }
  }
  const std::string akey = key + "_atoms";
  if (prof.contains(akey)) {
    if (!prof[akey].is_array()) {
      errs.add("profile." + akey + ": expected an array");
      return c;
    }
    int idx = 0;
    for (const auto& a : prof[akey]) {
      const std::string aw = "profile." + akey + "[" + std::to_string(idx++) + "]";
      check_keys(a, aw, {"kind", "t0", "amplitude", "expr"}, errs);
      if (!a.is_object()) continue;
      std::string kind = get_str(a, aw, "kind", "", errs);
      double t0 = get_num(a, aw, "t0", 0.0, errs);
      double amp = get_num(a, aw, "amplitude", 1.0, errs);
      if (kind == "dirac")
        c.atoms.push_back(DistributionalAtom::dirac(t0, amp));
      else if (kind == "dirac_prime")
        c.atoms.push_back(DistributionalAtom::dirac_prime(t0, amp));
      else if (kind == "heaviside")
        c.atoms.push_back(DistributionalAtom::heaviside(t0, amp));
      else if (kind == "regular") {
        std::string ex = get_str(a, aw, "expr", "0", errs);
        try {
          c.atoms.push_back(DistributionalAtom::regular(ex, amp));
        } catch (const Error& e) {
          errs.add(aw + ".expr: " + e.what());
        }
      } else {
        errs.add(aw + ".kind: unknown atom kind '" + kind +
                 "' (valid: dirac, dirac_prime, heaviside, regular)");
      }
    }
  }
  return c;
}

ExperimentConfig::DataSpec parse_data_spec(const json& obj, const std::string& where,
                                           Collector& errs) {
  ExperimentConfig::DataSpec d;
  if (!obj.is_object()) {
    errs.add(where + ": expected an object");
    return d;
  }
  check_keys(obj, where, {"preset", "index", "amplitude", "coeffs"}, errs);
  if (obj.contains("coeffs")) {
    d.kind = ExperimentConfig::DataSpec::Kind::Coeffs;
    if (!obj["coeffs"].is_array()) {
      errs.add(where + ".coeffs: expected an array of [re, im] pairs");
      return d;
    }
    for (const auto& p : obj["coeffs"]) {
      if (p.is_array() && p.size() == 2 && p[0].is_number() && p[1].is_number())
        d.coeffs.emplace_back(p[0].get<double>(), p[1].get<double>());
      else if (p.is_number())
        d.coeffs.emplace_back(p.get<double>(), 0.0);
      else
        errs.add(where + ".coeffs: entries must be numbers or [re, im] pairs");
    }
    return d;
  }
  std::string preset = get_str(obj, where, "preset", "zero", errs);
  d.index = get_int(obj, where, "index", 0, errs);
  d.amplitude = get_num(obj, where, "amplitude", 1.0, errs);
  if (preset == "zero")
    d.kind = ExperimentConfig::DataSpec::Kind::Zero;
  else if (preset == "mode")
    d.kind = ExperimentConfig::DataSpec::Kind::Mode;
  else if (preset == "gevrey")
    d.kind = ExperimentConfig::DataSpec::Kind::Gevrey;
  else
    errs.add(where + ".preset: unknown preset '" + preset +
             "' (valid: zero, mode, gevrey)");
  return d;
}

RegularityTag parse_tag(const std::string& name, Collector& errs) {
  if (name == "linf1") return RegularityTag::Linf1;
  if (name == "holder_nondeg") return RegularityTag::HolderNondeg;
  if (name == "smooth") return RegularityTag::Smooth;
  if (name == "holder_deg") return RegularityTag::HolderDeg;
  if (name == "distributional") return RegularityTag::Distributional;
  errs.add("profile.tag: unknown tag '" + name +
           "' (valid: linf1, holder_nondeg, smooth, holder_deg, distributional)");
  return RegularityTag::Linf1;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not well-formed JSON: ") + e.what(),
                      {e.what()});
  }
  Collector errs;
  ExperimentConfig cfg;
  check_keys(root, "config",
             {"grid", "potential", "m_modes", "profile", "data", "s", "case",
              "veryweak", "transform_samples", "output_dir", "seed"},
             errs);

  if (root.contains("grid")) {
    const auto& g = root["grid"];
    check_keys(g, "grid", {"radius", "n_points", "fd_order", "refinements"}, errs);
    if (g.is_object()) {
      cfg.radius = get_num(g, "grid", "radius", cfg.radius, errs);
      cfg.n_points = get_int(g, "grid", "n_points", cfg.n_points, errs);
      cfg.fd_order = get_int(g, "grid", "fd_order", cfg.fd_order, errs);
      if (cfg.radius <= 0) errs.add("grid.radius: must be positive");
      if (cfg.n_points < 8) errs.add("grid.n_points: must be >= 8");
      if (cfg.fd_order != 2 && cfg.fd_order != 4 && cfg.fd_order != 6 && cfg.fd_order != 8)
        errs.add("grid.fd_order: must be one of 2, 4, 6, 8");
      if (g.contains("refinements")) {
        if (!g["refinements"].is_array())
          errs.add("grid.refinements: expected an array of node counts");
        else
          for (const auto& r : g["refinements"]) {
            if (!r.is_number_integer() || r.get<int>() < 8)
              errs.add("grid.refinements: entries must be integers >= 8");
            else
              cfg.refinements.push_back(r.get<int>());
          }
      }
    }
  }

  if (root.contains("potential")) {
    const auto& p = root["potential"];
    check_keys(p, "potential", {"preset", "re", "im", "core_radius"}, errs);
    if (p.is_object()) {
      cfg.potential_preset = get_str(p, "potential", "preset", "", errs);
      cfg.potential_re = get_str(p, "potential", "re", "", errs);
      cfg.potential_im = get_str(p, "potential", "im", "", errs);
      cfg.core_radius = get_num(p, "potential", "core_radius", 1.0, errs);
      if (cfg.potential_preset.empty() && cfg.potential_re.empty())
        errs.add("potential: needs either 'preset' or a 're' expression");
      if (!cfg.potential_preset.empty() && cfg.potential_preset != "harmonic" &&
          cfg.potential_preset != "harmonic_complex")
        errs.add("potential.preset: unknown preset '" + cfg.potential_preset +
                 "' (valid: harmonic, harmonic_complex)");
      if (!cfg.potential_re.empty()) try_expr(cfg.potential_re, "x", "potential.re", errs);
      if (!cfg.potential_im.empty()) try_expr(cfg.potential_im, "x", "potential.im", errs);
    }
  } else {
    cfg.potential_preset = "harmonic";
  }

  cfg.m_modes = get_int(root, "config", "m_modes", cfg.m_modes, errs);
  if (cfg.m_modes < 1) errs.add("m_modes: must be >= 1");

  if (root.contains("profile")) {
    const auto& p = root["profile"];
    check_keys(p, "profile",
               {"a", "a_atoms", "q", "q_atoms", "tag", "a0", "T", "alpha", "l"}, errs);
    if (p.is_object()) {
      cfg.profile.a = parse_coefficient(p, "a", errs);
      cfg.profile.q = parse_coefficient(p, "q", errs);
      if (cfg.profile.a.atoms.empty()) errs.add("profile.a: missing coefficient");
      if (cfg.profile.q.atoms.empty())
        cfg.profile.q = SymbolicCoefficient::from_expression("0");
      cfg.profile.tag = parse_tag(get_str(p, "profile", "tag", "linf1", errs), errs);
      cfg.profile.a0 = get_num(p, "profile", "a0", 0.0, errs);
      cfg.profile.T = get_num(p, "profile", "T", 1.0, errs);
      cfg.profile.alpha = get_num(p, "profile", "alpha", 0.0, errs);
      cfg.profile.l = get_int(p, "profile", "l", 0, errs);
      if (cfg.profile.T <= 0) errs.add("profile.T: must be positive");
    }
  } else {
    cfg.profile.a = SymbolicCoefficient::from_expression("1");
    cfg.profile.q = SymbolicCoefficient::from_expression("0");
    cfg.profile.a0 = 1.0;
  }

  if (root.contains("data")) {
    const auto& d = root["data"];
    check_keys(d, "data", {"v0", "v1", "f"}, errs);
    if (d.is_object()) {
      if (d.contains("v0")) cfg.v0 = parse_data_spec(d["v0"], "data.v0", errs);
      if (d.contains("v1")) cfg.v1 = parse_data_spec(d["v1"], "data.v1", errs);
      if (d.contains("f")) {
        const auto& f = d["f"];
        if (f.is_object() && (f.contains("space") || f.contains("time"))) {
          check_keys(f, "data.f", {"space", "time"}, errs);
          if (f.contains("space"))
            cfg.f_space = parse_data_spec(f["space"], "data.f.space", errs);
          cfg.f_time = get_str(f, "data.f", "time", "", errs);
          if (!cfg.f_time.empty()) try_expr(cfg.f_time, "t", "data.f.time", errs);
        } else {
          cfg.f_space = parse_data_spec(f, "data.f", errs);
        }
      }
    }
  } else {
    cfg.v0.kind = ExperimentConfig::DataSpec::Kind::Mode;
  }

  cfg.s = get_num(root, "config", "s", 0.0, errs);

  if (root.contains("case")) {
    if (root["case"].is_number_integer()) {
      cfg.case_id = root["case"].get<int>();
      if (cfg.case_id < 1 || cfg.case_id > 4)
        errs.add("case: must be 1, 2, 3 or 4");
    } else if (root["case"].is_string()) {
      errs.add("case: unknown case selector '" + root["case"].get<std::string>() +
               "' (valid values: 1, 2, 3, 4)");
    } else {
      errs.add("case: must be an integer in 1..4");
    }
  }

  if (root.contains("veryweak")) {
    const auto& v = root["veryweak"];
    check_keys(v, "veryweak",
               {"experiment", "rule", "L", "C", "eps_base", "eps_from", "eps_to",
                "q_max", "perturbation", "rel_tol"},
               errs);
    if (v.is_object()) {
      auto& vw = cfg.veryweak;
      vw.experiment = get_str(v, "veryweak", "experiment", vw.experiment, errs);
      if (vw.experiment != "existence" && vw.experiment != "uniqueness" &&
          vw.experiment != "consistency")
        errs.add("veryweak.experiment: unknown '" + vw.experiment +
                 "' (valid: existence, uniqueness, consistency)");
      vw.rule = get_str(v, "veryweak", "rule", vw.rule, errs);
      if (vw.rule != "identity" && vw.rule != "log" && vw.rule != "calibrated")
        errs.add("veryweak.rule: unknown '" + vw.rule +
                 "' (valid: identity, log, calibrated)");
      vw.L = get_num(v, "veryweak", "L", vw.L, errs);
      vw.C = get_num(v, "veryweak", "C", vw.C, errs);
      vw.eps_base = get_num(v, "veryweak", "eps_base", vw.eps_base, errs);
      vw.eps_from = get_int(v, "veryweak", "eps_from", vw.eps_from, errs);
      vw.eps_to = get_int(v, "veryweak", "eps_to", vw.eps_to, errs);
      vw.q_max = get_int(v, "veryweak", "q_max", vw.q_max, errs);
      vw.perturbation = get_str(v, "veryweak", "perturbation", vw.perturbation, errs);
      if (vw.perturbation != "identical" && vw.perturbation != "exp_negligible" &&
          vw.perturbation != "eps_moderate")
        errs.add("veryweak.perturbation: unknown '" + vw.perturbation +
                 "' (valid: identical, exp_negligible, eps_moderate)");
      vw.rel_tol = get_num(v, "veryweak", "rel_tol", vw.rel_tol, errs);
      if (!(vw.eps_base > 1.0)) errs.add("veryweak.eps_base: must be > 1 (geometric grid)");
      if (vw.eps_from <= vw.eps_to)
        errs.add("veryweak.eps_from/eps_to: need eps_from > eps_to (eps decreasing)");
      if (vw.eps_from > 0) errs.add("veryweak.eps_from: exponent must be <= 0");
    }
  }

  cfg.transform_samples = get_int(root, "config", "transform_samples", 100, errs);
  cfg.output_dir = get_str(root, "config", "output_dir", "out", errs);
  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned() && !root["seed"].is_number_integer())
      errs.add("seed: expected an integer");
    else
      cfg.seed = root["seed"].get<unsigned long long>();
  }

  errs.finish();
  cfg.echo = root.dump(2);
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path, {path});
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

ComplexPotential ExperimentConfig::make_potential() const {
  if (!potential_preset.empty()) return ComplexPotential::preset(potential_preset);
  return ComplexPotential::custom(potential_re, potential_im, core_radius);
}

ModeData ExperimentConfig::make_data(const EigenSystem& E) const {
  ModeData d;
  auto resolve = [&](const DataSpec& spec) {
    std::vector<std::complex<double>> out(E.size(), {0.0, 0.0});
    switch (spec.kind) {
      case DataSpec::Kind::Zero: break;
      case DataSpec::Kind::Mode:
        if (spec.index >= 0 && spec.index < E.size()) out[spec.index] = spec.amplitude;
        break;
      case DataSpec::Kind::Gevrey: {
        // amplitude is the decay constant A: coeff = e^{-A <xi>^{1/max(s,1)}}
        const double expo = 1.0 / std::max(s, 1.0);
        for (int xi = 0; xi < E.size(); ++xi)
          out[xi] = std::exp(-spec.amplitude * std::pow(E.weight(xi), expo));
        break;
      }
      case DataSpec::Kind::Coeffs:
        for (int xi = 0; xi < E.size() && xi < static_cast<int>(spec.coeffs.size()); ++xi)
          out[xi] = spec.coeffs[xi];
        break;
    }
    return out;
  };
  d.v0hat = resolve(v0);
  d.v1hat = resolve(v1);
  if (f_space.kind != DataSpec::Kind::Zero) {
    d.fhat_space = resolve(f_space);
    if (!f_time.empty()) {
      Expression e = Expression::parse(f_time, "t");
      d.f_time = [e](double t) { return e(t); };
    }
  }
  return d;
}

ScaleRule ExperimentConfig::make_rule(const Mollifier& m) const {
  if (veryweak.rule == "identity") return ScaleRule::identity();
  if (veryweak.rule == "log") return ScaleRule::log_rule(veryweak.L, veryweak.C);
  CalibratedScale cal = calibrate_scale(profile, m);
  return cal.rule();
}

std::vector<double> ExperimentConfig::eps_grid() const {
  return geometric_eps(veryweak.eps_base, veryweak.eps_from, veryweak.eps_to);
}

}  // namespace specwave
