#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "valdist/catalog.hpp"
#include "valdist/levost.hpp"
#include "valdist/nevanlinna.hpp"
#include "valdist/report.hpp"
#include "valdist/sampling.hpp"
#include "valdist/tsuji.hpp"
#include "valdist/wiman_valiron.hpp"
#include "valdist/winding.hpp"

namespace valdist::cli {

enum ExitCode : int { ok = 0, numeric = 2, precondition = 3, verification = 4 };

enum class Spacing { automatic, linear, geometric, gap };

struct RunConfig {
  std::string subcommand;
  std::string fn = "notLP";
  std::string catalog;
  std::optional<double> rmin;
  std::optional<double> rmax;
  int grid = 0;
  Spacing spacing = Spacing::automatic;
  std::string flavor = "nevanlinna";
  std::optional<double> tol;
  std::string out;
  std::string csv;
  std::uint64_t seed = 1;
  bool logM = false;
  std::string zeros;
  std::string rolle;
  double a_re = 0.0;
  double a_im = 0.0;
  double s0 = 0.5;
  std::optional<double> R;
  std::size_t samples = 10000;
};

struct CommandOutput {
  int exit_code = ok;
  std::string text;
  /// Side note for stderr; not part of the report.
  std::string message;
};

inline const char* spacing_name(Spacing s) {
  switch (s) {
    case Spacing::linear: return "linear";
    case Spacing::geometric: return "geometric";
    case Spacing::gap: return "gap";
    default: return "auto";
  }
}

inline nlohmann::json config_echo(const RunConfig& c) {
  nlohmann::json j;
  j["subcommand"] = c.subcommand;
  j["fn"] = c.fn;
  j["catalog"] = c.catalog;
  j["rmin"] = c.rmin ? nlohmann::json(*c.rmin) : nlohmann::json(nullptr);
  j["rmax"] = c.rmax ? nlohmann::json(*c.rmax) : nlohmann::json(nullptr);
  j["grid"] = c.grid;
  j["spacing"] = spacing_name(c.spacing);
  j["flavor"] = c.flavor;
  j["tol"] = c.tol ? nlohmann::json(*c.tol) : nlohmann::json(nullptr);
  j["seed"] = c.seed;
  return j;
}

/// n points from lo to hi inclusive. `gap` spaces 1 - r geometrically.
inline std::vector<double> make_grid(double lo, double hi, int n, Spacing sp) {
  if (n < 1) throw PreconditionError("grid needs at least one point");
  if (n > 1 && !(hi > lo)) throw PreconditionError("grid must be strictly increasing (rmin < rmax)");
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    switch (sp) {
      case Spacing::geometric:
        if (!(lo > 0.0)) throw PreconditionError("geometric grid needs rmin > 0");
        g[i] = lo * std::pow(hi / lo, t);
        break;
      case Spacing::gap:
        if (!(hi < 1.0)) throw PreconditionError("gap grid needs rmax < 1");
        g[i] = 1.0 - (1.0 - lo) * std::pow((1.0 - hi) / (1.0 - lo), t);
        break;
      default:
        g[i] = lo + t * (hi - lo);
    }
  }
  g.front() = lo;
  g.back() = hi;
  return g;
}

inline Catalog load_catalog(const RunConfig& c) {
  if (c.catalog.empty()) return Catalog::builtin();
  return Catalog::builtin().merged(Catalog::from_file(c.catalog));
}

inline NevanlinnaOptions options_from(const RunConfig& c) {
  NevanlinnaOptions o;
  if (c.tol) {
    o.quad.rel_tol = *c.tol;
    o.quad.abs_tol = std::min(o.quad.abs_tol, *c.tol);
  }
  o.quad.validate();
  return o;
}

inline std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw PreconditionError("cannot parse number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

inline CommandOutput cmd_characteristic(const RunConfig& c) {
  const auto cat = load_catalog(c);
  const auto f = cat.get(c.fn);
  const auto opt = options_from(c);
  CommandOutput out;
  if (c.flavor == "tsuji") {
    const auto grid = make_grid(c.rmin.value_or(1.0), c.rmax.value_or(100.0), c.grid > 0 ? c.grid : 30,
                                c.spacing == Spacing::automatic ? Spacing::geometric : c.spacing);
    out.text = tsuji_csv(c.fn, tsuji_sweep(f, grid, opt));
    return out;
  }
  if (c.flavor != "nevanlinna") throw PreconditionError("flavor must be nevanlinna or tsuji");
  const auto grid = make_grid(c.rmin.value_or(0.05), c.rmax.value_or(0.9), c.grid > 0 ? c.grid : 18,
                              c.spacing == Spacing::automatic ? Spacing::linear : c.spacing);
  const auto samples = characteristic_sweep(f, grid, opt);
  if (!c.logM) {
    out.text = characteristic_csv(c.fn, samples);
    return out;
  }
  const auto lm = parallel_map<double>(grid.size(), [&](std::size_t i) { return log_max_modulus(f, grid[i]); });
  CsvWriter w({"flavor", "label", "r", "m", "N", "T", "logM"});
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    w.cell(std::string(flavor_name(s.flavor))).cell(c.fn).cell(s.r).cell(s.m).cell(s.N).cell(s.T).cell(lm[i]);
    w.end_row();
  }
  out.text = w.str();
  return out;
}

namespace detail {

inline nlohmann::json check(const std::string& name, bool pass, nlohmann::json details) {
  return {{"name", name}, {"pass", pass}, {"details", std::move(details)}};
}

}  // namespace detail

/// Zero-freeness by winding numbers, plus the entry-specific sampling checks.
inline CommandOutput cmd_verify_example(const RunConfig& c) {
  const auto cat = load_catalog(c);
  const auto f = cat.get(c.fn);
  const auto& entry = cat.entry(c.fn);
  const std::string tag = entry.at("expression-tag").get<std::string>();
  const auto params = entry.value("params", nlohmann::json::object());
  const double radius = 0.95;
  nlohmann::json checks = nlohmann::json::array();

  {
    const auto circle = Contour::circle({}, radius);
    std::vector<int> counts;
    for (int order = 0; order <= 2; ++order) {
      const auto g = order == 0 ? f : derivative(f, order);
      counts.push_back(winding_number(g, circle));
    }
    const bool pass = counts[0] == 0 && counts[1] == 0 && counts[2] == 0;
    checks.push_back(detail::check("zero-free", pass,
                                   {{"radius", radius}, {"winding_f", counts[0]}, {"winding_f1", counts[1]},
                                    {"winding_f2", counts[2]}}));
  }

  if (tag == "exp-exp" || tag == "exp-exp-linear") {
    const double cc = params.value("c", 3.0);
    const auto pts = sample_disc(c.samples, c.seed);
    double worst_left = -inf, worst_right = inf;
    for (cplx z : pts) {
      const cplx w = (1.0 + z) / (1.0 - z);
      worst_left = std::max(worst_left, std::abs(2.0 - z));
      worst_right = std::min(worst_right, std::log(cc) + w.real());
    }
    // |2 - z| < 3 < |c e^W|, the right side kept as a logarithm.
    const bool pass = worst_left < 3.0 && worst_right > std::log(3.0);
    checks.push_back(detail::check("bound-sampling", pass,
                                   {{"samples", pts.size()}, {"max_abs_2_minus_z", worst_left},
                                    {"min_log_abs_c_exp_w", worst_right}}));

    const auto dL = derivative(log_derivative(f), 1);
    const int n = 2000;
    int bad = 0;
    double worst_x = std::nan("");
    for (int k = 0; k < n; ++k) {
      const double x = -0.99 + 1.98 * k / (n - 1);
      const Value v = dL(cplx{x, 0.0});
      const cplx s = v.scaled();
      if (!(s.real() > 0.0) || v.is_pole()) {
        if (bad == 0) worst_x = x;
        ++bad;
      }
    }
    checks.push_back(detail::check("logderiv-increasing", bad == 0,
                                   {{"grid_points", n}, {"failures", bad},
                                    {"first_failure", std::isnan(worst_x) ? nlohmann::json(nullptr)
                                                                          : nlohmann::json(worst_x)}}));
  } else if (tag == "scaled-exp-w") {
    const double cc = params.value("c", 1.0);
    const auto pts = sample_disc(c.samples, c.seed);
    double min_log = inf;
    for (cplx z : pts) min_log = std::min(min_log, f(z).log_abs());
    checks.push_back(detail::check("lower-bound", min_log > std::log(cc),
                                   {{"samples", pts.size()}, {"bound", cc}, {"min_log_abs", min_log}}));
  }

  bool all = true;
  for (const auto& ch : checks) all = all && ch.at("pass").get<bool>();
  nlohmann::json rep{{"config", config_echo(c)}, {"checks", checks}, {"pass", all}};
  CommandOutput out;
  out.text = rep.dump(2) + "\n";
  out.exit_code = all ? ok : verification;
  if (!all) out.message = "verification failed for " + c.fn;
  return out;
}

inline CommandOutput cmd_factorise(const RunConfig& c) {
  nlohmann::json rep{{"config", config_echo(c)}};
  std::vector<double> a, b;
  FunctionHandle psi = constant_one_on_disc();
  bool constant = false;
  if (!c.zeros.empty() || !c.rolle.empty()) {
    a = parse_list(c.zeros);
    b = parse_list(c.rolle);
    const auto built = build_psi(a, b);
    psi = built.psi;
    rep["factorisation"] = {{"a_seq", a}, {"b_seq", b}, {"truncation_K", built.K}, {"tail_bound", built.tail_bound}};
  } else {
    const auto f = load_catalog(c).get(c.fn);
    const auto fac = factorise(f);
    a = fac.a_seq;
    b = fac.b_seq;
    psi = fac.psi;
    constant = fac.constant_branch;
    rep["factorisation"] = to_json(fac);
  }
  rep["psi"] = constant ? "1" : "product";
  const auto h = herglotz_check(psi, c.samples, c.seed);
  rep["herglotz"] = {{"samples", h.samples},        {"min_im", h.constant_branch ? nlohmann::json(nullptr) : nlohmann::json(h.min_im)},
                     {"max_arg_residual", h.max_arg_residual}, {"constant_branch", h.constant_branch},
                     {"pass", h.pass}};
  CommandOutput out;
  out.text = rep.dump(2) + "\n";
  if (!c.csv.empty()) {
    CsvWriter w({"k", "a_k", "b_k"});
    for (std::size_t k = 0; k < a.size(); ++k) {
      w.cell(static_cast<int>(k)).cell(a[k]).cell(k < b.size() ? fmt17(b[k]) : std::string());
      w.end_row();
    }
    std::ofstream os(c.csv, std::ios::binary);
    if (!os) throw PreconditionError("cannot write " + c.csv);
    os << w.str();
  }
  if (!h.pass) {
    out.exit_code = verification;
    out.message = "Im psi > 0 failed";
  }
  return out;
}

inline CommandOutput cmd_wv(const RunConfig& c) {
  const auto h = load_catalog(c).get(c.fn);
  WVConfig cfg;
  cfg.s0 = c.s0;
  cfg.R = c.R ? *c.R : default_R(h, c.s0);
  const double lo = c.rmin.value_or(0.5), hi = c.rmax.value_or(0.99);
  // Default grid r_j = 1 - 2^{-j/k}; --grid sets k.
  const auto grid = c.spacing == Spacing::automatic ? wv_grid(lo, hi, c.grid > 0 ? c.grid : 4)
                                                    : make_grid(lo, hi, c.grid > 0 ? c.grid : 120, c.spacing);
  const auto p = profile_auto_r0(h, cfg, grid);
  CommandOutput out;
  out.text = wv_csv(p);
  out.message = "r0 = " + fmt17(p.config.r0) + ", R = " + fmt17(p.config.R);
  return out;
}

inline CommandOutput cmd_rect(const RunConfig& c) {
  const auto f = load_catalog(c).get(c.fn);
  const auto F = zeta_transform(f);
  const auto opt = options_from(c);
  const auto grid = make_grid(c.rmin.value_or(2.0), c.rmax.value_or(50.0), c.grid > 0 ? c.grid : 30,
                              c.spacing == Spacing::automatic ? Spacing::geometric : c.spacing);
  const auto samples = parallel_map<RectangleSample>(grid.size(), [&](std::size_t i) {
    return rect_characteristics(F, 1.0 / grid[grid.size() - 1 - i], 0.9, opt);
  });
  CommandOutput out;
  out.text = rectangle_csv(c.fn, samples);
  return out;
}

inline CommandOutput cmd_residual(const RunConfig& c) {
  const auto f = load_catalog(c).get(c.fn);
  const auto opt = options_from(c);
  const auto grid = make_grid(c.rmin.value_or(1.0), c.rmax.value_or(50.0), c.grid > 0 ? c.grid : 30,
                              c.spacing == Spacing::automatic ? Spacing::geometric : c.spacing);
  const cplx a{c.a_re, c.a_im};
  const auto rep = fft_residual(f, a, grid, opt);
  CsvWriter w({"label", "a_re", "a_im", "r", "residual"});
  for (std::size_t i = 0; i < rep.r.size(); ++i) {
    w.cell(c.fn).cell(a.real()).cell(a.imag()).cell(rep.r[i]).cell(rep.residual[i]);
    w.end_row();
  }
  CommandOutput out;
  out.text = w.str();
  out.message = "oscillation = " + fmt17(rep.oscillation);
  return out;
}

/// Dispatch with the exit-code policy: precondition 3, numeric 2.
inline CommandOutput run(const RunConfig& c) {
  try {
    if (c.subcommand == "characteristic") return cmd_characteristic(c);
    if (c.subcommand == "verify-example") return cmd_verify_example(c);
    if (c.subcommand == "factorise") return cmd_factorise(c);
    if (c.subcommand == "wv") return cmd_wv(c);
    if (c.subcommand == "rect") return cmd_rect(c);
    if (c.subcommand == "residual") return cmd_residual(c);
    return {precondition, {}, "unknown subcommand '" + c.subcommand + "'"};
  } catch (const PreconditionError& e) {
    return {precondition, {}, e.what()};
  } catch (const NumericError& e) {
    return {numeric, {}, e.what()};
  } catch (const nlohmann::json::exception& e) {
    return {precondition, {}, e.what()};
  }
}

}  // namespace valdist::cli
