#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "valdist/cli.hpp"

int main(int argc, char** argv) {
  using namespace valdist::cli;
  RunConfig cfg;
  CLI::App app{"value-distribution toolkit"};
  app.require_subcommand(1);

  double rmin = 0, rmax = 0, tol = 0, R = 0;
  std::string spacing = "auto";

  auto common = [&](CLI::App* sub) {
    sub->add_option("--fn", cfg.fn, "catalog entry name");
    sub->add_option("--catalog", cfg.catalog, "extra catalog JSON file")->check(CLI::ExistingFile);
    sub->add_option("--rmin", rmin, "smallest radius");
    sub->add_option("--rmax", rmax, "largest radius");
    sub->add_option("--grid", cfg.grid, "number of radii")->check(CLI::PositiveNumber);
    sub->add_option("--spacing", spacing, "auto | linear | geometric | gap")
        ->check(CLI::IsMember({"auto", "linear", "geometric", "gap"}));
    sub->add_option("--tol", tol, "relative quadrature tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--out", cfg.out, "output file (stdout if omitted)");
    sub->add_option("--seed", cfg.seed, "seed for quasi-random sampling");
  };

  auto* ch = app.add_subcommand("characteristic", "T(r) or Tsuji T(r) sweep as CSV");
  common(ch);
  ch->add_option("--flavor", cfg.flavor, "nevanlinna | tsuji")->check(CLI::IsMember({"nevanlinna", "tsuji"}));
  ch->add_flag("--logM", cfg.logM, "add a log M(r) column");

  auto* ve = app.add_subcommand("verify-example", "zero-freeness and sampling checks as JSON");
  common(ve);
  ve->add_option("--samples", cfg.samples, "sample count");

  auto* fa = app.add_subcommand("factorise", "g'/g = P psi factorisation as JSON");
  common(fa);
  fa->add_option("--zeros", cfg.zeros, "explicit zeros a_k, comma separated");
  fa->add_option("--rolle", cfg.rolle, "explicit points b_k, comma separated");
  fa->add_option("--samples", cfg.samples, "Herglotz sample count");
  fa->add_option("--csv", cfg.csv, "also write a_k, b_k as CSV here");

  auto* wv = app.add_subcommand("wv", "Wiman-Valiron profile as CSV");
  common(wv);
  wv->add_option("--s0", cfg.s0, "inner radius s0");
  wv->add_option("--R", R, "level R (default e max|h| on |z| = s0)")->check(CLI::PositiveNumber);

  auto* re = app.add_subcommand("rect", "rectangle characteristics of f(-1/zeta), sigma = 1/r");
  common(re);

  auto* rs = app.add_subcommand("residual", "Tsuji T(r, f) - T(r, 1/(f - a)) as CSV");
  common(rs);
  rs->add_option("--a-re", cfg.a_re, "Re a");
  rs->add_option("--a-im", cfg.a_im, "Im a");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return precondition;
  }

  const auto* sub = app.get_subcommands().front();
  cfg.subcommand = sub->get_name();
  if (sub->count("--rmin")) cfg.rmin = rmin;
  if (sub->count("--rmax")) cfg.rmax = rmax;
  if (sub->count("--tol")) cfg.tol = tol;
  if (sub->get_name() == "wv" && sub->count("--R")) cfg.R = R;
  if (spacing == "linear") cfg.spacing = Spacing::linear;
  if (spacing == "geometric") cfg.spacing = Spacing::geometric;
  if (spacing == "gap") cfg.spacing = Spacing::gap;

  const auto res = run(cfg);
  if (!res.message.empty()) std::cerr << res.message << '\n';
  if (!res.text.empty()) {
    if (cfg.out.empty()) {
      std::cout << res.text;
    } else {
      std::ofstream os(cfg.out, std::ios::binary);
      if (!os) {
        std::cerr << "cannot write " << cfg.out << '\n';
        return precondition;
      }
      os << res.text;
    }
  }
  return res.exit_code;
}
